import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chisquare

from becfeedback.channel import RngStream
from becfeedback.gf2 import (
    Gf2Basis,
    Gf2Vector,
    basis_insert,
    inner_product,
    matrix_rank,
    sample_nonzero_vector,
)

V = Gf2Vector.from_bits


def build(*vectors):
    basis = Gf2Basis.empty(len(vectors[0]))
    for v in vectors:
        basis, _ = basis_insert(basis, V(v))
    return basis


class TestBasisInsert:
    def test_first_vector_raises_rank(self):
        basis, increased = basis_insert(Gf2Basis.empty(3), V("001"))
        assert (basis.rank, increased) == (1, True)

    def test_duplicate_is_ignored(self):
        basis, increased = basis_insert(build("001"), V("001"))
        assert (basis.rank, increased) == (1, False)

    def test_sum_of_stored_rows_is_in_span(self):
        basis, increased = basis_insert(build("001", "010"), V("011"))
        assert (basis.rank, increased) == (2, False)

    def test_span_matches_exhaustive_enumeration(self):
        # every vector of F_2^3 is in span{001, 010} iff its first bit is 0
        basis = build("001", "010")
        for word in range(8):
            assert basis.contains(Gf2Vector(3, word)) == (word < 4)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            basis_insert(Gf2Basis.empty(3), V("01"))

    def test_rows_have_distinct_pivots(self):
        basis = build("110", "011", "101", "111")
        pivots = [r.leading for r in basis.rows]
        assert len(set(pivots)) == len(pivots) == basis.rank == 3


class TestInnerProduct:
    @pytest.mark.parametrize("u, v, expected", [("101", "100", 1), ("111", "110", 0)])
    def test_examples(self, u, v, expected):
        assert inner_product(V(u), V(v)) == expected

    def test_zero_annihilates(self):
        assert all(inner_product(V("000"), Gf2Vector(3, w)) == 0 for w in range(8))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            inner_product(V("10"), V("100"))


class TestVector:
    def test_positional_access_is_left_to_right(self):
        v = V("1000")
        assert [v[i] for i in range(4)] == [1, 0, 0, 0]
        assert v.leading == 0 and str(v) == "1000"

    def test_word_must_fit(self):
        with pytest.raises(ValueError):
            Gf2Vector(2, 4)


class TestSampling:
    def test_k1_is_always_one(self):
        rng = RngStream(7)
        assert all(sample_nonzero_vector(1, rng).word == 1 for _ in range(1000))

    def test_k2_never_zero(self):
        rng = RngStream(8)
        assert all(sample_nonzero_vector(2, rng) for _ in range(2000))

    def test_k0_rejected(self):
        with pytest.raises(ValueError):
            sample_nonzero_vector(0, RngStream(0))

    def test_large_k_spans_multiple_words(self):
        rng = RngStream(3)
        words = [sample_nonzero_vector(130, rng).word for _ in range(200)]
        assert max(words).bit_length() > 64

    @pytest.mark.slow
    def test_uniform_over_nonzero_vectors(self):
        rng = RngStream(2024)
        n = 10**6
        counts = [0] * 8
        for _ in range(n):
            counts[sample_nonzero_vector(3, rng).word] += 1
        assert counts[0] == 0
        for c in counts[1:]:
            p = 1 / 7
            assert abs(c - n * p) <= 5 * (n * p * (1 - p)) ** 0.5
        assert chisquare(counts[1:]).pvalue > 1e-4


@settings(max_examples=200, deadline=None)
@given(k=st.integers(1, 10), data=st.data())
def test_incremental_rank_matches_gaussian_elimination(k, data):
    words = data.draw(st.lists(st.integers(0, (1 << k) - 1), max_size=50))
    basis = Gf2Basis.empty(k)
    for i, w in enumerate(words):
        before = basis.rank
        basis, increased = basis_insert(basis, Gf2Vector(k, w))
        assert basis.rank == before + increased
        assert basis.rank <= min(k, i + 1)
    assert basis.rank == matrix_rank(words, k)


@settings(max_examples=100, deadline=None)
@given(k=st.integers(1, 8), data=st.data())
def test_inserting_span_member_changes_nothing(k, data):
    words = data.draw(st.lists(st.integers(1, (1 << k) - 1), min_size=1, max_size=8))
    basis = Gf2Basis.empty(k)
    for w in words:
        basis, _ = basis_insert(basis, Gf2Vector(k, w))
    combo = 0
    for w, use in zip(words, data.draw(st.lists(st.booleans(), min_size=len(words), max_size=len(words)))):
        combo ^= w if use else 0
    after, increased = basis_insert(basis, Gf2Vector(k, combo))
    assert not increased and after == basis


def test_rank_of_all_vectors_in_small_dimension():
    for k in range(1, 5):
        assert matrix_rank(range(1 << k), k) == k
        for pair in itertools.combinations(range(1, 1 << k), 2):
            assert matrix_rank(pair, k) == 2

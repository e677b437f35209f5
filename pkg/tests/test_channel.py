import math

import pytest
from scipy.stats import chi2_contingency, chisquare

from becfeedback.channel import ChannelSpec, RngStream, Symbol, derive_key, q_output, transmit


class TestRng:
    def test_splitmix64_reference_vector(self):
        # first output of SplitMix64 from state 0
        assert RngStream(0, raw_state=0).next_u64() == 0xE220A8397B1DCDAF

    def test_reproducible(self):
        a = [RngStream(42, 7).next_u64() for _ in range(3)]
        b = [RngStream(42, 7).next_u64() for _ in range(3)]
        assert a == b

    def test_streams_differ(self):
        assert RngStream(42, 0).next_u64() != RngStream(42, 1).next_u64()
        assert derive_key(1, 1) != derive_key(1, 2)

    def test_uniform_range(self):
        rng = RngStream(1)
        xs = [rng.uniform() for _ in range(10000)]
        assert 0.0 <= min(xs) and max(xs) < 1.0
        assert abs(sum(xs) / len(xs) - 0.5) < 0.02

    def test_bounded_is_unbiased(self):
        rng = RngStream(5)
        counts = [0] * 7
        for _ in range(70000):
            counts[rng.bounded(7)] += 1
        assert chisquare(counts).pvalue > 1e-4

    def test_bounded_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            RngStream(0).bounded(0)


class TestChannelSpec:
    def test_domain(self):
        ChannelSpec(0.99)
        for bad in (1.0, -0.1):
            with pytest.raises(ValueError):
                ChannelSpec(bad)

    def test_q_probabilities(self):
        assert ChannelSpec(0.5).q_probabilities == (0.25, 0.25, 0.5)


class TestTransmit:
    def test_noiseless(self):
        rng = RngStream(3)
        assert all(transmit(ChannelSpec(0.0), 1, rng) is Symbol.ONE for _ in range(1000))

    def test_erasure_fraction(self):
        rng = RngStream(11)
        n = 10**6
        erased = sum(transmit(ChannelSpec(0.5), 0, rng) is Symbol.ERASURE for _ in range(n))
        assert abs(erased - n / 2) <= 3 * math.sqrt(n / 4)

    def test_never_flips(self):
        rng = RngStream(12)
        spec = ChannelSpec(0.3)
        for i in range(5000):
            bit = i & 1
            assert transmit(spec, bit, rng) in (Symbol(bit), Symbol.ERASURE)

    def test_erasures_independent_of_input(self):
        rng = RngStream(13)
        spec = ChannelSpec(0.4)
        table = [[0, 0], [0, 0]]
        for i in range(40000):
            bit = rng.bit()
            table[bit][transmit(spec, bit, rng) is Symbol.ERASURE] += 1
        assert chi2_contingency(table).pvalue > 1e-4


class TestQOutput:
    def test_noiseless_is_fair_coin(self):
        rng = RngStream(4)
        outs = [q_output(ChannelSpec(0.0), rng) for _ in range(20000)]
        assert Symbol.ERASURE not in outs
        assert abs(outs.count(Symbol.ONE) - 10000) <= 3 * math.sqrt(5000)

    def test_frequencies(self):
        rng = RngStream(9)
        n = 10**6
        counts = [0, 0, 0]
        spec = ChannelSpec(0.5)
        for _ in range(n):
            counts[q_output(spec, rng)] += 1
        for c, p in zip(counts, spec.q_probabilities):
            assert abs(c - n * p) <= 3 * math.sqrt(n * p * (1 - p))

"""Bit-packed vectors over GF(2) and an incremental echelon basis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .channel import RngStream


@dataclass(frozen=True)
class Gf2Vector:
    """A length-``k`` binary vector.

    Position 0 is the leftmost coordinate in :meth:`from_bits` notation.
    Packing is internal; use indexing for positional access.
    """

    k: int
    word: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("dimension must be at least 1")
        if self.word < 0 or self.word >> self.k:
            raise ValueError(f"word does not fit in {self.k} bits")

    @classmethod
    def from_bits(cls, bits: str | Sequence[int]) -> "Gf2Vector":
        if isinstance(bits, str):
            bits = [int(c) for c in bits]
        word = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b!r}")
            word = (word << 1) | b
        return cls(len(bits), word)

    def __getitem__(self, i: int) -> int:
        if not 0 <= i < self.k:
            raise IndexError(i)
        return (self.word >> (self.k - 1 - i)) & 1

    def __len__(self) -> int:
        return self.k

    def __xor__(self, other: "Gf2Vector") -> "Gf2Vector":
        _check_dims(self, other)
        return Gf2Vector(self.k, self.word ^ other.word)

    def __bool__(self) -> bool:
        return self.word != 0

    def __str__(self) -> str:
        return format(self.word, f"0{self.k}b")

    @property
    def leading(self) -> int:
        """Position of the first nonzero coordinate, or -1 for the zero vector."""
        if not self.word:
            return -1
        return self.k - self.word.bit_length()


def _check_dims(u: Gf2Vector, v: Gf2Vector) -> None:
    if u.k != v.k:
        raise ValueError(f"dimension mismatch: {u.k} vs {v.k}")


def inner_product(u: Gf2Vector, v: Gf2Vector) -> int:
    _check_dims(u, v)
    return (u.word & v.word).bit_count() & 1


def sample_nonzero_vector(k: int, rng: RngStream) -> Gf2Vector:
    """Uniform draw from the ``2**k - 1`` nonzero vectors, by rejecting zero."""
    if k < 1:
        raise ValueError("dimension must be at least 1")
    while True:
        word = 0
        remaining = k
        while remaining > 0:
            take = min(remaining, 64)
            word = (word << take) | rng.bits(take)
            remaining -= take
        if word:
            return Gf2Vector(k, word)


@dataclass(frozen=True)
class Gf2Basis:
    """Echelon basis: stored rows have pairwise distinct leading positions."""

    k: int
    rows: tuple[Gf2Vector, ...] = ()

    @classmethod
    def empty(cls, k: int) -> "Gf2Basis":
        if k < 1:
            raise ValueError("dimension must be at least 1")
        return cls(k)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, v: Gf2Vector) -> Gf2Vector:
        """Residue of ``v`` after eliminating every stored pivot."""
        if v.k != self.k:
            raise ValueError(f"dimension mismatch: basis {self.k} vs vector {v.k}")
        word = v.word
        for row in self.rows:
            if (word >> (self.k - 1 - row.leading)) & 1:
                word ^= row.word
        return Gf2Vector(self.k, word)

    def contains(self, v: Gf2Vector) -> bool:
        return not self.reduce(v)


def basis_insert(basis: Gf2Basis, v: Gf2Vector) -> tuple[Gf2Basis, bool]:
    """Add ``v`` to the span. Returns the new basis and whether the rank grew."""
    residue = basis.reduce(v)
    if not residue:
        return basis, False
    rows = sorted(basis.rows + (residue,), key=lambda r: r.leading)
    return Gf2Basis(basis.k, tuple(rows)), True


def matrix_rank(rows: Iterable[int], n_cols: int) -> int:
    """Rank of a stacked matrix by full Gaussian elimination (rows as int bitsets)."""
    work = [r for r in rows if r]
    rank = 0
    for col in range(n_cols):
        pivot = next((i for i in range(rank, len(work)) if (work[i] >> col) & 1), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        for i in range(len(work)):
            if i != rank and (work[i] >> col) & 1:
                work[i] ^= work[rank]
        rank += 1
    return rank

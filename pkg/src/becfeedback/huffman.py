"""Optimal prefix codes for M equiprobable messages.

The production path builds the code from its length profile: with
``f = floor(log2 M)``, the first ``2**(f+1) - M`` messages get length ``f``
and the rest get ``f + 1``. A heap-based Huffman merge is kept as an
independent oracle.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable


@dataclass(frozen=True)
class PrefixCode:
    """Canonical prefix code stored as runs of ``(length, count)``.

    Messages are numbered ``0 .. M-1`` and receive lengths in nondecreasing
    order, so shorter codewords go to lower message indices. Codewords are the
    canonical (sorted, sequential) patterns for that length sequence.
    """

    M: int
    runs: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("a code needs at least one message")
        if sum(c for _, c in self.runs) != self.M:
            raise ValueError("run counts do not add up to M")
        lengths = [l for l, _ in self.runs]
        if lengths != sorted(set(lengths)) or any(c <= 0 for _, c in self.runs):
            raise ValueError("runs must have strictly increasing lengths and positive counts")
        if self.kraft_sum() > 1:
            raise ValueError("length profile violates the Kraft inequality")

    @classmethod
    def from_lengths(cls, lengths: Iterable[int]) -> "PrefixCode":
        counts: dict[int, int] = {}
        for l in lengths:
            counts[l] = counts.get(l, 0) + 1
        return cls(sum(counts.values()), tuple(sorted(counts.items())))

    def kraft_sum(self) -> Fraction:
        return sum((Fraction(c, 1 << l) for l, c in self.runs), Fraction(0))

    @cached_property
    def _first_codes(self) -> tuple[tuple[int, int, int, int], ...]:
        # (length, first message index, first canonical code value, count) per run
        table = []
        code, prev_len, index = 0, self.runs[0][0], 0
        for length, count in self.runs:
            code <<= length - prev_len
            table.append((length, index, code, count))
            code += count
            index += count
            prev_len = length
        return tuple(table)

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(l for l, c in self.runs for _ in range(c))

    @property
    def codewords(self) -> tuple[str, ...]:
        return tuple(self.encode(w) for w in range(self.M))

    def length_of(self, w: int) -> int:
        return self.codeword_int(w)[1]

    def codeword_int(self, w: int) -> tuple[int, int]:
        """Codeword of message ``w`` as ``(value, length)``."""
        if not 0 <= w < self.M:
            raise IndexError(f"message {w} outside [0, {self.M})")
        for length, first, code, count in self._first_codes:
            if w < first + count:
                return code + (w - first), length
        raise AssertionError("unreachable")

    def encode(self, w: int) -> str:
        value, length = self.codeword_int(w)
        return format(value, f"0{length}b") if length else ""

    def decode(self, bits: str | Iterable[int]) -> tuple[int, int]:
        """Parse one codeword from the front of ``bits``.

        Returns ``(message, bits consumed)``. Raises ``ValueError`` when the
        input ends before a codeword completes.
        """
        value, read = 0, 0
        it = iter(bits)
        for length, first, code, count in self._first_codes:
            while read < length:
                try:
                    b = next(it)
                except StopIteration:
                    raise ValueError("bit sequence ended inside a codeword") from None
                value = (value << 1) | int(b)
                read += 1
            if code <= value < code + count:
                return first + (value - code), read
        raise ValueError("bit pattern is not a codeword of this code")


def _profile(M: int) -> tuple[int, int]:
    f = M.bit_length() - 1
    return f, (1 << (f + 1)) - M


def equiprobable_code(M: int) -> PrefixCode:
    """Huffman code for ``M >= 2`` equally likely messages, built directly."""
    if M < 2:
        raise ValueError("need at least two messages")
    f, n_short = _profile(M)
    if n_short == M:
        return PrefixCode(M, ((f, M),))
    return PrefixCode(M, ((f, n_short), (f + 1, M - n_short)))


def average_length(code: PrefixCode) -> Fraction:
    return Fraction(sum(l * c for l, c in code.runs), code.M)


def reference_huffman(M: int) -> PrefixCode:
    """Textbook two-smallest merge on uniform weights.

    Each heap entry carries the depth multiset of its leaves; merging pushes
    every leaf one level down.
    """
    if M < 2:
        raise ValueError("need at least two messages")
    # (weight, tiebreak, {depth: count})
    heap = [(1, i, {0: 1}) for i in range(M)]
    heapq.heapify(heap)
    tiebreak = M
    while len(heap) > 1:
        w1, _, d1 = heapq.heappop(heap)
        w2, _, d2 = heapq.heappop(heap)
        merged: dict[int, int] = {}
        for d in (d1, d2):
            for depth, count in d.items():
                merged[depth + 1] = merged.get(depth + 1, 0) + count
        heapq.heappush(heap, (w1 + w2, tiebreak, merged))
        tiebreak += 1
    return PrefixCode(M, tuple(sorted(heap[0][2].items())))

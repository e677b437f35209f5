"""Binary erasure channel, its capacity-achieving output channel, and the RNG.

Randomness comes from a counter-based SplitMix64 stream keyed by
``(seed, stream)``. The compiled kernels use the same generator, so a trial
produces the same channel realization on either backend.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
_TWO_POW_M53 = 1.0 / (1 << 53)


def mix64(z: int) -> int:
    """SplitMix64 finalizer (a bijection on 64-bit words)."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive_key(seed: int, purpose: int = 0) -> int:
    """Fold a purpose tag into a user seed so unrelated runs never share streams."""
    return mix64((seed & MASK64) ^ mix64(purpose * GOLDEN + 1))


def stream_state(key: int, stream: int) -> int:
    return mix64(key ^ mix64((stream + GOLDEN) & MASK64))


class RngStream:
    """Per-trial random stream.

    Identical ``(seed, stream)`` pairs give identical draw sequences on every
    platform. ``seed`` is used verbatim as the 64-bit key; use
    :func:`derive_key` to separate independent experiments.
    """

    __slots__ = ("seed", "stream", "_state")

    def __init__(self, seed: int, stream: int = 0, *, raw_state: int | None = None):
        self.seed = seed & MASK64
        self.stream = stream
        self._state = stream_state(self.seed, stream) if raw_state is None else raw_state & MASK64

    def next_u64(self) -> int:
        self._state = (self._state + GOLDEN) & MASK64
        return mix64(self._state)

    def uniform(self) -> float:
        """Uniform on [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * _TWO_POW_M53

    def bit(self) -> int:
        return self.next_u64() >> 63

    def bounded(self, n: int) -> int:
        """Unbiased integer in ``[0, n)`` by rejection of the low residue class."""
        if n <= 0:
            raise ValueError("bound must be positive")
        threshold = ((1 << 64) - n) % n
        while True:
            x = self.next_u64()
            if x >= threshold:
                return x % n

    def bits(self, k: int) -> int:
        """``k`` random bits (``1 <= k <= 64``) taken from the top of one word."""
        return self.next_u64() >> (64 - k)


class Symbol(enum.IntEnum):
    ZERO = 0
    ONE = 1
    ERASURE = 2


@dataclass(frozen=True)
class ChannelSpec:
    """BEC with erasure probability ``delta`` in ``[0, 1)``."""

    delta: float

    def __post_init__(self):
        if not 0.0 <= self.delta < 1.0:
            raise ValueError(f"erasure probability must lie in [0, 1), got {self.delta!r}")

    @property
    def capacity(self) -> float:
        return 1.0 - self.delta

    @property
    def q_probabilities(self) -> tuple[float, float, float]:
        """Capacity-achieving output law ``(Q(0), Q(1), Q(e))``."""
        half = (1.0 - self.delta) / 2.0
        return half, half, self.delta


def transmit(spec: ChannelSpec, bit: int, rng: RngStream) -> Symbol:
    """Send one bit through the BEC: erased with probability delta, otherwise intact."""
    if rng.uniform() < spec.delta:
        return Symbol.ERASURE
    return Symbol(bit & 1)


def q_output(spec: ChannelSpec, rng: RngStream) -> Symbol:
    """One output of the input-independent channel Q."""
    if rng.uniform() < spec.delta:
        return Symbol.ERASURE
    return Symbol(rng.bit())

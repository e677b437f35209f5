"""Monte Carlo simulators for the feedback coding schemes over the BEC.

* Huffman-repeat VLF code: send the Huffman codeword of the message, repeating
  each bit until it arrives unerased.
* VLSF codes with compatibility-set decoding: the decoder stops as soon as a
  single codeword agrees with every unerased output. Codebooks come from the
  iid Bernoulli(1/2) ensemble, the balanced-column ensemble, or the random
  linear fountain ensemble.
* The Huffman-repeat decoder driven by the input-independent channel Q.

A target error probability ``eps`` is realized with per-trial common
randomness: with probability ``eps`` the decoder stops at time 0 and outputs
message 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import _runner
from .channel import ChannelSpec, derive_key, mix64

DEFAULT_CAP = 100_000
MAX_SURVIVOR_M = 1 << 20
MAX_LINEAR_K = 63

_PURPOSE_HUFFMAN = 0x4855_0001
_PURPOSE_VLSF = 0x564C_0000
_PURPOSE_Q = 0x5143_0001
_WALD_SALT = 0x5741_4C44


class Ensemble(enum.IntEnum):
    IID = 0
    BALANCED = 1
    LINEAR = 2

    @classmethod
    def parse(cls, name: str | "Ensemble") -> "Ensemble":
        if isinstance(name, Ensemble):
            return name
        aliases = {"iid": cls.IID, "iid-bernoulli-half": cls.IID,
                   "balanced": cls.BALANCED, "balanced-columns": cls.BALANCED,
                   "linear": cls.LINEAR, "linear-fountain": cls.LINEAR}
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"unknown ensemble {name!r}; expected one of {sorted(aliases)}") from None


@dataclass(frozen=True)
class SimConfig:
    M: int
    delta: float
    eps: float = 0.0
    trials: int = 100_000
    seed: int = 0
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.M < 2:
            raise ValueError("need at least two messages")
        ChannelSpec(self.delta)
        if not 0.0 <= self.eps <= 1.0:
            raise ValueError("error probability must lie in [0, 1]")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if self.cap < 1:
            raise ValueError("truncation cap must be at least 1")


@dataclass(frozen=True)
class SimEstimate:
    """Summary of a Monte Carlo run.

    ``mean`` and ``stderr`` cover completed trials only; truncated trials are
    counted separately. ``errors`` includes wrong guesses on dropped trials,
    ``decode_errors`` only wrong decisions of the actual decoder.
    """

    mean: float
    stderr: float
    completed: int
    truncated: int
    errors: int
    dropped: int = 0
    decode_errors: int = 0

    @classmethod
    def from_accumulator(cls, acc: Sequence[int]) -> "SimEstimate":
        n, total, total_sq, truncated, errors, dropped, decode_errors = acc
        if n == 0:
            return cls(math.nan, math.nan, 0, truncated, errors, dropped, decode_errors)
        mean = total / n
        if n > 1:
            var = Fraction(n * total_sq - total * total, n * (n - 1))
            stderr = math.sqrt(var / n)
        else:
            stderr = math.nan
        return cls(mean, stderr, n, truncated, errors, dropped, decode_errors)

    @property
    def trials(self) -> int:
        return self.completed + self.truncated

    @property
    def empirical_error(self) -> float:
        return self.errors / self.completed if self.completed else math.nan

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.mean - target) <= sigmas * self.stderr


def simulate_vlf_huffman_repeat(cfg: SimConfig, *, workers: int = 1,
                                backend: str | None = None) -> SimEstimate:
    """Huffman-repeat VLF code; mean estimates ``(1 - eps) lstar(M) / (1 - delta)``."""
    key = derive_key(cfg.seed, _PURPOSE_HUFFMAN)
    acc = _runner.run("huffman_repeat", key, cfg.trials, (cfg.M, cfg.eps, cfg.delta, cfg.cap),
                      workers=workers, backend=backend)
    return _checked(SimEstimate.from_accumulator(acc))


def simulate_vlsf(cfg: SimConfig, ensemble: Ensemble | str, *, workers: int = 1,
                  backend: str | None = None) -> SimEstimate:
    """Stop-feedback code with compatibility-set decoding over a random codebook.

    Columns are generated lazily, and only at unerased positions, since an
    erased column is never seen by the decoder.
    """
    ensemble = Ensemble.parse(ensemble)
    if ensemble is Ensemble.LINEAR:
        if cfg.M & (cfg.M - 1):
            raise ValueError("the linear fountain ensemble needs M to be a power of two")
        if cfg.M.bit_length() - 1 > MAX_LINEAR_K:
            raise ValueError(f"linear fountain simulation supports k <= {MAX_LINEAR_K}")
    elif cfg.M > MAX_SURVIVOR_M:
        raise ValueError(f"compatibility-set simulation supports M <= {MAX_SURVIVOR_M}")
    key = derive_key(cfg.seed, _PURPOSE_VLSF + int(ensemble))
    acc = _runner.run("vlsf", key, cfg.trials, (int(ensemble), cfg.M, cfg.eps, cfg.delta, cfg.cap),
                      workers=workers, backend=backend)
    return _checked(SimEstimate.from_accumulator(acc))


@dataclass(frozen=True)
class SuccessEstimate:
    success: float
    stderr: float
    completed: int
    truncated: int
    blocklength: SimEstimate

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.success - target) <= sigmas * self.stderr


def simulate_q_channel_error(M: int, delta: float, trials: int, seed: int = 0, *,
                             cap: int = DEFAULT_CAP, workers: int = 1,
                             backend: str | None = None) -> SuccessEstimate:
    """Probability that the Huffman-repeat decoder is right when fed Q's outputs."""
    cfg = SimConfig(M, delta, 0.0, trials, seed, cap)
    key = derive_key(cfg.seed, _PURPOSE_Q)
    acc = _runner.run("q_channel", key, trials, (M, delta, cap), workers=workers, backend=backend)
    est = SimEstimate.from_accumulator(acc)
    n = est.completed
    p = 1.0 - est.errors / n if n else math.nan
    stderr = math.sqrt(p * (1.0 - p) / n) if n else math.nan
    return SuccessEstimate(p, stderr, n, est.truncated, est)


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    stderr: float
    at_delta: SimEstimate
    at_zero: SimEstimate

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        return abs(self.ratio - target) <= sigmas * self.stderr


def wald_ratio_check(ensemble: Ensemble | str, M: int, delta: float, trials: int, seed: int = 0, *,
                     cap: int = DEFAULT_CAP, workers: int = 1,
                     backend: str | None = None) -> RatioEstimate:
    """Mean blocklength at ``delta`` over the mean at ``delta = 0``; should be ``1/(1-delta)``.

    The two runs use independent streams; the standard error follows from the
    delta method.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("the ratio check needs 0 < delta < 1")
    noisy = simulate_vlsf(SimConfig(M, delta, 0.0, trials, seed, cap), ensemble,
                          workers=workers, backend=backend)
    clean = simulate_vlsf(SimConfig(M, 0.0, 0.0, trials, mix64(seed ^ _WALD_SALT), cap), ensemble,
                          workers=workers, backend=backend)
    ratio = noisy.mean / clean.mean
    rel = math.hypot(noisy.stderr / noisy.mean, clean.stderr / clean.mean)
    return RatioEstimate(ratio, ratio * rel, noisy, clean)


def _checked(est: SimEstimate) -> SimEstimate:
    if est.decode_errors:
        raise RuntimeError(f"decoder produced {est.decode_errors} wrong decisions on a zero-error scheme")
    return est


def compatibility_stop_time(columns: Sequence[int], erased: Sequence[bool], w: int,
                            M: int) -> int | None:
    """Stopping time of the compatibility decoder on an explicit codebook.

    ``columns[n]`` is a bitmask over messages (bit ``r`` is message ``r``'s
    symbol at time ``n + 1``). Returns None if more than one message is still
    compatible after the last column.
    """
    if not 0 <= w < M:
        raise ValueError("transmitted message outside the codebook")
    survivors = (1 << M) - 1
    for n, (col, e) in enumerate(zip(columns, erased), start=1):
        if e:
            continue
        col &= (1 << M) - 1
        survivors &= col if (col >> w) & 1 else ~col
        if survivors == 1 << w:
            return n
    return None


def balanced_agreement_probability(M: int) -> Fraction:
    """Exact probability that two fixed rows of a balanced column are equal."""
    z = (M + 1) // 2
    return Fraction(z * (z - 1) + (M - z) * (M - z - 1), M * (M - 1))

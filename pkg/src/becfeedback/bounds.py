"""Closed-form blocklength bounds for feedback codes over the BEC.

Every function returns a :class:`BoundValue` holding the expected number of
channel uses. Rational-valued bounds accept ``exact=True`` and then also
carry the value as a :class:`~fractions.Fraction` (floats are converted
exactly, so pass ``Fraction("0.1")`` for a decimal erasure probability).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Union

Real = Union[int, float, Fraction]


class Kind(str, enum.Enum):
    """Bound kinds, in the fixed order used for tabulation."""

    ACH_REPEAT = "ach-repeat"
    CONV_FANO = "conv-fano"
    ACH_HUFFMAN = "ach-huffman"
    CONV_SPRT = "conv-sprt"
    ZERO_ERROR = "zero-error"
    VLSF_IID = "vlsf-iid"
    VLSF_EXPURGATED = "vlsf-expurgated"
    VLSF_LINEAR = "vlsf-linear"

    @property
    def side(self) -> str:
        if self in (Kind.CONV_FANO, Kind.CONV_SPRT):
            return "converse"
        if self is Kind.ZERO_ERROR:
            return "exact"
        return "achievability"


@dataclass(frozen=True)
class BoundQuery:
    M: int
    eps: Real = 0
    delta: Real = 0
    kind: Kind = Kind.ZERO_ERROR

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.M < 2:
            raise ValueError("need at least two messages")
        if not 0 <= self.eps <= 1:
            raise ValueError(f"error probability must lie in [0, 1], got {self.eps!r}")
        _check_delta(self.delta)
        if self.kind is Kind.CONV_FANO and self.eps > 1 - Fraction(1, self.M):
            raise ValueError("Fano-type converse needs eps <= 1 - 1/M")
        if self.kind is Kind.VLSF_LINEAR and self.M & (self.M - 1):
            raise ValueError("the linear ensemble needs M to be a power of two")


@dataclass(frozen=True)
class BoundValue:
    """Expected blocklength of a bound; the rate is derived, never stored."""

    M: int
    blocklength: float
    side: str
    exact: Fraction | None = None

    def __post_init__(self):
        if self.blocklength < 0:
            raise ValueError("blocklength cannot be negative")

    @property
    def rate(self) -> float:
        """Bits per channel use; ``inf`` for a zero blocklength."""
        if self.blocklength == 0:
            return math.inf
        return rate_of(self.M, self.blocklength)


def _check_delta(delta: Real) -> None:
    if not 0 <= delta < 1:
        raise ValueError(f"erasure probability must lie in [0, 1), got {delta!r}")


def _value(M: int, side: str, numerator: Real, delta: Real, exact: bool) -> BoundValue:
    if exact:
        q = Fraction(numerator) / (1 - Fraction(delta))
        return BoundValue(M, float(q), side, q)
    return BoundValue(M, float(numerator) / (1.0 - float(delta)), side)


def floor_log2(x: Real) -> int:
    """Exact ``floor(log2 x)`` for positive ints, Fractions and floats."""
    if x <= 0:
        raise ValueError(f"log2 undefined for {x!r}")
    if isinstance(x, float):
        return math.frexp(x)[1] - 1
    q = Fraction(x)
    f = q.numerator.bit_length() - q.denominator.bit_length()
    # 2**f <= x < 2**(f+1) after at most one correction
    if Fraction(2) ** f > q:
        f -= 1
    return f


def lstar(x: Real) -> float:
    """``floor(log2 x) + 2 (1 - 2**(floor(log2 x) - log2 x))`` for ``x > 0``.

    At integer ``x`` this is the average Huffman length for ``x``
    equiprobable messages.
    """
    f = floor_log2(x)
    return f + 2.0 * (1.0 - math.ldexp(1.0, f) / float(x))


def lstar_exact(x: Real) -> Fraction:
    """:func:`lstar` in rational arithmetic, for rational ``x > 0``."""
    q = Fraction(x)
    f = floor_log2(q)
    return f + 2 * (1 - Fraction(2) ** f / q)


def binary_entropy(x: Real) -> float:
    """Entropy in bits of a Bernoulli(x) variable, with ``h(0) = h(1) = 0``."""
    if not 0 <= x <= 1:
        raise ValueError(f"binary entropy needs x in [0, 1], got {x!r}")
    x = float(x)
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def rate_of(M: int, blocklength: Real) -> float:
    if blocklength <= 0:
        raise ValueError("rate needs a positive blocklength")
    return math.log2(M) / float(blocklength)


def _check_query(M: int, eps: Real, delta: Real) -> None:
    if M < 2:
        raise ValueError("need at least two messages")
    if not 0 <= eps <= 1:
        raise ValueError(f"error probability must lie in [0, 1], got {eps!r}")
    _check_delta(delta)


def ach_repeat(M: int, eps: Real, delta: Real, *, exact: bool = False) -> BoundValue:
    """Repeat each of ``ceil(log2 M)`` bits until unerased; drop w.p. eps."""
    _check_query(M, eps, delta)
    bits = (M - 1).bit_length()
    num = (1 - Fraction(eps)) * bits if exact else (1.0 - float(eps)) * bits
    return _value(M, "achievability", num, delta, exact)


def conv_fano(M: int, eps: Real, delta: Real) -> BoundValue:
    """Variable-length Fano converse, clamped at zero."""
    _check_query(M, eps, delta)
    if eps > 1 - Fraction(1, M):
        raise ValueError("Fano-type converse needs eps <= 1 - 1/M")
    e = float(eps)
    num = (1.0 - e) * math.log2(M) - binary_entropy(e)
    return BoundValue(M, max(0.0, num / (1.0 - float(delta))), "converse")


def ach_huffman(M: int, eps: Real, delta: Real, *, exact: bool = False) -> BoundValue:
    """Huffman code with per-bit repetition; drop w.p. eps."""
    _check_query(M, eps, delta)
    if exact:
        num = (1 - Fraction(eps)) * lstar_exact(M)
    else:
        num = (1.0 - float(eps)) * lstar(M)
    return _value(M, "achievability", num, delta, exact)


def conv_sprt(M: int, eps: Real, delta: Real, *, exact: bool = False) -> BoundValue:
    """Sequential-test converse; vacuous (zero) once ``M (1 - eps) <= 1``."""
    _check_query(M, eps, delta)
    if exact:
        x = M * (1 - Fraction(eps))
        num = (1 - Fraction(eps)) * lstar_exact(x) if x >= 1 else Fraction(0)
    else:
        x = M * (1.0 - float(eps))
        num = (1.0 - float(eps)) * lstar(x) if x >= 1 else 0.0
    return _value(M, "converse", num, delta, exact)


def zero_error_blocklength(M: int, delta: Real, *, exact: bool = False) -> BoundValue:
    """Minimum average blocklength of a zero-error VLF code."""
    _check_query(M, 0, delta)
    num = lstar_exact(M) if exact else lstar(M)
    return _value(M, "exact", num, delta, exact)


def iid_tau0_exact(M: int) -> Fraction:
    """Mean stopping time of the iid ensemble at delta = 0 by inclusion-exclusion."""
    total = Fraction(1)
    n = M - 1
    for i in range(1, M):
        term = Fraction(math.comb(n, i), (1 << i) - 1)
        total += term if i % 2 else -term
    return total


def iid_tau0_series(M: int, tol: float = 1e-12) -> tuple[float, float]:
    """Direct sum of ``P(tau0 > n)`` with a certified tail.

    Returns ``(value, error_bound)``; the neglected tail after ``N`` terms is
    at most ``(M - 1) 2**(1 - N)``.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    total = 0.0
    n = 0
    while (M - 1) * math.ldexp(2.0, -n) >= tol:
        # 1 - (1 - 2^-n)^(M-1), stable for large n
        total += 1.0 if n == 0 else -math.expm1((M - 1) * math.log1p(-math.ldexp(1.0, -n)))
        n += 1
    return total, (M - 1) * math.ldexp(2.0, -n)


EXACT_IID_MAX_M = 64


def vlsf_iid(
    M: int,
    delta: Real,
    *,
    eps: Real = 0,
    mode: Literal["exact", "series", "auto"] = "auto",
    tol: float = 1e-12,
) -> BoundValue:
    """iid Bernoulli(1/2) codebooks with compatibility-set stopping.

    ``exact`` uses rational inclusion-exclusion (limited to ``M <= 64``);
    ``series`` sums the stopping-time tail to within ``tol``; ``auto`` picks
    exact when allowed.
    """
    _check_query(M, eps, delta)
    if mode == "auto":
        mode = "exact" if M <= EXACT_IID_MAX_M else "series"
    if mode == "exact":
        if M > EXACT_IID_MAX_M:
            raise ValueError(f"exact mode is limited to M <= {EXACT_IID_MAX_M}; use series mode")
        return _value(M, "achievability", (1 - Fraction(eps)) * iid_tau0_exact(M), delta, True)
    if mode != "series":
        raise ValueError(f"unknown mode {mode!r}")
    tau0, _ = iid_tau0_series(M, tol)
    return _value(M, "achievability", (1.0 - float(eps)) * tau0, delta, False)


def balanced_gamma(M: int) -> float:
    """Reciprocal of the probability that two fixed rows of a balanced column agree."""
    if M < 3:
        return math.inf
    return 2.0 + 1.0 / (-(-M // 2) - 1)


def vlsf_expurgated(M: int, delta: Real, *, eps: Real = 0) -> BoundValue:
    """Balanced-column ensemble with the truncated union bound.

    At ``M = 2`` the expression is taken in its limit, ``1 / (1 - delta)``.
    """
    _check_query(M, eps, delta)
    if M == 2:
        tau0 = 1.0
    else:
        g = balanced_gamma(M)
        m = math.log(M - 1) / math.log(g)
        fm = math.floor(m)
        tau0 = fm + 1 + g ** (m - fm) / (g - 1.0)
    return _value(M, "achievability", (1.0 - float(eps)) * tau0, delta, False)


def linear_tau0_exact(k: int) -> Fraction:
    """``k + sum_{i=1}^{k-1} (2^i - 1) / (2^k - 2^i)``."""
    if k < 1:
        raise ValueError("need at least one message bit")
    return k + sum((Fraction((1 << i) - 1, (1 << k) - (1 << i)) for i in range(1, k)), Fraction(0))


def vlsf_linear(k: int, delta: Real, *, eps: Real = 0, exact: bool = False) -> BoundValue:
    """Random linear fountain ensemble with ``M = 2**k`` messages."""
    if k < 1:
        raise ValueError("need at least one message bit")
    M = 1 << k
    _check_query(M, eps, delta)
    tau0 = linear_tau0_exact(k)
    if exact:
        return _value(M, "achievability", (1 - Fraction(eps)) * tau0, delta, True)
    return _value(M, "achievability", (1.0 - float(eps)) * float(tau0), delta, False)


def evaluate(query: BoundQuery, *, exact: bool = False) -> BoundValue:
    """Dispatch a :class:`BoundQuery` to its bound."""
    M, eps, delta = query.M, query.eps, query.delta
    k = query.kind
    if k is Kind.ACH_REPEAT:
        return ach_repeat(M, eps, delta, exact=exact)
    if k is Kind.CONV_FANO:
        return conv_fano(M, eps, delta)
    if k is Kind.ACH_HUFFMAN:
        return ach_huffman(M, eps, delta, exact=exact)
    if k is Kind.CONV_SPRT:
        return conv_sprt(M, eps, delta, exact=exact)
    if k is Kind.ZERO_ERROR:
        return zero_error_blocklength(M, delta, exact=exact)
    if k is Kind.VLSF_IID:
        mode = "auto" if exact else ("series" if M > EXACT_IID_MAX_M else "exact")
        return vlsf_iid(M, delta, eps=eps, mode=mode)
    if k is Kind.VLSF_EXPURGATED:
        return vlsf_expurgated(M, delta, eps=eps)
    return vlsf_linear(M.bit_length() - 1, delta, eps=eps, exact=exact)

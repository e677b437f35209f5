"""Independent verifiers for the closed-form ensemble bounds.

Nothing here calls into :mod:`becfeedback.bounds`; each routine reaches its
answer by a different route so that agreement is evidence, not tautology:

* a direct sum of the stopping-time tail for the iid ensemble,
* an absorbing Markov chain solved by Gaussian elimination for the linear
  fountain ensemble,
* the truncated union-bound series for the balanced-column ensemble,
* exact dynamic programming over compatible-message sets for tiny ``M``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

ENUMERATION_LIMIT = 10**8


@dataclass(frozen=True)
class RankChain:
    """Rank of the received generator columns as a Markov chain on ``0..k``.

    From rank ``i`` a fresh nonzero column falls outside the current span with
    probability ``(2^k - 2^i) / (2^k - 1)``; rank ``k`` is absorbing.
    """

    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("need k >= 1")

    def advance_probability(self, i: int) -> Fraction:
        if not 0 <= i < self.k:
            raise ValueError(f"transient states are 0..{self.k - 1}")
        full = (1 << self.k) - 1
        return Fraction(full + 1 - (1 << i), full)

    def transient_matrix(self) -> list[list[Fraction]]:
        """Transition probabilities among the transient states ``0..k-1``."""
        k = self.k
        T = [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            p = self.advance_probability(i)
            T[i][i] = 1 - p
            if i + 1 < k:
                T[i][i + 1] = p
        return T


def _solve_exact(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over the rationals."""
    n = len(A)
    aug = [row[:] + [rhs] for row, rhs in zip(A, b)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [x - factor * y for x, y in zip(aug[r], aug[col])]
    return [row[n] for row in aug]


def phase_type_expected_absorption(k: int) -> Fraction:
    """Expected absorption time of :class:`RankChain` from rank 0.

    Solves ``(I - T) t = 1`` exactly, where ``T`` is the transient block.
    """
    chain = RankChain(k)
    T = chain.transient_matrix()
    A = [[Fraction(int(i == j)) - T[i][j] for j in range(k)] for i in range(k)]
    return _solve_exact(A, [Fraction(1)] * k)[0]


def series_expected_tau0_iid(M: int, tol: float = 1e-12) -> float:
    """``sum_{n>=0} (1 - (1 - 2^-n)^(M-1))`` with a certified truncation error.

    Terms are added until the bound ``(M-1) 2^-N * 2`` on everything not yet
    summed is below ``tol``.
    """
    if M < 2:
        raise ValueError("need at least two messages")
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    terms = []
    n = 0
    while (M - 1) * 2.0**-n * 2 >= tol:
        terms.append(1.0 - (1.0 - 2.0**-n) ** (M - 1))
        n += 1
    return math.fsum(terms)


def union_bound_series_balanced(M: int) -> float:
    """``sum_{n>=0} min((M-1) gamma^-n, 1)`` for the balanced-column ensemble."""
    if M < 3:
        raise ValueError("the union-bound series needs M >= 3")
    gamma = 2.0 + 1.0 / ((M + 1) // 2 - 1)
    terms = []
    n = 0
    while True:
        term = min((M - 1) * gamma**-n, 1.0)
        if term < 1e-18:
            break
        terms.append(term)
        n += 1
    return math.fsum(terms)


@dataclass(frozen=True)
class TailBracket:
    """``lower = E[min(tau0, n_max)]`` and ``tail >= E[tau0] - lower``."""

    lower: Fraction
    tail: Fraction

    @property
    def upper(self) -> Fraction:
        return self.lower + self.tail

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return float(self.lower) - slack <= value <= float(self.upper) + slack


def _column_law(M: int, ensemble: str) -> list[tuple[int, Fraction]]:
    """All codebook columns (bitmask over messages) with their probabilities."""
    if ensemble in ("iid", "iid-bernoulli-half"):
        return [(c, Fraction(1, 1 << M)) for c in range(1 << M)]
    if ensemble in ("balanced", "balanced-columns"):
        zeros = (M + 1) // 2
        cols = [c for c in range(1 << M) if M - c.bit_count() == zeros]
        return [(c, Fraction(1, len(cols))) for c in cols]
    if ensemble in ("linear", "linear-fountain"):
        if M & (M - 1):
            raise ValueError("the linear ensemble needs M to be a power of two")
        cols = []
        for g in range(1, M):
            cols.append(sum(((r & g).bit_count() & 1) << r for r in range(M)))
        return [(c, Fraction(1, M - 1)) for c in cols]
    raise ValueError(f"unknown ensemble {ensemble!r}")


def _agreement_probability(M: int, law: list[tuple[int, Fraction]]) -> Fraction:
    """Largest probability that message 0 and some other message share a column entry."""
    return max(sum((p for c, p in law if (c & 1) == (c >> r) & 1), Fraction(0))
               for r in range(1, M))


def exhaustive_tau0_tiny(M: int, ensemble: str, n_max: int = 20) -> TailBracket:
    """Exact ``E[min(tau0, n_max)]`` for erasure-free compatibility decoding.

    By symmetry message 0 is sent. The state is the set of other messages
    still compatible; every column of the ensemble is enumerated with its
    exact probability at each of the ``n_max`` steps. The remainder is bounded
    by ``(M-1) q^n_max / (1 - q)`` with ``q`` the largest pairwise agreement
    probability.
    """
    if not 2 <= M <= 4:
        raise ValueError("exhaustive enumeration is limited to 2 <= M <= 4")
    if not 1 <= n_max <= 20:
        raise ValueError("n_max must lie in 1..20")
    law = _column_law(M, ensemble)
    work = (1 << (M - 1)) * len(law) * n_max
    if work > ENUMERATION_LIMIT:
        raise ValueError(f"enumeration of {work} states exceeds the limit {ENUMERATION_LIMIT}")
    others = (1 << M) - 2
    dist = {others: Fraction(1)}
    lower = Fraction(0)
    for _ in range(n_max):
        lower += sum((p for s, p in dist.items() if s), Fraction(0))  # P(tau0 > n)
        nxt: dict[int, Fraction] = {}
        for s, p in dist.items():
            if not s:
                nxt[s] = nxt.get(s, Fraction(0)) + p
                continue
            for c, pc in law:
                agree = (c if c & 1 else ~c) & others  # rows equal to row 0
                t = s & agree
                nxt[t] = nxt.get(t, Fraction(0)) + p * pc
        dist = nxt
    q = _agreement_probability(M, law)
    tail = (M - 1) * q**n_max / (1 - q) if q else Fraction(0)
    return TailBracket(lower, tail)


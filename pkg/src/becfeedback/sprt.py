"""Extended sequential probability ratio test for the BEC likelihood process.

The two hypotheses are P (outputs from the BEC) and Q (outputs from the
capacity-achieving output law, independent of the input). Each sample adds
``log 2`` to the log-likelihood ratio when unerased and matching, ``0`` when
erased, and ``-inf`` when unerased and mismatched (possible only under Q).
The LLR is therefore tracked exactly as an integer count of ``log 2`` steps
plus a ``-inf`` flag.

The lower boundary is fixed at 0 and the upper boundary is ``m log 2``. The
four boundary variants differ in whether hitting a boundary exactly stops the
test:

===========  ======================  =============================
variant      continuation region     stops at S_0 = 0?
===========  ======================  =============================
closed       ``(0, m)``              yes, deciding Q
open-lower   ``[0, m)``              only if ``m == 0`` (deciding P)
open-upper   ``(0, m]``              yes, deciding Q
open-both    ``[0, m]``              no
===========  ======================  =============================
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import _runner
from .channel import ChannelSpec, RngStream, derive_key
from .schemes import DEFAULT_CAP, SimEstimate


class Variant(enum.IntEnum):
    CLOSED = 0
    OPEN_LOWER = 1
    OPEN_UPPER = 2
    OPEN_BOTH = 3

    @property
    def label(self) -> str:
        return ("closed", "open-lower", "open-upper", "open-both")[self]


class Hypothesis(enum.IntEnum):
    P = 0
    Q = 1


@dataclass(frozen=True)
class SprtSpec:
    """Randomized mixture of the four boundary variants at upper boundary ``m log 2``.

    ``m = 0`` is admitted so that the converse mixture can express the test
    that declares P before any sample.
    """

    m: int
    weights: tuple[float, float, float, float] = (0.0, 1.0, 0.0, 0.0)

    def __post_init__(self):
        if self.m < 0:
            raise ValueError("upper boundary multiple must be nonnegative")
        if len(self.weights) != 4 or any(w < 0 for w in self.weights):
            raise ValueError("need four nonnegative variant weights")
        if not math.isclose(math.fsum(self.weights), 1.0, abs_tol=1e-12):
            raise ValueError(f"variant weights must sum to 1, got {self.weights}")

    @classmethod
    def single(cls, m: int, variant: Variant | str) -> "SprtSpec":
        if isinstance(variant, str):
            variant = Variant([v.label for v in Variant].index(variant))
        weights = [0.0] * 4
        weights[variant] = 1.0
        return cls(m, tuple(weights))

    @property
    def cumulative(self) -> tuple[float, float, float, float]:
        c0 = self.weights[0]
        c1 = c0 + self.weights[1]
        c2 = c1 + self.weights[2]
        return (c0, c1, c2, 1.0)


@dataclass
class LlrState:
    steps: int = 0
    minus_inf: bool = False
    n: int = 0

    @property
    def value(self) -> float:
        return -math.inf if self.minus_inf else self.steps * math.log(2.0)


def _increment(state: LlrState, hypothesis: int, delta: float, rng: RngStream) -> None:
    state.n += 1
    if rng.uniform() < delta:
        return
    if hypothesis == Hypothesis.P or rng.bit():
        state.steps += 1
    else:
        state.minus_inf = True


def run_one(m: int, variant: int, hypothesis: int, delta: float, rng: RngStream,
            cap: int = DEFAULT_CAP) -> tuple[int, int]:
    """One test with a fixed variant. Returns ``(decision, tau)``; decision -1 on truncation."""
    if variant in (Variant.CLOSED, Variant.OPEN_UPPER):
        return Hypothesis.Q, 0
    upper = m if variant == Variant.OPEN_LOWER else m + 1
    state = LlrState()
    while True:
        if state.minus_inf:
            return Hypothesis.Q, state.n
        if state.steps >= upper:
            return Hypothesis.P, state.n
        if state.n == cap:
            return -1, state.n
        _increment(state, hypothesis, delta, rng)
        if hypothesis == Hypothesis.P:
            assert not state.minus_inf


@dataclass(frozen=True)
class SprtOutcome:
    decision: Hypothesis | None
    tau: int
    variant: Variant


def run_sprt(spec: SprtSpec, hypothesis: Hypothesis | int, delta: float, rng: RngStream,
             cap: int = DEFAULT_CAP) -> SprtOutcome:
    """Pick a variant by the spec's weights, then run it. ``decision`` is None on truncation."""
    ChannelSpec(delta)
    u = rng.uniform()
    variant = next((i for i, c in enumerate(spec.cumulative[:3]) if u < c), 3)
    decision, tau = run_one(spec.m, variant, int(hypothesis), delta, rng, cap)
    return SprtOutcome(None if decision < 0 else Hypothesis(decision), tau, Variant(variant))


@dataclass(frozen=True)
class OperatingCharacteristics:
    """Monte Carlo estimates: correct-decision rates and mean sample sizes."""

    alpha: float
    alpha_stderr: float
    beta: float
    beta_stderr: float
    under_p: SimEstimate
    under_q: SimEstimate

    @property
    def mean_tau_p(self) -> float:
        return self.under_p.mean

    @property
    def mean_tau_q(self) -> float:
        return self.under_q.mean


_PURPOSE_P, _PURPOSE_Q = 0x5350_0001, 0x5350_0002


def _run(spec: SprtSpec, hypothesis: int, delta: float, trials: int, seed: int, cap: int,
         workers: int, backend: str | None) -> SimEstimate:
    key = derive_key(seed, _PURPOSE_P if hypothesis == Hypothesis.P else _PURPOSE_Q)
    acc = _runner.run("sprt", key, trials, (spec.m, spec.cumulative, hypothesis, delta, cap),
                      workers=workers, backend=backend)
    return SimEstimate.from_accumulator(acc)


def sprt_operating_characteristics(spec: SprtSpec, delta: float, trials: int, seed: int = 0, *,
                                   cap: int = DEFAULT_CAP, workers: int = 1,
                                   backend: str | None = None) -> OperatingCharacteristics:
    """Estimate ``P[decide P | P]``, ``Q[decide Q | Q]`` and both mean stopping times."""
    if trials < 1:
        raise ValueError("need at least one trial")
    ChannelSpec(delta)
    under_p = _run(spec, Hypothesis.P, delta, trials, seed, cap, workers, backend)
    under_q = _run(spec, Hypothesis.Q, delta, trials, seed, cap, workers, backend)
    alpha = 1.0 - under_p.empirical_error
    beta = 1.0 - under_q.empirical_error
    return OperatingCharacteristics(
        alpha, _binomial_stderr(alpha, under_p.completed),
        beta, _binomial_stderr(beta, under_q.completed),
        under_p, under_q,
    )


def _binomial_stderr(p: float, n: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / n) if n else math.nan


def q_correct_series(m: int, delta: float, rel_tol: float = 1e-15) -> float:
    """``1 - ((1-delta)/2)**m * sum_n C(n+m-1, m-1) delta**n`` summed term by term.

    The sum stops once the geometric bound on the remaining tail falls below
    ``rel_tol`` times the running sum.
    """
    if m < 1:
        raise ValueError("need m >= 1")
    if not 0 <= delta < 1:
        raise ValueError("erasure probability must lie in [0, 1)")
    term = 1.0  # n = 0
    total = 0.0
    n = 0
    while True:
        total += term
        ratio = delta * (n + m) / (n + 1)  # term(n+1) / term(n)
        term *= ratio
        n += 1
        # the ratio decreases in n, so once below 1 the tail is geometric
        if ratio < 1.0 and term / (1.0 - ratio) <= rel_tol * total:
            break
        if term == 0.0:
            break
    return 1.0 - ((1.0 - delta) / 2.0) ** m * total


def open_lower_characteristics(m: int, delta: float) -> tuple[float, float, float]:
    """``(alpha, beta, E_P[tau])`` of the open-lower test in closed form."""
    return 1.0, 1.0 - 2.0 ** -m, m / (1.0 - delta)


@dataclass(frozen=True)
class ConverseMixture:
    """Optimal randomized test meeting ``alpha = 1 - eps`` and ``beta = 1 - 1/M``."""

    spec: SprtSpec
    alpha: float
    beta: float
    blocklength: float


def converse_from_sprt(M: int, eps: float, delta: float) -> ConverseMixture:
    """Minimum ``E_P[tau]`` over mixtures of the boundary variants.

    With probability ``eps`` the test declares Q at time 0; otherwise it mixes
    the open-lower tests at ``m`` and ``m + 1`` (the latter is the open-both
    test at ``m``), where ``2**m <= M (1 - eps) < 2**(m+1)`` and the weight is
    the unique one meeting the Q-power constraint.
    """
    if M < 2:
        raise ValueError("need at least two messages")
    if not 0 <= eps <= 1:
        raise ValueError("error probability must lie in [0, 1]")
    ChannelSpec(delta)
    target_beta = 1.0 - 1.0 / M
    x = M * (1.0 - eps)
    if x <= 1.0:
        # declare P at once w.p. 1 - eps, Q otherwise: beta = eps >= 1 - 1/M
        spec = SprtSpec(0, (eps, 1.0 - eps, 0.0, 0.0))
        return ConverseMixture(spec, 1.0 - eps, eps, 0.0)
    m = 0
    while 2.0 ** (m + 1) <= x:
        m += 1
    # normalized Q-error of the open part is 1/x = p 2^-m + (1-p) 2^-(m+1)
    p = 2.0 ** (m + 1) / x - 1.0
    weights = (eps, (1.0 - eps) * p, 0.0, (1.0 - eps) * (1.0 - p))
    spec = SprtSpec(m, weights)
    _, beta_m, tau_m = open_lower_characteristics(m, delta)
    _, beta_m1, tau_m1 = open_lower_characteristics(m + 1, delta)
    alpha = weights[1] + weights[3]
    beta = weights[0] + weights[1] * beta_m + weights[3] * beta_m1
    blocklength = weights[1] * tau_m + weights[3] * tau_m1
    assert math.isclose(beta, target_beta, abs_tol=1e-12)
    return ConverseMixture(spec, alpha, beta, blocklength)


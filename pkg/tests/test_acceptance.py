"""Acceptance criteria 1-11, each checked at its stated tolerance and time limit.

Every test records a PASS/FAIL line that is printed in the terminal summary.
"""

import math
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from becfeedback import bounds, oracle
from becfeedback.huffman import average_length, equiprobable_code
from becfeedback.schemes import (
    SimConfig,
    simulate_q_channel_error,
    simulate_vlf_huffman_repeat,
    simulate_vlsf,
    wald_ratio_check,
)
from becfeedback.sprt import SprtSpec, sprt_operating_characteristics

SEED = 20240611


@contextmanager
def criterion(log, number, limit_s):
    """Time the block, then record and assert both the outcome and the runtime."""
    state = {"detail": ""}
    t0 = time.perf_counter()
    try:
        yield state
    except AssertionError as exc:
        log.append((number, False, f"{exc} ({time.perf_counter() - t0:.2f}s)"))
        raise
    elapsed = time.perf_counter() - t0
    ok = elapsed < limit_s
    log.append((number, ok, f"{state['detail']} ({elapsed:.2f}s, limit {limit_s:g}s)"))
    assert ok, f"criterion {number} took {elapsed:.2f}s, limit {limit_s}s"


def test_01_zero_error_tightness(acceptance_log):
    with criterion(acceptance_log, 1, 1.0) as c:
        worst = 0.0
        for delta in (0.0, 0.1, 0.5, 0.9):
            for M in range(2, 4097):
                target = bounds.lstar(M) / (1 - delta)
                worst = max(worst,
                            abs(bounds.ach_huffman(M, 0, delta).blocklength - target),
                            abs(bounds.conv_sprt(M, 0, delta).blocklength - target))
        assert worst <= 1e-12, f"max deviation {worst}"
        c["detail"] = f"max deviation {worst:.2e}"


def test_02_huffman_oracle(acceptance_log):
    with criterion(acceptance_log, 2, 60.0) as c:
        bad = [M for M in range(2, 65537) if average_length(equiprobable_code(M)) != bounds.lstar_exact(M)]
        assert not bad, f"mismatch at M={bad[:5]}"
        c["detail"] = "exact equality for M in [2, 65536]"


def test_03_iid_double_derivation(acceptance_log):
    with criterion(acceptance_log, 3, 5.0) as c:
        worst = max(abs(float(bounds.iid_tau0_exact(M)) - oracle.series_expected_tau0_iid(M, 1e-10))
                    for M in range(2, 65))
        assert worst <= 1e-9, f"max |exact - series| = {worst}"
        exact = bounds.vlsf_iid(8, 0.5, mode="exact").blocklength
        series = bounds.vlsf_iid(8, 0.5, mode="series").blocklength
        assert abs(exact - 8.481698) <= 1e-6 and abs(series - 8.481698) <= 1e-6, (exact, series)
        c["detail"] = f"max |exact - series| = {worst:.2e}; M=8: {exact:.9f}"


def test_04_linear_phase_type(acceptance_log):
    with criterion(acceptance_log, 4, 1.0) as c:
        for k in range(1, 21):
            assert oracle.phase_type_expected_absorption(k) == bounds.linear_tau0_exact(k), f"k={k}"
        assert bounds.linear_tau0_exact(3) == Fraction(47, 12)
        c["detail"] = "exact equality for k in [1, 20]; k=3 -> 47/12"


def test_05_huffman_repeat_monte_carlo(acceptance_log):
    with criterion(acceptance_log, 5, 30.0) as c:
        est = simulate_vlf_huffman_repeat(SimConfig(8, 0.5, 0.0, 10**6, SEED))
        assert est.truncated == 0
        assert abs(est.mean - 6.0) <= 3 * est.stderr, f"mean {est.mean} stderr {est.stderr}"
        assert est.errors == 0, f"{est.errors} errors"
        c["detail"] = f"mean {est.mean:.5f} +- {est.stderr:.5f}, errors 0"


def test_06_linear_fountain_monte_carlo(acceptance_log):
    with criterion(acceptance_log, 6, 60.0) as c:
        est = simulate_vlsf(SimConfig(8, 0.5, 0.0, 10**6, SEED), "linear")
        assert est.truncated == 0
        assert abs(est.mean - 47 / 6) <= 3 * est.stderr, f"mean {est.mean} stderr {est.stderr}"
        assert est.decode_errors == 0
        c["detail"] = f"mean {est.mean:.5f} +- {est.stderr:.5f} vs 7.83333, decoding errors 0"


def test_07_sprt_operating_characteristics(acceptance_log):
    with criterion(acceptance_log, 7, 10.0) as c:
        spec = SprtSpec.single(3, "open-lower")
        oc = sprt_operating_characteristics(spec, 0.5, 10**5, SEED)
        assert abs(oc.beta - 0.875) <= 3 * oc.beta_stderr, f"beta {oc.beta}"
        assert abs(oc.mean_tau_p - 6.0) <= 3 * oc.under_p.stderr, f"E_P[tau] {oc.mean_tau_p}"
        betas = []
        for delta in (0.25, 0.5, 0.75):
            r = sprt_operating_characteristics(spec, delta, 10**5, SEED + 1)
            assert abs(r.beta - 0.875) <= 3 * r.beta_stderr, f"beta {r.beta} at delta {delta}"
            betas.append(r)
        for a in betas:
            for b in betas:
                assert abs(a.beta - b.beta) <= 3 * math.hypot(a.beta_stderr, b.beta_stderr)
        c["detail"] = (f"beta {oc.beta:.4f}, E_P[tau] {oc.mean_tau_p:.4f}; "
                       f"beta over delta {[round(r.beta, 4) for r in betas]}")


def test_08_q_channel(acceptance_log):
    with criterion(acceptance_log, 8, 60.0) as c:
        parts = []
        for M in (2, 8, 32):
            res = simulate_q_channel_error(M, 0.5, 10**6, SEED)
            assert res.truncated == 0
            assert abs(res.success - 1 / M) <= 3 * res.stderr, f"M={M}: {res.success}"
            parts.append(f"M={M}: {res.success:.5f}")
        c["detail"] = ", ".join(parts)


def test_09_wald_ratio(acceptance_log):
    with criterion(acceptance_log, 9, 90.0) as c:
        r = wald_ratio_check("linear", 8, 0.5, 10**6, SEED)
        assert abs(r.ratio - 2.0) <= 3 * r.stderr, f"ratio {r.ratio} +- {r.stderr}"
        c["detail"] = f"ratio {r.ratio:.5f} +- {r.stderr:.5f}"


def test_10_rate_gap(acceptance_log):
    with criterion(acceptance_log, 10, 1.0) as c:
        def gap(M):
            conv = bounds.conv_sprt(M, 0, 0.5).rate
            return (conv - bounds.vlsf_linear(M.bit_length() - 1, 0.5).rate) / conv

        g8, g2 = gap(8), gap(2)
        assert 0.23 <= g8 <= 0.24, f"gap at M=8 is {g8}"
        assert g2 == 0, f"gap at M=2 is {g2}"
        c["detail"] = f"gap(8) = {g8:.6f}, gap(2) = {g2}"


def test_11_bound_orderings(acceptance_log):
    with criterion(acceptance_log, 11, 10.0) as c:
        for k in range(1, 17):
            lin = bounds.vlsf_linear(k, 0.5).blocklength
            assert lin <= bounds.vlsf_expurgated(1 << k, 0.5).blocklength, f"linear > expurgated at k={k}"
            if k >= 6:
                iid = bounds.vlsf_iid(1 << k, 0.5, mode="series").blocklength
                assert iid <= lin, f"iid > linear at k={k}"
        for delta in (0.0, 0.5):
            for M in range(2, 4097):
                h = bounds.ach_huffman(M, 0, delta).blocklength
                r = bounds.ach_repeat(M, 0, delta).blocklength
                assert h <= r, f"Huffman > repeat at M={M}"
                assert (h == r) == (M & (M - 1) == 0), f"equality pattern broken at M={M}"
        c["detail"] = "linear<=expurgated k<=16; iid<=linear k in [6,16]; Huffman<=repeat, equal iff 2^k"

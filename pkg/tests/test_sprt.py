import math

import pytest

from becfeedback.bounds import conv_sprt, lstar
from becfeedback.channel import RngStream
from becfeedback.sprt import (
    Hypothesis,
    LlrState,
    SprtSpec,
    Variant,
    _increment,
    converse_from_sprt,
    open_lower_characteristics,
    q_correct_series,
    run_one,
    run_sprt,
    sprt_operating_characteristics,
)


class TestRun:
    @pytest.mark.parametrize("hyp", list(Hypothesis))
    def test_closed_lower_stops_at_zero(self, hyp):
        out = run_sprt(SprtSpec.single(3, "closed"), hyp, 0.5, RngStream(1))
        assert (out.decision, out.tau) == (Hypothesis.Q, 0)

    def test_open_lower_noiseless_p(self):
        for seed in range(20):
            out = run_sprt(SprtSpec.single(4, "open-lower"), Hypothesis.P, 0.0, RngStream(seed))
            assert (out.decision, out.tau) == (Hypothesis.P, 4)

    def test_open_both_is_open_lower_one_higher(self):
        rng_a, rng_b = RngStream(3, 9), RngStream(3, 9)
        assert run_one(2, Variant.OPEN_BOTH, 1, 0.3, rng_a) == run_one(3, Variant.OPEN_LOWER, 1, 0.3, rng_b)

    def test_truncation(self):
        assert run_one(50, Variant.OPEN_LOWER, 0, 0.5, RngStream(0), cap=3) == (-1, 3)

    def test_llr_under_p_never_minus_infinity(self):
        rng = RngStream(77)
        state = LlrState()
        for _ in range(10000):
            _increment(state, Hypothesis.P, 0.4, rng)
            assert not state.minus_inf
        assert state.value == state.steps * math.log(2)


class TestSpec:
    def test_weights_validated(self):
        with pytest.raises(ValueError):
            SprtSpec(3, (0.5, 0.2, 0.0, 0.0))
        with pytest.raises(ValueError):
            SprtSpec(-1)

    def test_single(self):
        assert SprtSpec.single(2, Variant.OPEN_UPPER).weights == (0.0, 0.0, 1.0, 0.0)


class TestOperatingCharacteristics:
    def test_m3(self):
        oc = sprt_operating_characteristics(SprtSpec.single(3, "open-lower"), 0.5, 100_000, seed=5)
        assert oc.alpha == 1.0
        assert abs(oc.beta - 0.875) <= 3 * oc.beta_stderr
        assert oc.under_p.within(6.0)

    def test_m1_noiseless(self):
        oc = sprt_operating_characteristics(SprtSpec.single(1, "open-lower"), 0.0, 100_000, seed=6)
        assert abs(oc.beta - 0.5) <= 3 * oc.beta_stderr
        assert oc.mean_tau_p == 1.0

    def test_tau_scales_with_delta(self):
        spec = SprtSpec.single(4, "open-lower")
        for delta in (0.25, 0.75):
            oc = sprt_operating_characteristics(spec, delta, 50_000, seed=8)
            assert oc.under_p.within(4 / (1 - delta))


class TestClosedForms:
    def test_negative_binomial_sum(self):
        for m in range(1, 21):
            for delta in (0.1, 0.5, 0.9):
                assert q_correct_series(m, delta) == pytest.approx(1 - 2.0**-m, abs=1e-12)

    def test_open_lower(self):
        assert open_lower_characteristics(3, 0.5) == (1.0, 0.875, 6.0)

    def test_invalid(self):
        with pytest.raises(ValueError):
            q_correct_series(0, 0.5)


class TestConverse:
    def test_m8(self):
        assert converse_from_sprt(8, 0, 0.5).blocklength == pytest.approx(6.0, abs=1e-12)

    def test_m3_mixture(self):
        mix = converse_from_sprt(3, 0, 0)
        assert mix.blocklength == pytest.approx(lstar(3), abs=1e-12)
        assert mix.spec.m == 1
        assert mix.spec.weights[1] == pytest.approx(1 / 3) and mix.spec.weights[3] == pytest.approx(2 / 3)

    def test_vacuous(self):
        assert converse_from_sprt(2, 0.5, 0).blocklength == 0.0

    def test_constraints_met_with_equality(self):
        for M in (2, 3, 5, 8, 17, 100, 1000):
            for eps in (0, 0.1, 0.3):
                mix = converse_from_sprt(M, eps, 0.2)
                assert mix.alpha == pytest.approx(1 - eps, abs=1e-12)
                assert mix.beta == pytest.approx(1 - 1 / M, abs=1e-12)
                assert mix.blocklength == pytest.approx(conv_sprt(M, eps, 0.2).blocklength, abs=1e-12)

    def test_mixture_simulates_to_its_targets(self):
        mix = converse_from_sprt(5, 0.1, 0.5)
        oc = sprt_operating_characteristics(mix.spec, 0.5, 200_000, seed=9)
        assert abs(oc.alpha - mix.alpha) <= 3 * oc.alpha_stderr
        assert abs(oc.beta - mix.beta) <= 3 * oc.beta_stderr
        # mean over all trials under P, dropped ones included with tau = 0
        assert oc.under_p.within(mix.blocklength)

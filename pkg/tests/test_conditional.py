"""Heralding protocol and the empirical-law evaluators."""

import math
import warnings

import numpy as np
import pytest

from catsim import dynamics, hilbert
from catsim.conditional import (
    DEFAULT_CONSTANTS,
    FitRangeWarning,
    HeraldResult,
    find_tau_opt,
    p_zero_curve,
    p_zero_fit,
    tau_opt_fit,
    xi_prep_fit,
)
from catsim.hilbert import FockVector


class TestFitLawEvaluators:
    def test_tau_opt_values(self):
        assert tau_opt_fit(5.0) == pytest.approx(0.33973589481735283, rel=1e-14)
        assert tau_opt_fit(10.0) == pytest.approx(0.20236605407370026, rel=1e-14)
        assert tau_opt_fit(2.0) == pytest.approx(0.620430202478455, rel=1e-14)

    def test_p_zero_values(self):
        assert p_zero_fit(5.0) == pytest.approx(0.22709278258076748, rel=1e-14)
        assert p_zero_fit(2.0) == pytest.approx(0.5061042259701866, rel=1e-14)

    def test_xi_prep_values(self):
        assert xi_prep_fit(3.0) == pytest.approx(-0.2864826288778081, rel=1e-13)
        assert xi_prep_fit(10.0) == pytest.approx(-0.3310337605507751, rel=1e-13)

    def test_limits_flagged_not_clamped(self):
        with pytest.warns(FitRangeWarning):
            assert tau_opt_fit(0.0) == pytest.approx(DEFAULT_CONSTANTS.b_t)
        with pytest.warns(FitRangeWarning):
            assert p_zero_fit(0.0) == pytest.approx(DEFAULT_CONSTANTS.b_p)
        with pytest.warns(FitRangeWarning):
            # large-beta asymptote of the squeeze law
            assert xi_prep_fit(1e6) == pytest.approx(DEFAULT_CONSTANTS.a_r, abs=1e-6)

    def test_in_range_silent(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            tau_opt_fit(2.0)
            p_zero_fit(100.0)
            xi_prep_fit(50.0)

    def test_xi_negative_on_validity_range(self):
        for beta in np.linspace(2.0, 100.0, 25):
            assert xi_prep_fit(float(beta)) < 0.0

    def test_negative_beta_rejected(self):
        with pytest.raises(ValueError):
            tau_opt_fit(-1.0)


class TestPZeroCurve:
    def test_initial_value(self):
        for beta in (2.0, 5.0):
            p0 = p_zero_curve(beta, [0.0])[0]
            assert p0 == pytest.approx(math.exp(-beta * beta), abs=1e-12)

    def test_bounded_probability(self):
        p0 = p_zero_curve(3.0, np.linspace(0.0, 3.0, 120))
        assert np.all(p0 >= 0.0) and np.all(p0 <= 1.0)

    def test_peak_near_law_for_beta5(self):
        taus = np.linspace(1e-3, 0.85, 340)
        p0 = p_zero_curve(5.0, taus)
        assert taus[int(np.argmax(p0))] == pytest.approx(tau_opt_fit(5.0), rel=0.05)

    def test_matches_evolve_and_extract(self):
        # the fast herald kernel against the generic evolve + project path
        beta, taus = 2.0, np.array([0.2, 0.63, 1.1])
        fast = p_zero_curve(beta, taus)
        s0 = hilbert.initial_block_state(beta)
        for tau, expected in zip(taus, fast):
            _, p0 = hilbert.extract_signal_if_pump_vacuum(dynamics.evolve(s0, tau))
            assert p0 == pytest.approx(expected, rel=1e-10)

    def test_requires_positive_beta(self):
        with pytest.raises(ValueError):
            p_zero_curve(0.0, [0.1])


class TestFindTauOpt:
    @pytest.mark.parametrize("beta", [2.0, 5.0])
    def test_against_laws(self, beta, herald_results):
        res = herald_results(beta)
        assert res.tau_opt == pytest.approx(tau_opt_fit(beta), rel=0.05)
        assert res.p0 == pytest.approx(p_zero_fit(beta), rel=0.10)

    def test_herald_consistency(self, herald_results):
        res = herald_results(5.0)
        assert res.psi_raw.norm() == pytest.approx(1.0, abs=1e-12)
        assert np.all(res.psi_raw.amps[1::2] == 0.0)
        # p0 equals the squared norm of the unnormalized projection
        s = dynamics.evolve(hilbert.initial_block_state(5.0), res.tau_opt)
        raw, p0 = hilbert.extract_signal_if_pump_vacuum(s)
        assert p0 == pytest.approx(res.p0, rel=1e-10)
        overlap = abs(np.vdot(raw.amps / np.linalg.norm(raw.amps), res.psi_raw.amps))
        assert overlap == pytest.approx(1.0, abs=1e-10)

    def test_tau_opt_strictly_decreasing(self, herald_results):
        taus = [herald_results(b).tau_opt for b in (2.0, 3.0, 5.0)]
        assert taus[0] > taus[1] > taus[2]

    def test_small_beta_flagged(self):
        with pytest.warns(FitRangeWarning):
            res = find_tau_opt(1.2)
        assert 0.0 < res.p0 <= 1.0

    def test_invalid_beta(self):
        with pytest.raises(ValueError):
            find_tau_opt(0.0)

    def test_result_validation(self):
        ok = FockVector(np.array([1.0, 0.0]))
        with pytest.raises(ValueError):
            HeraldResult(beta=2.0, tau_opt=0.5, p0=1.5, psi_raw=ok)

"""Continuous-variable toolbox: cats, squeeze, fidelity, Wigner."""

import cmath
import math

import numpy as np
import pytest
import scipy.linalg

from catsim.cvops import (
    CatSpec,
    CutoffError,
    SqueezeParam,
    alpha_prep,
    cat_cutoff,
    cat_state,
    fidelity,
    mean_photons_after_antisqueeze,
    optimize_cat_match,
    position_wavefunction,
    prepare_psi_out,
    rotate,
    squeeze,
    squeezed_cat_energy,
    wigner,
)
from catsim.hilbert import FockVector


def complex_coherent(alpha: complex, n_max: int) -> FockVector:
    n = np.arange(n_max + 1)
    mags = np.exp(
        -0.5 * abs(alpha) ** 2
        + n * math.log(abs(alpha))
        - 0.5 * np.array([math.lgamma(k + 1) for k in n])
    )
    return FockVector(mags * np.exp(1j * n * cmath.phase(alpha)))


def squeezed_coherent_oracle(alpha: complex, xi: float, n_max: int) -> np.ndarray:
    """<n|S(xi)|alpha> via the closed-form Hermite expansion.

    S(xi) D(alpha) = D(alpha~) S(xi) with alpha~ = alpha cosh(xi) -
    conj(alpha) sinh(xi); the displaced squeezed vacuum has the standard
    Hermite-polynomial amplitudes.
    """
    at = alpha * math.cosh(xi) - np.conj(alpha) * math.sinh(xi)
    s = math.tanh(xi)
    t = cmath.sqrt(s)
    gamma = at * math.cosh(xi) + np.conj(at) * math.sinh(xi)
    pref = cmath.exp(-0.5 * abs(at) ** 2 - 0.5 * np.conj(at) ** 2 * s) / math.sqrt(
        math.cosh(xi)
    )
    arg = gamma / (math.sqrt(2.0) * t * math.cosh(xi)) if s != 0 else 0.0
    out = np.zeros(n_max + 1, dtype=complex)
    h_prev, h = 1.0 + 0j, 2.0 * arg
    for n in range(n_max + 1):
        hn = h_prev if n == 0 else (h if n == 1 else None)
        if n >= 2:
            hn = 2.0 * arg * h - 2.0 * (n - 1) * h_prev
            h_prev, h = h, hn
        out[n] = (
            pref
            * (t / math.sqrt(2.0)) ** n
            / math.sqrt(math.factorial(n))
            * hn
        )
    return out


class TestCatState:
    def test_small_alpha_is_nearly_vacuum(self):
        v = cat_state(CatSpec(0.05), 16)
        assert abs(v.amps[0]) ** 2 > 0.995
        assert v.norm() == pytest.approx(1.0, abs=1e-12)

    def test_odd_amplitudes_exactly_zero(self):
        v = cat_state(CatSpec(2.0), 40)
        assert np.all(v.amps[1::2] == 0.0)

    def test_ground_state_probability(self):
        # |<0|cat(2)>|^2 = 4 exp(-4) / K
        v = cat_state(CatSpec(2.0), 40)
        assert abs(v.amps[0]) ** 2 == pytest.approx(0.03661899347368653, rel=1e-12)

    @pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0, 3.0])
    def test_mean_photon_number_identity(self, alpha):
        v = cat_state(CatSpec(alpha), cat_cutoff(alpha, 1e-15))
        expected = alpha**2 * math.tanh(alpha**2)
        assert v.mean_n() == pytest.approx(expected, abs=1e-10)

    def test_insufficient_cutoff_raises(self):
        with pytest.raises(CutoffError):
            cat_state(CatSpec(3.0), 8)

    def test_invalid_alpha(self):
        with pytest.raises(ValueError):
            CatSpec(0.0)


class TestRotate:
    def test_identity_angles(self):
        v = complex_coherent(1.1 + 0.4j, 24)
        for theta in (0.0, 2 * math.pi):
            out = rotate(v, theta)
            np.testing.assert_allclose(out.amps, v.amps, atol=1e-12)

    def test_rotates_coherent_state_label(self):
        alpha, theta = 1.3, 0.7
        out = rotate(complex_coherent(alpha, 30), theta)
        expected = complex_coherent(alpha * cmath.exp(-1j * theta), 30)
        np.testing.assert_allclose(out.amps, expected.amps, atol=1e-12)

    def test_preserves_photon_distribution(self):
        v = complex_coherent(0.9 - 0.2j, 20)
        out = rotate(v, 1.234)
        np.testing.assert_allclose(out.probabilities(), v.probabilities(), atol=1e-15)


class TestSqueeze:
    def test_zero_is_identity(self):
        v = complex_coherent(1.0, 30)
        np.testing.assert_allclose(squeeze(v, 0.0).amps, v.amps, atol=0)

    @pytest.mark.parametrize("r,expected", [(0.3, 0.9566279119002483), (0.7, 0.796705459992875)])
    def test_squeezed_vacuum_ground_probability(self, r, expected):
        vac = FockVector(np.eye(40)[0])
        out = squeeze(vac, r)
        assert abs(out.amps[0]) ** 2 == pytest.approx(expected, rel=1e-10)
        assert np.all(out.amps[1::2] == 0.0)  # parity preserved

    @pytest.mark.parametrize("xi", [0.35, -0.42])
    def test_against_hermite_closed_form(self, xi):
        alpha = 1.3
        v = complex_coherent(alpha, 60)
        out = squeeze(v, xi)
        expected = squeezed_coherent_oracle(alpha, xi, 60)
        np.testing.assert_allclose(out.amps, expected, atol=1e-10)

    def test_complex_input_against_closed_form(self):
        alpha, xi = 0.8 + 0.5j, 0.3
        v = complex_coherent(alpha, 60)
        out = squeeze(v, xi)
        expected = squeezed_coherent_oracle(alpha, xi, 60)
        np.testing.assert_allclose(out.amps, expected, atol=1e-10)

    def test_against_dense_generator_exponential(self):
        rng = np.random.default_rng(8)
        amps = np.zeros(60, dtype=complex)
        amps[:13] = rng.standard_normal(13) + 1j * rng.standard_normal(13)
        amps /= np.linalg.norm(amps)
        xi = -0.37
        dim = 60
        K = np.zeros((dim, dim))
        for m in range(dim - 2):
            c = 0.5 * math.sqrt((m + 1) * (m + 2))
            K[m, m + 2] = c
            K[m + 2, m] = -c
        expected = scipy.linalg.expm(xi * K) @ amps
        out = squeeze(FockVector(amps), xi)
        np.testing.assert_allclose(out.amps, expected, atol=1e-10)

    def test_round_trip(self):
        v = cat_state(CatSpec(2.0), 64)
        back = squeeze(squeeze(v, 0.25), -0.25)
        np.testing.assert_allclose(back.amps, v.amps, atol=1e-8)

    def test_norm_preserved_with_headroom(self):
        v = cat_state(CatSpec(2.0), 64)
        assert squeeze(v, 0.3).norm() >= 1 - 1e-8

    def test_cutoff_error_without_headroom(self):
        vac = FockVector(np.eye(5)[0])
        with pytest.raises(CutoffError):
            squeeze(vac, 1.0)

    def test_param_wrapper(self):
        p = SqueezeParam(-0.4)
        assert p.r == 0.4 and p.theta == math.pi
        v = complex_coherent(0.6, 40)
        np.testing.assert_allclose(squeeze(v, p).amps, squeeze(v, -0.4).amps, atol=0)


class TestFidelity:
    def test_self_unity(self):
        v = cat_state(CatSpec(1.5), 30)
        assert fidelity(v, v) == pytest.approx(1.0, abs=1e-14)

    def test_vacuum_vs_coherent(self):
        vac = FockVector(np.eye(25)[0])
        coh = complex_coherent(1.0, 24)
        assert fidelity(vac, coh) == pytest.approx(math.exp(-1.0), rel=1e-10)

    def test_orthogonal_fock_states(self):
        f0 = FockVector(np.eye(4)[0])
        f1 = FockVector(np.eye(4)[1])
        assert fidelity(f0, f1) == 0.0

    def test_symmetric_and_phase_invariant(self):
        rng = np.random.default_rng(4)
        a = FockVector((lambda v: v / np.linalg.norm(v))(rng.standard_normal(12) + 1j * rng.standard_normal(12)))
        b = FockVector((lambda v: v / np.linalg.norm(v))(rng.standard_normal(12) + 1j * rng.standard_normal(12)))
        f = fidelity(a, b)
        assert fidelity(b, a) == pytest.approx(f, rel=1e-12)
        for phase in rng.uniform(0, 2 * math.pi, 4):
            shifted = FockVector(a.amps * cmath.exp(1j * phase))
            assert fidelity(shifted, b) == pytest.approx(f, rel=1e-12)

    def test_unnormalized_rejected(self):
        good = FockVector(np.eye(3)[0])
        bad = FockVector(np.array([0.5, 0.0, 0.0]), normalized=False)
        with pytest.raises(ValueError):
            fidelity(good, bad)


class TestPreparePsiOut:
    def test_zero_squeeze_is_pure_rotation(self, herald_results):
        psi = herald_results(2.0).psi_raw
        out = prepare_psi_out(psi, 0.0)
        n = psi.amps.size
        np.testing.assert_allclose(
            out.amps[:n], rotate(psi, -math.pi / 4).amps, atol=1e-12
        )
        assert np.abs(out.amps[n:]).max() == 0.0

    def test_round_trip_recovers_raw_state(self, herald_results):
        psi = herald_results(3.0).psi_raw
        xi = -0.29
        out = prepare_psi_out(psi, xi)
        back = rotate(squeeze(out, xi), math.pi / 4)
        np.testing.assert_allclose(back.amps[: psi.amps.size], psi.amps, atol=1e-8)
        assert np.abs(back.amps[psi.amps.size :]).max() <= 1e-8

    def test_bad_sign_rejected(self, herald_results):
        with pytest.raises(ValueError):
            prepare_psi_out(herald_results(2.0).psi_raw, 0.0, rotation_sign=2)


class TestOptimizeCatMatch:
    def test_beta3_matches_reference_quality(self, match_results):
        m = match_results(3.0)
        assert m.fidelity >= 0.997
        assert m.xi == pytest.approx(-0.2864826288778081, abs=0.03)
        assert m.alpha == pytest.approx(3.1766551041313327, rel=0.03)
        assert m.rotation_sign in (-1, +1)

    def test_consistent_with_explicit_pipeline(self, herald_results, match_results):
        beta = 3.0
        m = match_results(beta)
        psi_out = prepare_psi_out(
            herald_results(beta).psi_raw, m.xi, rotation_sign=m.rotation_sign
        ).normalize()
        cat = cat_state(CatSpec(m.alpha), psi_out.n_max)
        assert fidelity(psi_out, cat) == pytest.approx(m.fidelity, abs=1e-9)

    def test_rejects_odd_support(self):
        odd = FockVector(np.eye(8)[1])
        with pytest.raises(ValueError, match="even"):
            optimize_cat_match(odd, 2.0)


class TestClosedFormRelations:
    def test_alpha_prep_zero_squeeze(self):
        assert alpha_prep(3.0, 0.0) == pytest.approx(3.0 * math.sqrt(2.0), rel=1e-14)

    def test_alpha_prep_reference_points(self):
        assert alpha_prep(3.0, -0.287) == pytest.approx(3.1766551041313327, rel=1e-12)
        assert alpha_prep(10.0, -0.332) == pytest.approx(10.143902308003227, rel=1e-12)

    def test_alpha_prep_monotone_in_beta(self):
        vals = [alpha_prep(b, -0.3) for b in np.linspace(2, 20, 12)]
        assert np.all(np.diff(vals) > 0)

    def test_alpha_prep_domain(self):
        with pytest.raises(ValueError):
            alpha_prep(0.1, -5.0)
        with pytest.raises(ValueError):
            alpha_prep(3.0, 0.1)

    def test_antisqueeze_photon_number(self):
        assert mean_photons_after_antisqueeze(3.0, 0.0, 4.0) == pytest.approx(18.0)
        assert mean_photons_after_antisqueeze(3.0, -0.287, 3.178) == pytest.approx(
            10.091137650603653, rel=1e-12
        )

    def test_antisqueeze_number_matches_pipeline(self, herald_results, match_results):
        beta = 3.0
        m = match_results(beta)
        psi_out = prepare_psi_out(
            herald_results(beta).psi_raw, m.xi, rotation_sign=m.rotation_sign
        ).normalize()
        # the closed form follows the energy-conservation amplitude, which at
        # beta = 3 sits ~2.6% above the measured alpha*; <n> inherits twice that
        n_formula = mean_photons_after_antisqueeze(beta, m.xi, m.alpha)
        assert psi_out.mean_n() == pytest.approx(n_formula, rel=0.06)
        # the state itself is the matched cat to much higher accuracy
        n_cat = m.alpha**2 * math.tanh(m.alpha**2)
        assert psi_out.mean_n() == pytest.approx(n_cat, rel=5e-3)

    def test_squeezed_cat_energy_reference_values(self):
        assert squeezed_cat_energy(2.0, 0.3) == pytest.approx(7.381206149392335, rel=1e-12)
        # r = 0, bright alpha: tanh(2 alpha^2) ~ 1, energy ~ alpha^2
        assert squeezed_cat_energy(4.0, 0.0) == pytest.approx(16.0, rel=1e-10)

    @pytest.mark.parametrize(
        "alpha,r,bright",
        [(1.0, 0.2, False), (2.0, 0.3, True), (3.0, 0.3, True)],
    )
    def test_energy_formula_vs_direct_expectation(self, alpha, r, bright):
        # direct Fock-space expectation of n on S(-r)|cat(alpha)>
        v = cat_state(CatSpec(alpha), cat_cutoff(alpha, 1e-15) + 24)
        direct = squeeze(v, -r).normalize().mean_n()
        formula = squeezed_cat_energy(alpha, r)
        rel = abs(formula - direct) / direct
        print(f"\nalpha={alpha} r={r}: formula={formula:.6f} direct={direct:.6f} rel={rel:.2%}")
        if bright:
            assert rel <= 0.01
        else:
            assert rel > 0.01  # the printed form visibly disagrees for dim cats

    def test_exact_energy_identity(self):
        # the exact sum: alpha^2 (cosh(2r) tanh(alpha^2) + sinh(2r)) + sinh(r)^2
        alpha, r = 1.7, 0.25
        v = cat_state(CatSpec(alpha), cat_cutoff(alpha, 1e-15) + 24)
        direct = squeeze(v, -r).normalize().mean_n()
        exact = (
            alpha**2 * (math.cosh(2 * r) * math.tanh(alpha**2) + math.sinh(2 * r))
            + math.sinh(r) ** 2
        )
        assert direct == pytest.approx(exact, abs=1e-9)


def gaussian_wigner(x, p, x0=0.0, p0=0.0):
    X, P = np.meshgrid(x, p, indexing="ij")
    return np.exp(-((X - x0) ** 2) - (P - p0) ** 2) / math.pi


class TestWigner:
    def test_vacuum(self):
        x = np.linspace(-4.5, 4.5, 61)
        vac = FockVector(np.eye(8)[0])
        grid = wigner(vac, x, x)
        assert grid.values[30, 30] == pytest.approx(1.0 / math.pi, abs=1e-6)
        np.testing.assert_allclose(grid.values, gaussian_wigner(x, x), atol=1e-10)
        assert grid.riemann_sum() == pytest.approx(1.0, abs=2e-3)

    def test_coherent_displaced_gaussian(self):
        beta = 1.4
        x = np.linspace(-5.5, 5.5, 81)
        grid = wigner(complex_coherent(beta, 40), x, x)
        np.testing.assert_allclose(
            grid.values, gaussian_wigner(x, x, x0=math.sqrt(2.0) * beta), atol=1e-9
        )

    def test_cat_closed_form_and_negativity(self):
        alpha = 2.0
        x = np.linspace(-6.0, 6.0, 101)
        v = cat_state(CatSpec(alpha), 48)
        grid = wigner(v, x, x)
        X, P = np.meshgrid(x, x, indexing="ij")
        K = 2.0 * (1.0 + math.exp(-2.0 * alpha**2))
        expected = (
            np.exp(-((X - math.sqrt(2) * alpha) ** 2) - P**2)
            + np.exp(-((X + math.sqrt(2) * alpha) ** 2) - P**2)
            + 2.0 * np.exp(-(X**2) - P**2) * np.cos(2.0 * math.sqrt(2) * alpha * P)
        ) / (math.pi * K)
        np.testing.assert_allclose(grid.values, expected, atol=1e-9)
        mid = grid.values[50, :]  # x = 0 slice crosses the interference fringes
        assert mid.min() < -0.1 / math.pi

    def test_marginal_matches_position_density(self, herald_results):
        psi = herald_results(2.0).psi_raw
        x = np.linspace(-8.0, 8.0, 161)
        grid = wigner(psi, x, x)
        dp = x[1] - x[0]
        marginal = grid.values.sum(axis=1) * dp
        density = np.abs(position_wavefunction(psi, x)) ** 2
        assert np.sum(np.abs(marginal - density)) * dp <= 1e-3

    def test_small_grid_rejected(self):
        v = cat_state(CatSpec(2.0), 48)
        with pytest.raises(ValueError, match="Riemann|grid"):
            wigner(v, np.linspace(-1, 1, 11), np.linspace(-1, 1, 11))

    def test_unnormalized_rejected(self):
        bad = FockVector(np.array([0.3, 0.0]), normalized=False)
        with pytest.raises(ValueError):
            wigner(bad, np.linspace(-3, 3, 21), np.linspace(-3, 3, 21))


class TestPositionWavefunction:
    def test_vacuum_gaussian(self):
        x = np.linspace(-3, 3, 41)
        psi = position_wavefunction(FockVector(np.eye(5)[0]), x)
        np.testing.assert_allclose(
            psi.real, math.pi ** (-0.25) * np.exp(-0.5 * x * x), atol=1e-12
        )

    def test_first_excited(self):
        x = np.linspace(-3, 3, 41)
        psi = position_wavefunction(FockVector(np.eye(5)[1]), x)
        expected = math.pi ** (-0.25) * math.sqrt(2.0) * x * np.exp(-0.5 * x * x)
        np.testing.assert_allclose(psi.real, expected, atol=1e-12)

"""Single-mode continuous-variable toolbox.

Cat states, phase-space rotation, squeezing, fidelity, Wigner functions and
the closed-form amplitude/energy relations used by the heralding analysis.

Conventions
-----------
* Rotation: R(theta) multiplies Fock amplitude n by exp(-i n theta), so a
  coherent state |alpha> maps to |alpha exp(-i theta)>.
* Squeeze: S(z) = exp((z* a^2 - z a'^2) / 2) with real z here.  S(r) with
  r > 0 squeezes the x quadrature; the adjoint is S(-z).
* Quadratures: x = (a + a')/sqrt(2), so the vacuum Wigner function is
  exp(-x^2 - p^2)/pi and Wigner integrates to 1 over dx dp.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .conditional import DEFAULT_CONSTANTS, FitLawConstants, FitRangeWarning, xi_prep_fit
from .hilbert import FockVector
from .numkit import TridiagonalSym, eigh_tridiagonal, minimize_scalar

__all__ = [
    "CatSpec",
    "SqueezeParam",
    "WignerGrid",
    "CutoffError",
    "cat_cutoff",
    "cat_state",
    "rotate",
    "squeeze",
    "fidelity",
    "prepare_psi_out",
    "CatMatchResult",
    "optimize_cat_match",
    "alpha_prep",
    "mean_photons_after_antisqueeze",
    "squeezed_cat_energy",
    "wigner",
    "position_wavefunction",
]


class CutoffError(ValueError):
    """The Fock cutoff is too small for the requested operation."""


@dataclass(frozen=True)
class CatSpec:
    """Even cat state (|alpha> + |-alpha>)/sqrt(K), K = 2(1 + exp(-2 alpha^2))."""

    alpha: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")

    @property
    def normalization(self) -> float:
        return 2.0 * (1.0 + math.exp(-2.0 * self.alpha**2))


@dataclass(frozen=True)
class SqueezeParam:
    """Real squeeze parameter xi; r = |xi| and the axis angle is 0 or pi."""

    xi: float

    def __post_init__(self):
        if not math.isfinite(self.xi):
            raise ValueError("xi must be finite")

    @property
    def r(self) -> float:
        return abs(self.xi)

    @property
    def theta(self) -> float:
        return 0.0 if self.xi >= 0 else math.pi


def cat_cutoff(alpha: float, eps: float = 1e-14) -> int:
    """Smallest even n_max so the truncated even-cat norm defect is <= eps."""
    mu = alpha * alpha
    hi = int(mu + 20.0 * math.sqrt(mu) + 40.0)
    n = np.arange(hi + 1)
    logp = n * math.log(mu) - mu - np.array([math.lgamma(k + 1) for k in n])
    pmf = np.exp(logp)  # Poisson(alpha^2), the |alpha> number distribution
    suffix = np.cumsum(pmf[::-1])[::-1]
    for m in range(0, hi, 2):
        if suffix[m + 1] <= eps / 4.0:  # even-cat weights are <= 4x Poisson
            return m
    raise RuntimeError("cat cutoff search exhausted")


def cat_state(spec: CatSpec, n_max: int) -> FockVector:
    """Fock amplitudes of the even cat: amp(n) ~ (1 + (-1)^n) alpha^n / sqrt(n!).

    Log-weights keep large alpha stable; odd amplitudes are exactly zero.
    Raises CutoffError when the truncated norm falls below 1 - 1e-12.
    """
    a = spec.alpha
    n = np.arange(0, n_max + 1, 2)
    logw = (
        math.log(2.0)
        - 0.5 * a * a
        + n * math.log(a)
        - 0.5 * np.array([math.lgamma(k + 1) for k in n])
        - 0.5 * math.log(spec.normalization)
    )
    amps = np.zeros(n_max + 1)
    amps[n] = np.exp(logw)
    norm = float(np.linalg.norm(amps))
    if norm < 1.0 - 1e-12:
        raise CutoffError(
            f"n_max = {n_max} truncates cat(alpha={a}) to norm {norm:.15f}; "
            f"need n_max >= {cat_cutoff(a)}"
        )
    return FockVector(amps, normalized=True)


def rotate(psi: FockVector, theta: float) -> FockVector:
    """Phase-space rotation R(theta): amp(n) -> exp(-i n theta) amp(n)."""
    n = np.arange(psi.amps.size)
    return FockVector(psi.amps * np.exp(-1j * n * theta), normalized=psi.normalized)


# Cache of squeeze-generator eigensystems keyed by (parity, padded size).
_SQUEEZE_CACHE: dict[tuple[int, int], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _squeeze_sector(parity: int, dim: int):
    """Eigensystem of the squeeze generator restricted to one parity sector.

    The generator K = (a^2 - a'^2)/2 couples n to n +/- 2 with antisymmetric
    couplings t = sqrt((n+1)(n+2))/2.  Conjugating with the diagonal phases
    diag(i^q) turns i K into a real symmetric tridiagonal matrix, so
    exp(xi K) = Phi V exp(-i xi L) V^T Phi* with one reusable, xi-independent
    eigendecomposition per sector size.
    """
    key = (parity, dim)
    hit = _SQUEEZE_CACHE.get(key)
    if hit is not None:
        return hit
    idx = np.arange(parity, dim, 2)
    n = idx[:-1].astype(float)
    t = 0.5 * np.sqrt((n + 1.0) * (n + 2.0))
    dec = eigh_tridiagonal(TridiagonalSym(np.zeros(idx.size), -t))
    phases = np.power(1j, np.arange(idx.size))
    entry = (dec.eigenvalues, dec.eigenvectors, phases)
    _SQUEEZE_CACHE[key] = entry
    return entry


def _occupied_support(amps: np.ndarray, rel: float = 1e-14) -> int:
    mags = np.abs(amps)
    thresh = rel * mags.max()
    nz = np.nonzero(mags > thresh)[0]
    return int(nz[-1]) if nz.size else 0


def squeeze(psi: FockVector, xi: float | SqueezeParam) -> FockVector:
    """Apply S(xi) = exp(xi (a^2 - a'^2)/2) for real xi.

    The generator is exponentiated exactly on a padded cutoff (at least
    twice the occupied support plus headroom, widened further for large
    |xi|), then the result is truncated back to the input length.  Norm loss
    beyond 1e-6 raises CutoffError since it signals a too-small cutoff.
    """
    xi = xi.xi if isinstance(xi, SqueezeParam) else float(xi)
    if not math.isfinite(xi):
        raise ValueError("xi must be finite")
    if xi == 0.0:
        return FockVector(psi.amps.copy(), normalized=psi.normalized)
    n_in = psi.amps.size
    n_occ = _occupied_support(psi.amps)
    spread = math.ceil(n_occ * math.exp(2.0 * abs(xi)))
    dim = max(2 * n_occ + 32, spread + 32, n_in)
    out = np.zeros(dim, dtype=complex)
    for parity in (0, 1):
        idx = np.arange(parity, dim, 2)
        sector_in = np.zeros(idx.size, dtype=complex)
        take = idx[idx < n_in]
        sector_in[: take.size] = psi.amps[take]
        if not np.any(sector_in):
            continue
        lam, V, ph = _squeeze_sector(parity, dim)
        v = np.conj(ph) * sector_in
        w = V @ (np.exp(-1j * xi * lam) * (V.T @ v))
        out[idx] = ph * w
    result = out[:n_in]
    in_norm = psi.norm()
    out_norm = float(np.linalg.norm(result))
    loss = abs(in_norm - out_norm)
    if loss > 1e-6 * max(in_norm, 1e-30):
        raise CutoffError(
            f"squeeze(xi={xi}) lost {loss:.3e} of the norm; "
            "input cutoff leaves no headroom for the squeezed tail"
        )
    return FockVector(result, normalized=psi.normalized and abs(out_norm - 1.0) <= 1e-10)


def fidelity(a: FockVector, b: FockVector) -> float:
    """Squared overlap |<a|b>|^2 of two normalized pure states."""
    for name, v in (("a", a), ("b", b)):
        if abs(v.norm() - 1.0) > 1e-8:
            raise ValueError(f"state {name} is not normalized (||{name}|| = {v.norm():.3e})")
    n = min(a.amps.size, b.amps.size)
    ov = complex(np.vdot(a.amps[:n], b.amps[:n]))
    return float(min(abs(ov) ** 2, 1.0))


def prepare_psi_out(
    psi_raw: FockVector, xi: float | SqueezeParam, rotation_sign: int = +1
) -> FockVector:
    """Undo the protocol's rotation and squeeze: S(xi)^dag R(pi/4)^dag psi_raw.

    rotation_sign = +1 applies the adjoint of R(pi/4) (phases exp(+i n pi/4));
    -1 applies the mirror convention.  The mirror matters only because the
    rotation sign of the underlying dynamics is not fixed by the protocol's
    observables; optimize_cat_match tries both.
    """
    if rotation_sign not in (+1, -1):
        raise ValueError("rotation_sign must be +1 or -1")
    xi = xi.xi if isinstance(xi, SqueezeParam) else float(xi)
    # extend first so the returned state keeps squeeze headroom of its own
    dim = max(2 * _occupied_support(psi_raw.amps) + 32, psi_raw.amps.size)
    padded = np.zeros(dim, dtype=complex)
    padded[: psi_raw.amps.size] = psi_raw.amps
    rotated = rotate(FockVector(padded, normalized=psi_raw.normalized), -rotation_sign * math.pi / 4.0)
    return squeeze(rotated, -xi)


class CatMatchResult(NamedTuple):
    xi: float
    alpha: float
    fidelity: float
    rotation_sign: int


def alpha_prep(beta: float, xi: float) -> float:
    """Cat amplitude from energy conservation: exp(xi) sqrt(2 beta^2 - sinh^2 xi).

    Valid for xi <= 0; the argument of the square root must be non-negative.
    """
    if xi > 0:
        raise ValueError("alpha_prep expects xi <= 0")
    arg = 2.0 * beta * beta - math.sinh(xi) ** 2
    if arg < 0:
        raise ValueError(f"2 beta^2 - sinh^2(xi) = {arg} < 0; no real amplitude")
    return math.exp(xi) * math.sqrt(arg)


def mean_photons_after_antisqueeze(beta: float, xi: float, alpha: float) -> float:
    """Bright-regime photon number of the anti-squeezed output state.

    N = 2 beta^2 e^{2 xi} - tanh(2 alpha^2) sinh^2(xi) e^{2 xi}; printed form
    kept verbatim (see squeezed_cat_energy for the tanh-argument caveat).
    """
    e2 = math.exp(2.0 * xi)
    return 2.0 * beta * beta * e2 - math.tanh(2.0 * alpha * alpha) * math.sinh(xi) ** 2 * e2


def squeezed_cat_energy(alpha: float, r: float) -> float:
    """Reference formula E = tanh(2 alpha^2) (alpha^2 e^{2r} + sinh^2 r).

    This is the printed closed form for the mean photon number of an even
    cat squeezed with xi = -r (r >= 0).  Note the exact Fock-space sum gives
    tanh(alpha^2) * alpha^2 cosh(2r) + alpha^2 sinh(2r) + sinh^2 r instead;
    both agree in the bright regime where tanh -> 1.  Kept verbatim so tests
    can report the discrepancy rather than hide it.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    return math.tanh(2.0 * alpha * alpha) * (
        alpha * alpha * math.exp(2.0 * r) + math.sinh(r) ** 2
    )


def optimize_cat_match(
    psi_raw: FockVector,
    beta: float,
    constants: FitLawConstants = DEFAULT_CONSTANTS,
    xi_halfwidth: float = 0.12,
    xi_tol: float = 1e-7,
    alpha_tol: float = 1e-9,
) -> CatMatchResult:
    """Best (xi, alpha) so that S(xi)^dag R^dag psi_raw matches an even cat.

    Nested scalar searches: golden-section over xi (started from the
    empirical law) with an inner golden-section over the cat amplitude
    around the energy-conservation value.  Both rotation sign conventions
    are tried and the better one reported.  The rotation and the squeeze
    sector eigensystems are computed once per sign, so each xi probe costs
    two matrix-vector products.
    """
    if abs(psi_raw.norm() - 1.0) > 1e-8:
        raise ValueError("psi_raw must be normalized")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FitRangeWarning)
        xi0 = xi_prep_fit(beta, constants)
    n_in = psi_raw.amps.size
    dim = 2 * _occupied_support(psi_raw.amps) + 32
    nvec = np.arange(n_in)

    odd_weight = float(np.sum(np.abs(psi_raw.amps[1::2]) ** 2))
    if odd_weight > 1e-20:
        raise ValueError("psi_raw must occupy even photon numbers only")
    n_even = np.arange(0, dim, 2)
    lgam_even = np.array([math.lgamma(k + 1) for k in n_even])
    lam, V, ph = _squeeze_sector(0, dim)

    best: CatMatchResult | None = None
    for sign in (+1, -1):
        phi = np.zeros(dim, dtype=complex)
        phi[:n_in] = psi_raw.amps * np.exp(sign * 1j * nvec * math.pi / 4.0)
        w0 = V.T @ (np.conj(ph) * phi[n_even])

        def best_alpha_for(xi: float) -> tuple[float, float]:
            out = ph * (V @ (np.exp(1j * xi * lam) * w0))  # S(-xi) applied
            a_c = alpha_prep(beta, min(xi, 0.0)) if xi <= 0 else math.sqrt(2.0) * beta

            def neg_f(a: float) -> float:
                spec = CatSpec(alpha=a)
                logw = (
                    math.log(2.0)
                    - 0.5 * a * a
                    + n_even * math.log(a)
                    - 0.5 * lgam_even
                    - 0.5 * math.log(spec.normalization)
                )
                cat = np.exp(logw)
                ov = complex(np.vdot(cat, out))
                return -(ov.real**2 + ov.imag**2)

            a_star, neg = minimize_scalar(neg_f, (0.7 * a_c, 1.3 * a_c), tol=alpha_tol)
            return a_star, -neg

        def neg_best(xi: float) -> float:
            return -best_alpha_for(xi)[1]

        xi_star, _ = minimize_scalar(
            neg_best, (xi0 - xi_halfwidth, xi0 + xi_halfwidth), tol=xi_tol
        )
        a_star, f_star = best_alpha_for(xi_star)
        cand = CatMatchResult(
            xi=float(xi_star), alpha=float(a_star), fidelity=float(f_star), rotation_sign=sign
        )
        if best is None or cand.fidelity > best.fidelity:
            best = cand
    if best is None or not math.isfinite(best.fidelity):
        raise ArithmeticError(
            f"cat match failed for beta = {beta}; initial-guess xi = {xi0:.4f}"
        )
    return best


@dataclass(frozen=True)
class WignerGrid:
    """Wigner function samples on a rectangular (x, p) grid."""

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray  # shape (len(x), len(p))

    def riemann_sum(self) -> float:
        dx = float(self.x[1] - self.x[0])
        dp = float(self.p[1] - self.p[0])
        return float(self.values.sum() * dx * dp)


def wigner(psi: FockVector, x, p, check_norm: bool = True) -> WignerGrid:
    """Wigner function from Fock amplitudes via the displaced-parity series.

    W(x, p) = (1/pi) sum_{m,n} psi_m* psi_n (-1)^n <m|D(gamma)|n> with
    gamma = sqrt(2) (x + i p).  The displacement matrix elements are built
    from a Laguerre three-term recurrence run directly on the full element
    magnitude (factorial ratios, the power of |gamma| and the Gaussian are
    folded into the seed in log space), which stays bounded by 1 for any
    cutoff, so no factorial ever overflows.
    """
    if abs(psi.norm() - 1.0) > 1e-8:
        raise ValueError("wigner expects a normalized state")
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    if x.ndim != 1 or p.ndim != 1 or x.size < 2 or p.size < 2:
        raise ValueError("x and p must be 1-D grids with at least 2 points")
    X, P = np.meshgrid(x, p, indexing="ij")
    gamma = math.sqrt(2.0) * (X + 1j * P)
    z = np.abs(gamma) ** 2
    phase = np.exp(1j * np.angle(gamma))
    amps = psi.amps
    n_max = amps.size - 1
    signs = np.where(np.arange(amps.size) % 2 == 0, 1.0, -1.0)

    acc = np.zeros_like(z)
    log_gamma_abs = np.where(z > 0, 0.5 * np.log(np.maximum(z, 1e-300)), -np.inf)
    for L in range(n_max + 1):
        size = n_max + 1 - L
        coeff = np.conj(amps[L:]) * amps[:size] * signs[:size]
        if not np.any(coeff):
            continue
        # seed: B_0 = exp(-z/2 + L ln|gamma| - lgamma(L+1)/2)
        if L == 0:
            B_prev = np.exp(-0.5 * z)
        else:
            B_prev = np.exp(-0.5 * z + L * log_gamma_abs - 0.5 * math.lgamma(L + 1))
        phL = phase**L if L else 1.0
        block = coeff[0] * B_prev
        if coeff.size > 1:
            B = B_prev * (1.0 + L - z) / math.sqrt(1.0 + L)
            block = block + coeff[1] * B
            for n in range(1, coeff.size - 1):
                B_next = (
                    (2.0 * n + L + 1.0 - z) * B - math.sqrt(n * (n + L)) * B_prev
                ) / math.sqrt((n + 1.0) * (n + 1.0 + L))
                B_prev, B = B, B_next
                block = block + coeff[n + 1] * B
        contrib = (phL * block).real
        acc += contrib if L == 0 else 2.0 * contrib

    values = acc / math.pi
    grid = WignerGrid(x=x, p=p, values=values)
    if check_norm:
        s = grid.riemann_sum()
        if abs(s - 1.0) > 2e-3:
            raise ValueError(
                f"Wigner Riemann sum {s:.6f} deviates from 1 by more than 2e-3; "
                "the grid is too small or too coarse for this state"
            )
    return grid


def position_wavefunction(psi: FockVector, x) -> np.ndarray:
    """psi(x) = sum_n c_n phi_n(x) with harmonic-oscillator eigenfunctions.

    Uses the normalized Hermite-function recurrence; x is the quadrature with
    vacuum density exp(-x^2)/sqrt(pi).
    """
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape, dtype=complex)
    phi_prev = math.pi ** (-0.25) * np.exp(-0.5 * x * x)
    out += psi.amps[0] * phi_prev
    if psi.amps.size == 1:
        return out
    phi = math.sqrt(2.0) * x * phi_prev
    out += psi.amps[1] * phi
    for n in range(1, psi.amps.size - 1):
        phi_next = math.sqrt(2.0 / (n + 1.0)) * x * phi - math.sqrt(
            n / (n + 1.0)
        ) * phi_prev
        phi_prev, phi = phi, phi_next
        out += psi.amps[n + 1] * phi
    return out

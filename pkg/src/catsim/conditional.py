"""Heralded preparation: p0(tau) curve, optimal time search, fit-law evaluators.

The protocol evolves signal-vacuum x pump-coherent |beta> and measures the
pump photon number at the moment tau_opt that maximizes the probability p0
of the zero-photon outcome.  The surviving signal state (the k = 0 slice of
every block) is the raw heralded state.

The three closed-form laws in this module approximate how tau_opt, p0 and
the best-match squeeze parameter depend on beta.  They were obtained from
simulation sweeps over beta in [2, 100] and are deliberately kept as an
independent code path from the simulation so they can serve as its oracle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import hilbert
from .dynamics import block_spectrum
from .hilbert import FockVector
from .numkit import minimize_scalar

__all__ = [
    "FitLawConstants",
    "DEFAULT_CONSTANTS",
    "FitRangeWarning",
    "HeraldResult",
    "tau_opt_fit",
    "p_zero_fit",
    "xi_prep_fit",
    "p_zero_curve",
    "find_tau_opt",
]


class FitRangeWarning(UserWarning):
    """beta is outside [2, 100], where the empirical laws were fitted."""


@dataclass(frozen=True)
class FitLawConstants:
    """Constants of the three empirical laws (defaults from the reference fit).

    tau_opt(beta) ~ b_t / (1 + c_t beta)^d_t
    p0(beta)      ~ b_p / (1 + c_p beta)^d_p
    xi(beta)      ~ a_r + b_r / (1 + c_r beta)^d_r
    """

    b_t: float = 1.70
    c_t: float = 1.16
    d_t: float = 0.84
    b_p: float = 2.56
    c_p: float = 1.95
    d_p: float = 1.02
    a_r: float = -0.35
    b_r: float = 0.14
    c_r: float = 0.13
    d_r: float = 2.40

    validity: tuple[float, float] = (2.0, 100.0)


DEFAULT_CONSTANTS = FitLawConstants()


def _check_range(beta: float, c: FitLawConstants):
    lo, hi = c.validity
    if not lo <= beta <= hi:
        warnings.warn(
            f"beta = {beta} is outside the laws' fitted range [{lo}, {hi}]",
            FitRangeWarning,
            stacklevel=3,
        )


def tau_opt_fit(beta: float, c: FitLawConstants = DEFAULT_CONSTANTS) -> float:
    """Approximate optimal heralding time; exact formula, no clamping."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    _check_range(beta, c)
    return c.b_t / (1.0 + c.c_t * beta) ** c.d_t


def p_zero_fit(beta: float, c: FitLawConstants = DEFAULT_CONSTANTS) -> float:
    """Approximate heralding success probability at tau_opt."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    _check_range(beta, c)
    return c.b_p / (1.0 + c.c_p * beta) ** c.d_p


def xi_prep_fit(beta: float, c: FitLawConstants = DEFAULT_CONSTANTS) -> float:
    """Approximate best-fidelity squeeze parameter (negative for beta > 0)."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    _check_range(beta, c)
    return c.a_r + c.b_r / (1.0 + c.c_r * beta) ** c.d_r


class _HeraldKernel:
    """Per-block data sufficient to evaluate the k = 0 slice at any tau.

    For the standard initial state, block N = 2m starts in the single basis
    vector k = m with weight C_m, so the zero-pump amplitude at time tau is
    amp_N(tau) = sum_j V[0, j] exp(-i tau lam_j) V[m, j] C_m.  Only two rows
    of each eigenvector matrix are kept, which makes large-beta sweeps cheap
    in both memory and time.
    """

    def __init__(self, beta: float, eps_tail: float):
        self.beta = beta
        self.eps_tail = eps_tail
        n_max_total = hilbert.choose_cutoff(beta, eps_tail)
        coh = hilbert.coherent_amplitudes(beta, n_max_total // 2)
        self.norm_sq = float(np.sum(np.abs(coh.amps) ** 2))
        self.lams: list[np.ndarray] = []
        self.gs: list[np.ndarray] = []
        self.Ns: list[int] = []
        for m in range(n_max_total // 2 + 1):
            spec = block_spectrum(2 * m)
            V = spec.eigenvectors
            self.Ns.append(2 * m)
            self.lams.append(spec.eigenvalues)
            self.gs.append(coh.amps[m].real * V[0, :] * V[m, :])

    @property
    def n_max_total(self) -> int:
        return self.Ns[-1]

    def p0(self, tau: float) -> float:
        acc = 0.0
        for lam, g in zip(self.lams, self.gs):
            a = complex(np.exp(-1j * tau * lam) @ g)
            acc += a.real * a.real + a.imag * a.imag
        return acc / self.norm_sq

    def p0_grid(self, taus: np.ndarray) -> np.ndarray:
        acc = np.zeros(taus.size)
        for lam, g in zip(self.lams, self.gs):
            a = np.exp(-1j * np.outer(taus, lam)) @ g
            acc += np.abs(a) ** 2
        return acc / self.norm_sq

    def conditional_state(self, tau: float) -> tuple[FockVector, float]:
        amps = np.zeros(self.n_max_total + 1, dtype=complex)
        for N, lam, g in zip(self.Ns, self.lams, self.gs):
            amps[N] = np.exp(-1j * tau * lam) @ g
        p0 = float(np.vdot(amps, amps).real / self.norm_sq)
        return FockVector(amps / np.linalg.norm(amps), normalized=True), p0


@dataclass(frozen=True)
class HeraldResult:
    """Outcome of the optimal-time heralding protocol for one beta."""

    beta: float
    tau_opt: float
    p0: float
    psi_raw: FockVector  # normalized conditional signal state, even n only

    def __post_init__(self):
        if not 0.0 < self.p0 <= 1.0:
            raise ValueError(f"p0 = {self.p0} outside (0, 1]")


def p_zero_curve(beta: float, tau_grid, eps_tail: float = 1e-12) -> np.ndarray:
    """p0(tau) sampled on a grid: squared norm of the zero-pump slice."""
    if beta <= 0:
        raise ValueError("beta must be positive")
    taus = np.asarray(tau_grid, dtype=float)
    if taus.ndim != 1 or not np.isfinite(taus).all():
        raise ValueError("tau_grid must be a finite 1-D array")
    return _HeraldKernel(beta, eps_tail).p0_grid(taus)


def find_tau_opt(
    beta: float,
    eps_tail: float = 1e-12,
    constants: FitLawConstants = DEFAULT_CONSTANTS,
    coarse_points: int = 400,
    window_factor: float = 2.5,
    refine_tol: float = 1e-10,
) -> HeraldResult:
    """Locate the p0 maximum and return the heralded state there.

    A coarse scan over (0, window_factor * tau_opt_fit(beta)] brackets the
    global maximum of the oscillatory p0 curve (anchoring the window to the
    approximation law avoids chasing late-time revivals); golden-section
    refinement then pins tau_opt.  If the coarse maximum lands on the window
    edge the window is doubled once before giving up.
    """
    if beta <= 0:
        raise ValueError("beta must be positive")
    _check_range(beta, constants)
    kern = _HeraldKernel(beta, eps_tail)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FitRangeWarning)
        window = window_factor * tau_opt_fit(beta, constants)

    for _attempt in range(2):
        taus = np.linspace(window / coarse_points, window, coarse_points)
        p0s = kern.p0_grid(taus)
        i = int(np.argmax(p0s))
        if 0 < i < coarse_points - 1:
            break
        window *= 2.0
    else:
        raise ArithmeticError(
            f"p0 maximum not bracketed for beta = {beta}; "
            f"curve sampled up to tau = {taus[-1]:.3f}: "
            f"p0 range [{p0s.min():.3e}, {p0s.max():.3e}]"
        )

    tau_opt, _ = minimize_scalar(
        lambda t: -kern.p0(t), (taus[i - 1], taus[i + 1]), tol=refine_tol
    )
    psi_raw, p0 = kern.conditional_state(tau_opt)
    return HeraldResult(beta=beta, tau_opt=tau_opt, p0=p0, psi_raw=psi_raw)

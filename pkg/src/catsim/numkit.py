"""Numerical kernels: tridiagonal eigensolver, scalar minimizer, nonlinear fits.

Thin, contract-checked wrappers around LAPACK/MINPACK-grade routines.  All
functions are pure and safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.optimize

__all__ = [
    "TridiagonalSym",
    "EigenDecomposition",
    "FitModel",
    "MODEL_FORMS",
    "eigh_tridiagonal",
    "minimize_scalar",
    "nls_fit",
    "log_factorial",
]


@dataclass(frozen=True)
class TridiagonalSym:
    """Real symmetric tridiagonal matrix: main diagonal and one off-diagonal."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        diag = np.asarray(self.diag, dtype=float)
        offdiag = np.asarray(self.offdiag, dtype=float)
        object.__setattr__(self, "diag", diag)
        object.__setattr__(self, "offdiag", offdiag)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diag must be a vector of length >= 1")
        if offdiag.shape != (diag.size - 1,):
            raise ValueError(
                f"offdiag must have length {diag.size - 1}, got {offdiag.size}"
            )
        if not (np.isfinite(diag).all() and np.isfinite(offdiag).all()):
            raise ValueError("tridiagonal entries must be finite")

    @property
    def size(self) -> int:
        return self.diag.size


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def eigh_tridiagonal(m: TridiagonalSym) -> EigenDecomposition:
    """Full eigendecomposition of a real symmetric tridiagonal matrix.

    Eigenvalues come back ascending; column j of ``eigenvectors`` belongs to
    ``eigenvalues[j]``.  Columns are orthonormal to well below 1e-12 per
    inner product.
    """
    if m.size == 1:
        return EigenDecomposition(m.diag.copy(), np.ones((1, 1)))
    w, v = scipy.linalg.eigh_tridiagonal(m.diag, m.offdiag)
    return EigenDecomposition(w, v)


def minimize_scalar(f, bracket: tuple[float, float], tol: float = 1e-10):
    """Minimize a scalar function on a closed bracket.

    Golden-section search with parabolic refinement (bounded Brent).  Returns
    ``(x_min, f(x_min))``.  Raises if the bracket is degenerate or the
    minimizer fails to produce a finite result.
    """
    a, b = float(bracket[0]), float(bracket[1])
    if not (math.isfinite(a) and math.isfinite(b)) or not a < b:
        raise ValueError(f"invalid bracket {bracket!r}")
    if tol <= 0:
        raise ValueError("tol must be positive")
    res = scipy.optimize.minimize_scalar(
        f, bounds=(a, b), method="bounded", options={"xatol": tol}
    )
    x, fx = float(res.x), float(res.fun)
    if not math.isfinite(fx):
        raise ArithmeticError(f"minimizer produced non-finite value at x={x}")
    return x, fx


# Model forms for the empirical laws. x is the pump amplitude axis.
def _decay3(p, x):
    b, c, d = p
    base = 1.0 + c * x
    with np.errstate(invalid="ignore"):
        y = b / np.power(base, d)
    return y


def _decay4(p, x):
    a, b, c, d = p
    base = 1.0 + c * x
    with np.errstate(invalid="ignore"):
        y = a + b / np.power(base, d)
    return y


# name -> (callable, n_params, parameter names, sanity bounds for the solver)
MODEL_FORMS = {
    "tau_opt": (_decay3, 3, ("b", "c", "d"), ([0.0, 0.0, 0.05], [100.0, 100.0, 10.0])),
    "p_zero": (_decay3, 3, ("b", "c", "d"), ([0.0, 0.0, 0.05], [100.0, 100.0, 10.0])),
    "xi_prep": (
        _decay4,
        4,
        ("a", "b", "c", "d"),
        ([-10.0, 0.0, 0.0, 0.05], [0.0, 10.0, 10.0, 50.0]),
    ),
}


@dataclass(frozen=True)
class FitModel:
    """Fitted empirical-law parameters plus the achieved residual norm."""

    model: str
    params: np.ndarray
    residual_norm: float

    def __post_init__(self):
        if self.model not in MODEL_FORMS:
            raise ValueError(f"unknown model {self.model!r}")
        object.__setattr__(self, "params", np.asarray(self.params, dtype=float))
        if self.residual_norm < 0:
            raise ValueError("residual norm must be non-negative")

    @property
    def named(self) -> dict[str, float]:
        names = MODEL_FORMS[self.model][2]
        return dict(zip(names, map(float, self.params)))

    def __call__(self, x):
        return MODEL_FORMS[self.model][0](self.params, np.asarray(x, dtype=float))


def nls_fit(model: str, x, y, initial: np.ndarray | list[float]) -> FitModel:
    """Nonlinear least squares for one of the registered law forms.

    Damped Gauss-Newton (trust-region) with finite-difference Jacobians and
    loose positivity bounds that only keep the evaluation finite; falls back
    to Nelder-Mead on the summed squares if the primary solver fails.
    """
    if model not in MODEL_FORMS:
        raise ValueError(f"unknown model {model!r}; choose from {sorted(MODEL_FORMS)}")
    form, n_par, _, bounds = MODEL_FORMS[model]
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("x and y must be 1-D arrays of equal length")
    if x.size < 2 * n_par:
        raise ValueError(f"need at least {2 * n_par} data points, got {x.size}")
    p0 = np.asarray(initial, dtype=float)
    if p0.shape != (n_par,):
        raise ValueError(f"initial guess must have length {n_par}")

    def residuals(p):
        r = form(p, x) - y
        return np.where(np.isfinite(r), r, 1e6)

    lo, hi = np.asarray(bounds[0]), np.asarray(bounds[1])
    p0c = np.clip(p0, lo + 1e-12, hi - 1e-12)
    sol = scipy.optimize.least_squares(residuals, p0c, bounds=(lo, hi), method="trf")
    if sol.success and np.isfinite(sol.cost):
        params = sol.x
    else:
        nm = scipy.optimize.minimize(
            lambda p: float(np.sum(residuals(p) ** 2)),
            p0c,
            method="Nelder-Mead",
            options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 5000},
        )
        if not np.isfinite(nm.fun):
            raise ArithmeticError(
                f"fit diverged for model {model!r}; last iterate {nm.x.tolist()}"
            )
        params = nm.x
    rnorm = float(np.linalg.norm(form(params, x) - y))
    return FitModel(model=model, params=params, residual_norm=rnorm)


def log_factorial(n: int) -> float:
    """ln(n!) via lgamma; exact to machine precision for all n >= 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.lgamma(n + 1)

"""Brute-force reference implementation on the flat product Fock basis.

Everything here does its own index arithmetic on the dense (n_s, n_p) grid
and deliberately avoids the block machinery, so agreement between the two
propagation paths is evidence rather than tautology.  Test-scale only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .hilbert import BlockState

__all__ = [
    "DenseTwoModeState",
    "BoundaryWarning",
    "dense_hamiltonian",
    "dense_initial_state",
    "dense_evolve",
    "overlap",
    "naive_eigh",
]


class BoundaryWarning(UserWarning):
    """State weight near the truncation boundary; evolved result untrustworthy."""


@dataclass
class DenseTwoModeState:
    """psi[n_s, n_p] on the product grid n_s <= n_s_max, n_p <= n_p_max."""

    psi: np.ndarray

    def __post_init__(self):
        self.psi = np.asarray(self.psi, dtype=complex)
        if self.psi.ndim != 2:
            raise ValueError("psi must be a 2-D array indexed [n_s, n_p]")

    @property
    def n_s_max(self) -> int:
        return self.psi.shape[0] - 1

    @property
    def n_p_max(self) -> int:
        return self.psi.shape[1] - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.psi))


def dense_hamiltonian(n_s_max: int, n_p_max: int) -> np.ndarray:
    """Interaction Hamiltonian (units of hbar*gamma) on the flattened grid.

    <n_s - 2, n_p + 1| H |n_s, n_p> = sqrt(n_s (n_s - 1)(n_p + 1)), plus the
    Hermitian conjugate; every other element is zero.
    """
    if n_s_max < 0 or n_p_max < 0:
        raise ValueError("cutoffs must be non-negative")
    ncols = n_p_max + 1
    dim = (n_s_max + 1) * ncols
    H = np.zeros((dim, dim))
    for ns in range(2, n_s_max + 1):
        for npp in range(n_p_max):
            v = math.sqrt(ns * (ns - 1) * (npp + 1))
            row = (ns - 2) * ncols + (npp + 1)
            col = ns * ncols + npp
            H[row, col] = v
            H[col, row] = v
    return H


def dense_initial_state(beta: float, n_s_max: int, n_p_max: int) -> DenseTwoModeState:
    """Signal vacuum x pump coherent |beta>, built with plain Poisson weights."""
    if beta < 0:
        raise ValueError("beta must be non-negative")
    psi = np.zeros((n_s_max + 1, n_p_max + 1), dtype=complex)
    for m in range(n_p_max + 1):
        if beta == 0.0:
            psi[0, 0] = 1.0
            break
        psi[0, m] = math.exp(
            -0.5 * beta * beta + m * math.log(beta) - 0.5 * math.lgamma(m + 1)
        )
    return DenseTwoModeState(psi)


def _boundary_weight(psi: np.ndarray) -> float:
    ns_edge = max(1, psi.shape[0] // 10)
    np_edge = max(1, psi.shape[1] // 10)
    w = float(np.sum(np.abs(psi[-ns_edge:, :]) ** 2))
    w += float(np.sum(np.abs(psi[:-ns_edge, -np_edge:]) ** 2))
    return w


def dense_evolve(psi0: DenseTwoModeState, tau: float) -> DenseTwoModeState:
    """exp(-i tau H) psi0 via one dense Hermitian eigendecomposition.

    Warns when the top decile of either index already carries more than
    1e-14 of the probability: the truncated propagation is then dominated
    by boundary artifacts rather than physics.
    """
    if not np.isfinite(tau):
        raise ValueError("tau must be finite")
    w_edge = _boundary_weight(psi0.psi)
    if w_edge > 1e-14:
        warnings.warn(
            f"initial state has {w_edge:.3e} probability in the top decile of "
            "the truncated grid; evolved amplitudes near the boundary are "
            "untrustworthy",
            BoundaryWarning,
            stacklevel=2,
        )
    H = dense_hamiltonian(psi0.n_s_max, psi0.n_p_max)
    w, U = np.linalg.eigh(H)
    flat = psi0.psi.reshape(-1)
    evolved = U @ (np.exp(-1j * tau * w) * (U.conj().T @ flat))
    return DenseTwoModeState(evolved.reshape(psi0.psi.shape))


def overlap(a: DenseTwoModeState, b: BlockState) -> complex:
    """<a|b> with block entries mapped through (N, k) -> (n_s = N - 2k, n_p = k)."""
    acc = 0.0 + 0.0j
    for N, vec in b.blocks.items():
        for k in range(vec.size):
            ns, npp = N - 2 * k, k
            if ns > a.n_s_max or npp > a.n_p_max:
                if abs(vec[k]) > 1e-12:
                    raise ValueError(
                        f"block state occupies (n_s={ns}, n_p={npp}) outside the "
                        f"dense cutoffs ({a.n_s_max}, {a.n_p_max})"
                    )
                continue
            acc += np.conj(a.psi[ns, npp]) * vec[k]
    return complex(acc)


def naive_eigh(A: np.ndarray, tol: float = 1e-14, max_sweeps: int = 60):
    """Cyclic Jacobi eigensolver for small dense real symmetric matrices.

    Deliberately naive (no LAPACK) so it can act as an independent check on
    the production tridiagonal solver.  Returns ascending eigenvalues and
    the orthogonal eigenvector matrix (columns).  Practical up to m ~ 100.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("A must be square")
    if not np.allclose(A, A.T, atol=1e-12):
        raise ValueError("A must be symmetric")
    m = A.shape[0]
    V = np.eye(m)
    scale = float(np.abs(A).max()) or 1.0
    for _sweep in range(max_sweeps):
        off = math.sqrt(float(np.sum(np.tril(A, -1) ** 2)))
        if off <= tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = A[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = 0.5 * (A[q, q] - A[p, p]) / apq
                t = math.copysign(1.0, theta) / (
                    abs(theta) + math.hypot(1.0, theta)
                )
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                rot = np.array([[c, s], [-s, c]])
                A[[p, q], :] = rot.T @ A[[p, q], :]
                A[:, [p, q]] = A[:, [p, q]] @ rot
                V[:, [p, q]] = V[:, [p, q]] @ rot
    else:
        raise ArithmeticError("Jacobi sweep did not converge")
    w = np.diag(A).copy()
    order = np.argsort(w)
    return w[order], V[:, order]

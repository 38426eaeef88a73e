"""State containers and basic observables for the two-mode system.

Two representations are used throughout:

* ``FockVector`` -- a single-mode state as complex amplitudes over the photon
  number n = 0..n_max.
* ``BlockState`` -- a two-mode pure state organized by the conserved total
  quanta N = n_s + 2 n_p.  Within block N the index k = 0..[N/2] is the pump
  photon number, so the signal mode holds n_s = N - 2k photons.

The initial condition of interest is signal vacuum times a real coherent
pump |beta>, which populates only even blocks (N = 2m with a single entry at
k = m); the unitary dynamics never leaves that subspace, so odd-N blocks are
simply never allocated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .numkit import log_factorial

__all__ = [
    "FockVector",
    "BlockState",
    "OccupationRecord",
    "coherent_amplitudes",
    "choose_cutoff",
    "initial_block_state",
    "mean_occupations",
    "signal_distribution",
    "extract_signal_if_pump_vacuum",
]

NORM_TOL = 1e-10


@dataclass
class FockVector:
    """Complex amplitudes over photon numbers 0..n_max for one bosonic mode.

    ``normalized=False`` marks intentionally sub-normalized vectors, e.g. the
    raw output of a heralding projection whose squared norm is the success
    probability.
    """

    amps: np.ndarray
    normalized: bool = True

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.ndim != 1 or self.amps.size == 0:
            raise ValueError("amps must be a non-empty 1-D array")
        if self.normalized and abs(self.norm() - 1.0) > NORM_TOL:
            raise ValueError(
                f"vector flagged normalized but ||psi|| = {self.norm():.3e}"
            )

    @property
    def n_max(self) -> int:
        return self.amps.size - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def probabilities(self) -> np.ndarray:
        p = np.abs(self.amps) ** 2
        return p / p.sum()

    def mean_n(self) -> float:
        p = self.probabilities()
        return float(np.arange(p.size) @ p)

    def normalize(self) -> "FockVector":
        n = self.norm()
        if n == 0:
            raise ValueError("cannot normalize the zero vector")
        return FockVector(self.amps / n, normalized=True)

    def to_json_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "re": self.amps.real.tolist(),
            "im": self.amps.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "FockVector":
        amps = np.asarray(doc["re"], dtype=float) + 1j * np.asarray(
            doc["im"], dtype=float
        )
        if amps.size != doc["n_max"] + 1:
            raise ValueError("n_max inconsistent with amplitude arrays")
        v = float(np.linalg.norm(amps))
        return cls(amps, normalized=abs(v - 1.0) <= NORM_TOL)


@dataclass
class BlockState:
    """Two-mode state stored per total-quanta block N (ragged layout).

    blocks[N][k] is the amplitude on |n_s = N - 2k>_s |n_p = k>_p.
    """

    beta: float
    eps_tail: float
    blocks: dict[int, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        for N, vec in self.blocks.items():
            vec = np.asarray(vec, dtype=complex)
            if vec.shape != (N // 2 + 1,):
                raise ValueError(f"block {N} must have length {N // 2 + 1}")
            self.blocks[N] = vec

    @property
    def n_max_total(self) -> int:
        return max(self.blocks) if self.blocks else 0

    def norm_sq(self) -> float:
        return float(sum(np.vdot(v, v).real for v in self.blocks.values()))

    def to_json_dict(self) -> dict:
        return {
            "beta": self.beta,
            "eps_tail": self.eps_tail,
            "blocks": {
                str(N): {"re": v.real.tolist(), "im": v.imag.tolist()}
                for N, v in sorted(self.blocks.items())
            },
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "BlockState":
        blocks = {
            int(N): np.asarray(b["re"], dtype=float)
            + 1j * np.asarray(b["im"], dtype=float)
            for N, b in doc["blocks"].items()
        }
        return cls(beta=doc["beta"], eps_tail=doc["eps_tail"], blocks=blocks)


@dataclass(frozen=True)
class OccupationRecord:
    """Mean occupations at one instant of normalized time."""

    tau: float
    mean_ns: float
    mean_np: float
    sum_energy: float  # mean_ns + 2 mean_np, conserved by the dynamics


def coherent_amplitudes(beta: float, n_max: int) -> FockVector:
    """Fock amplitudes of the real coherent state |beta>, beta >= 0.

    amp(n) = exp(-beta^2/2) beta^n / sqrt(n!), evaluated with log-weights so
    large beta and n do not overflow.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    amps = np.zeros(n_max + 1)
    if beta == 0.0:
        amps[0] = 1.0
    else:
        n = np.arange(n_max + 1)
        logw = -0.5 * beta**2 + n * math.log(beta) - 0.5 * _lgamma_arr(n + 1)
        amps = np.exp(logw)
    return FockVector(amps, normalized=abs(np.linalg.norm(amps) - 1.0) <= NORM_TOL)


def _lgamma_arr(n: np.ndarray) -> np.ndarray:
    return np.array([math.lgamma(int(k)) for k in n])


def _poisson_pmf(mu: float, hi: int) -> np.ndarray:
    m = np.arange(hi + 1)
    return np.exp(m * math.log(mu) - mu - _lgamma_arr(m + 1))


def choose_cutoff(beta: float, eps_tail: float) -> int:
    """Smallest even N_max = 2 n_p_max with Poisson(beta^2) tail <= eps_tail.

    The pump photon number of the initial state is Poisson(beta^2); the tail
    is summed from the far end so the tiny suffix sums stay accurate.
    """
    if eps_tail <= 0:
        raise ValueError("eps_tail must be positive")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    mu = beta * beta
    if mu == 0.0:
        return 0
    hi = int(mu + 20.0 * math.sqrt(mu) + 40.0)
    pmf = _poisson_pmf(mu, hi)
    suffix = np.cumsum(pmf[::-1])[::-1]  # suffix[m] = P(X >= m)
    for m in range(hi):
        if suffix[m + 1] <= eps_tail:
            return 2 * m
    raise RuntimeError("cutoff search exhausted; eps_tail too small")


def initial_block_state(beta: float, eps_tail: float = 1e-12) -> BlockState:
    """Signal vacuum times pump coherent |beta> in the block representation.

    Block N = 2m carries the single entry amp = coherent(beta)[m] at k = m
    (all quanta in the pump).  Total squared norm is within eps_tail of 1.
    """
    n_max_total = choose_cutoff(beta, eps_tail)
    coh = coherent_amplitudes(beta, n_max_total // 2)
    blocks: dict[int, np.ndarray] = {}
    for m in range(n_max_total // 2 + 1):
        vec = np.zeros(m + 1, dtype=complex)
        vec[m] = coh.amps[m]
        blocks[2 * m] = vec
    return BlockState(beta=beta, eps_tail=eps_tail, blocks=blocks)


def mean_occupations(s: BlockState) -> tuple[float, float]:
    """(<n_s>, <n_p>) of a block state, normalized by its squared norm."""
    norm_sq = s.norm_sq()
    if norm_sq == 0.0:
        raise ValueError("zero-norm state has no occupations")
    ns_acc = 0.0
    np_acc = 0.0
    for N, vec in s.blocks.items():
        w = np.abs(vec) ** 2
        k = np.arange(vec.size)
        ns_acc += float((N - 2 * k) @ w)
        np_acc += float(k @ w)
    return ns_acc / norm_sq, np_acc / norm_sq


def signal_distribution(s: BlockState) -> np.ndarray:
    """Photon-number distribution of the signal mode, P(n), n = 0..N_max.

    P(n) marginalizes |amps|^2 over every (N, k) with N - 2k = n.  For states
    evolved from the even-block initial condition all odd entries are exactly
    zero (parity is structural, not numerical).
    """
    out = np.zeros(s.n_max_total + 1)
    for N, vec in s.blocks.items():
        k = np.arange(vec.size)
        out[N - 2 * k] += np.abs(vec) ** 2
    tot = out.sum()
    if tot == 0.0:
        raise ValueError("zero-norm state")
    return out / tot


def extract_signal_if_pump_vacuum(s: BlockState) -> tuple[FockVector, float]:
    """Project onto zero pump photons; return the raw signal state and p0.

    k = 0 is the n_p = 0 slice, so the conditional signal state lives on
    n_s = N only.  The returned FockVector is left unnormalized (its squared
    norm equals p0 times the state's squared norm); p0 is the heralding
    success probability.
    """
    norm_sq = s.norm_sq()
    if norm_sq == 0.0:
        raise ValueError("zero-norm state")
    amps = np.zeros(s.n_max_total + 1, dtype=complex)
    for N, vec in s.blocks.items():
        amps[N] = vec[0]
    p0 = float(np.vdot(amps, amps).real / norm_sq)
    if p0 == 0.0:
        raise ValueError("herald probability is zero; conditional state undefined")
    return FockVector(amps, normalized=False), p0

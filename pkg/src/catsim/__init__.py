"""catsim: heralded bright Schrodinger-cat preparation via parametric down-conversion.

Library layout:

* ``numkit``      -- tridiagonal eigensolver, scalar minimizer, law fits
* ``hilbert``     -- Fock/block state containers and observables
* ``dynamics``    -- exact block-spectral propagation
* ``conditional`` -- heralding protocol and empirical-law evaluators
* ``cvops``       -- cats, rotation, squeezing, fidelity, Wigner functions
* ``oracle``      -- dense brute-force reference (tests)
* ``fits``        -- beta sweeps and law recovery
* ``feasibility`` -- physical-units estimates
* ``cli``         -- the ``catsim`` command
"""

from .conditional import (
    DEFAULT_CONSTANTS,
    FitLawConstants,
    HeraldResult,
    find_tau_opt,
    p_zero_curve,
    p_zero_fit,
    tau_opt_fit,
    xi_prep_fit,
)
from .cvops import (
    CatSpec,
    SqueezeParam,
    WignerGrid,
    alpha_prep,
    cat_state,
    fidelity,
    optimize_cat_match,
    prepare_psi_out,
    rotate,
    squeeze,
    wigner,
)
from .dynamics import SpectrumCache, block_coupling, block_spectrum, energy_series, evolve
from .feasibility import LITHIUM_NIOBATE, PlatformParams, coupling_rate, preparation_time
from .fits import DEFAULT_BETA_GRID, SweepRecord, fit_p_zero, fit_tau_opt, fit_xi_prep, sweep
from .hilbert import (
    BlockState,
    FockVector,
    choose_cutoff,
    coherent_amplitudes,
    extract_signal_if_pump_vacuum,
    initial_block_state,
    mean_occupations,
    signal_distribution,
)

__version__ = "0.1.0"

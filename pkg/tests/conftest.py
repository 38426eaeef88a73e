"""Shared fixtures: the expensive pipeline artifacts are computed once."""

import time

import pytest

from catsim import conditional, cvops, fits


@pytest.fixture(scope="session")
def herald_results():
    """HeraldResult per beta, computed lazily and cached for the session."""
    cache = {}

    def get(beta: float) -> conditional.HeraldResult:
        if beta not in cache:
            cache[beta] = conditional.find_tau_opt(beta)
        return cache[beta]

    return get


@pytest.fixture(scope="session")
def match_results(herald_results):
    """CatMatchResult per beta, reusing the cached heralds."""
    cache = {}

    def get(beta: float) -> cvops.CatMatchResult:
        if beta not in cache:
            cache[beta] = cvops.optimize_cat_match(herald_results(beta).psi_raw, beta)
        return cache[beta]

    return get


@pytest.fixture(scope="session")
def default_sweep():
    """One full default-grid sweep, timed; backbone of the acceptance tests."""
    t0 = time.perf_counter()
    records = fits.sweep(fits.DEFAULT_BETA_GRID, workers=1)
    elapsed = time.perf_counter() - t0
    assert len(records) == len(fits.DEFAULT_BETA_GRID)
    return records, elapsed

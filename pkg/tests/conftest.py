"""Shared fixtures: small working grids and cached solitary-wave solves."""

import numpy as np
import pytest

from solitonlab.grid import SpectralGrid
from solitonlab.petviashvili import petviashvili_solve


@pytest.fixture(scope="session")
def grid_small():
    return SpectralGrid(n_points=1024, half_width=100.0)


@pytest.fixture(scope="session")
def grid_mid():
    return SpectralGrid(n_points=2048, half_width=100.0)


@pytest.fixture(scope="session")
def solve_cache():
    """Memoized petviashvili_solve keyed by (alpha, omega, grid)."""
    cache = {}

    def solve(alpha, omega, grid, config=None):
        key = (alpha, omega, grid.n_points, grid.half_width,
               None if config is None else id(config))
        if key not in cache:
            cache[key] = petviashvili_solve(alpha, omega, grid, config)
        return cache[key]

    return solve


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

"""Tests for the stabilized fixed-point solver and its diagnostics."""

import numpy as np
import pytest

from solitonlab.errors import DegenerateInputError, ParameterError
from solitonlab.explicit import explicit_params, phi_exact
from solitonlab.grid import RealProfile, SpectralGrid
from solitonlab.petviashvili import (
    SolverConfig,
    nonlinearity,
    petviashvili_solve,
    residual,
    stabilizing_factor,
)

OMEGA0_2 = 4.0 / 25.0


def test_config_validation():
    with pytest.raises(ParameterError):
        SolverConfig(nu=-1.0)
    with pytest.raises(ParameterError):
        SolverConfig(tol_error=0.0)
    with pytest.raises(ParameterError):
        SolverConfig(max_iter=0)
    with pytest.raises(ParameterError):
        SolverConfig(dispersion_beta=-0.5)


def test_nonlinearity_handles_signs():
    v = np.array([-2.0, 0.0, 3.0])
    np.testing.assert_allclose(nonlinearity(v, 2.0), v**3, rtol=1e-14)
    out = nonlinearity(np.array([-1.5]), 0.5)
    assert out[0] == pytest.approx(-(1.5 ** 1.5), rel=1e-14)


def test_stabilizing_factor_at_exact_wave(grid_mid):
    phi = phi_exact(2.0, grid_mid)
    assert stabilizing_factor(phi, 2.0, OMEGA0_2) == pytest.approx(1.0, abs=1e-8)


def test_stabilizing_factor_scaling(grid_mid):
    phi = phi_exact(2.0, grid_mid)
    m1 = stabilizing_factor(phi, 2.0, OMEGA0_2)
    scaled = RealProfile(grid_mid, 2.0 * phi.values)
    m2 = stabilizing_factor(scaled, 2.0, OMEGA0_2)
    assert m2 == pytest.approx(m1 * 2.0 ** (-2.0), rel=1e-12)


def test_stabilizing_factor_gaussian_oracle(grid_mid):
    g = grid_mid
    values = np.exp(-g.nodes**2)
    profile = RealProfile(g, values)
    # direct quadrature of both pairings using spectral derivatives
    num = g.dx * np.sum(
        g.apply_symbol(values, lambda xi: xi**4 + xi**2 + 0.16) * values)
    den = g.dx * np.sum(values**4)
    expected = num / den
    assert stabilizing_factor(profile, 2.0, 0.16) == pytest.approx(expected, rel=1e-10)
    assert expected != pytest.approx(1.0, rel=0.1)


def test_stabilizing_factor_zero_profile(grid_small):
    zero = RealProfile(grid_small, np.zeros(grid_small.n_points))
    with pytest.raises(DegenerateInputError):
        stabilizing_factor(zero, 2.0, 0.16)


def test_residual_of_exact_wave(grid_mid):
    phi = phi_exact(2.0, grid_mid)
    assert residual(phi, 2.0, OMEGA0_2) <= 1e-8


def test_residual_of_zero_profile(grid_small):
    zero = RealProfile(grid_small, np.zeros(grid_small.n_points))
    assert residual(zero, 2.0, 0.16) == 0.0


def test_residual_linear_in_omega_shift(grid_mid):
    phi = phi_exact(2.0, grid_mid)
    shifted = residual(phi, 2.0, OMEGA0_2 + 0.1)
    peak = np.max(np.abs(phi.values))
    assert shifted == pytest.approx(0.1 * peak, abs=1e-8)


def test_solve_reproduces_exact_wave(grid_mid, solve_cache):
    profile, diag = solve_cache(2.0, OMEGA0_2, grid_mid)
    assert diag.converged
    exact = phi_exact(2.0, grid_mid)
    assert np.max(np.abs(profile.values - exact.values)) <= 1e-9


def test_solve_diagnostics_consistency(grid_mid, solve_cache):
    profile, diag = solve_cache(2.0, OMEGA0_2, grid_mid)
    assert diag.error_history.size == diag.iterations
    assert diag.stab_history.size == diag.iterations
    assert diag.res_history.size == diag.iterations
    assert diag.error_history[-1] <= 1e-12
    assert diag.stab_history[-1] <= 1e-12
    assert diag.res_history[-1] <= 1e-10


def test_solve_validation(grid_small):
    with pytest.raises(ParameterError):
        petviashvili_solve(-1.0, 0.16, grid_small)
    with pytest.raises(ParameterError):
        petviashvili_solve(2.0, 0.0, grid_small)


def test_fixed_point_property(grid_mid, solve_cache):
    profile, _ = solve_cache(2.0, OMEGA0_2, grid_mid)
    config = SolverConfig(max_iter=1, initial_guess=profile)
    again, _ = petviashvili_solve(2.0, OMEGA0_2, grid_mid, config)
    assert np.max(np.abs(again.values - profile.values)) <= 10 * 1e-12


def test_translation_covariance(grid_mid, solve_cache):
    reference, _ = solve_cache(2.0, OMEGA0_2, grid_mid)
    shifted_guess = RealProfile(
        grid_mid, np.roll(np.exp(-grid_mid.nodes**2), 50))
    config = SolverConfig(initial_guess=shifted_guess)
    profile, diag = petviashvili_solve(2.0, OMEGA0_2, grid_mid, config)
    assert diag.converged
    # both results are recentered by peak, so they must coincide
    assert np.max(np.abs(profile.values - reference.values)) <= 1e-8


def test_low_frequency_profiles_positive_and_even(grid_mid, solve_cache):
    for alpha in (1.0, 2.0, 3.0, 4.0):
        profile, diag = solve_cache(alpha, 0.2, grid_mid)
        assert diag.converged
        v = profile.values
        assert v.min() > -1e-10
        center = grid_mid.n_points // 2
        even_err = np.max(np.abs(v[center + 1:] - v[1:center][::-1]))
        assert even_err <= 1e-8


def test_sign_changing_tails_above_threshold(grid_mid, solve_cache):
    profile, diag = solve_cache(3.0, 1.0, grid_mid)
    assert diag.converged
    assert profile.values.min() < 0


def test_exact_sech_initial_guess(grid_mid):
    config = SolverConfig(initial_guess="exact-sech")
    profile, diag = petviashvili_solve(2.0, OMEGA0_2, grid_mid, config)
    assert diag.converged
    assert diag.iterations <= 5


def test_non_convergence_is_reported_not_raised(grid_mid):
    config = SolverConfig(max_iter=3)
    _, diag = petviashvili_solve(2.0, OMEGA0_2, grid_mid, config)
    assert not diag.converged
    assert diag.iterations == 3


def test_initial_guess_on_wrong_grid(grid_small, grid_mid):
    guess = RealProfile(grid_small, np.exp(-grid_small.nodes**2))
    with pytest.raises(ParameterError):
        petviashvili_solve(2.0, 0.16, grid_mid, SolverConfig(initial_guess=guess))


def test_unknown_initial_guess(grid_small):
    with pytest.raises(ParameterError):
        petviashvili_solve(2.0, 0.16, grid_small,
                           SolverConfig(initial_guess="bogus"))


def test_pure_fourth_order_solve(grid_mid):
    config = SolverConfig(dispersion_beta=0.0)
    profile, diag = petviashvili_solve(4.0, 0.1, grid_mid, config)
    assert diag.converged
    assert residual(profile, 4.0, 0.1, beta=0.0) <= 1e-8


def test_alpha4_reproduces_exact_wave(grid_mid, solve_cache):
    omega0 = explicit_params(4.0).omega0
    profile, diag = solve_cache(4.0, omega0, grid_mid)
    assert diag.converged
    exact = phi_exact(4.0, grid_mid)
    assert np.max(np.abs(profile.values - exact.values)) <= 1e-9

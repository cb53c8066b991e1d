"""Tests for linearized-operator assembly, eigenvalue counts, and PF(2)."""

import numpy as np
import pytest

from solitonlab.errors import DomainError, ParameterError
from solitonlab.explicit import (
    explicit_params,
    phi_exact,
    phi_pow_alpha_hat_exact,
)
from solitonlab.grid import SpectralGrid
from solitonlab.spectra import (
    EigenReport,
    build_operator,
    check_pf2_logconcavity,
    composite_counts,
    eigen_report,
    ground_state_positivity,
    multiplier_matrix,
    negative_direction_scalar,
    restrict_even_sector,
)
from solitonlab.stability import d_second_at_omega0

OMEGA0_2 = 4.0 / 25.0


@pytest.fixture(scope="module")
def op_grid():
    return SpectralGrid(n_points=1024, half_width=100.0)


@pytest.fixture(scope="module")
def reports_alpha2(op_grid):
    phi = phi_exact(2.0, op_grid)
    out = {}
    for which in ("Lminus", "Lplus"):
        op = build_operator(phi, 2.0, OMEGA0_2, which)
        out[which] = eigen_report(op)
    return out


def test_multiplier_matrix_matches_spectral_application(op_grid, rng):
    matrix = multiplier_matrix(op_grid, lambda xi: xi**2)
    f = rng.standard_normal(op_grid.n_points)
    direct = op_grid.apply_symbol(f, lambda xi: xi**2)
    np.testing.assert_allclose(matrix @ f, direct, atol=1e-10)


def test_build_operator_validation(op_grid):
    phi = phi_exact(2.0, op_grid)
    with pytest.raises(ParameterError):
        build_operator(phi, 2.0, OMEGA0_2, which="Lzero")


def test_operator_is_symmetric(op_grid):
    phi = phi_exact(2.0, op_grid)
    op = build_operator(phi, 2.0, OMEGA0_2, "Lminus")
    assert np.max(np.abs(op.entries - op.entries.T)) <= 1e-10


def test_matvec_matches_spectral_operator(op_grid, rng):
    phi = phi_exact(2.0, op_grid)
    op = build_operator(phi, 2.0, OMEGA0_2, "Lminus")
    f = rng.standard_normal(op_grid.n_points)
    spectral = (op_grid.apply_symbol(f, lambda xi: xi**4 + xi**2 + OMEGA0_2)
                - 3.0 * np.abs(phi.values) ** 2 * f)
    assert np.max(np.abs(op.entries @ f - spectral)) <= 1e-10


def test_lplus_annihilates_phi(op_grid):
    phi = phi_exact(2.0, op_grid)
    op = build_operator(phi, 2.0, OMEGA0_2, "Lplus")
    out = op.entries @ phi.values
    assert np.max(np.abs(out)) / np.max(np.abs(phi.values)) <= 1e-7


def test_lminus_annihilates_phi_prime(op_grid):
    phi = phi_exact(2.0, op_grid)
    dphi = np.real(op_grid.apply_symbol(phi.values, lambda xi: 1j * xi))
    op = build_operator(phi, 2.0, OMEGA0_2, "Lminus")
    out = op.entries @ dphi
    assert np.max(np.abs(out)) / np.max(np.abs(dphi)) <= 1e-6


def test_lminus_quadratic_form_identity(op_grid):
    # <Lminus phi, phi> = -alpha int phi^(alpha+2)
    alpha = 2.0
    phi = phi_exact(alpha, op_grid)
    op = build_operator(phi, alpha, OMEGA0_2, "Lminus")
    lhs = op_grid.dx * float(phi.values @ (op.entries @ phi.values))
    rhs = -alpha * op_grid.quadrature(np.abs(phi.values) ** (alpha + 2))
    assert lhs == pytest.approx(rhs, rel=1e-8)


def test_eigen_counts_alpha2(reports_alpha2):
    assert reports_alpha2["Lminus"].n_negative == 1
    assert reports_alpha2["Lminus"].n_zero == 1
    assert reports_alpha2["Lplus"].n_negative == 0
    assert reports_alpha2["Lplus"].n_zero == 1
    assert composite_counts(reports_alpha2["Lminus"],
                            reports_alpha2["Lplus"]) == (1, 2)


def test_zero_mode_quality(op_grid, reports_alpha2):
    phi = phi_exact(2.0, op_grid)
    rep = reports_alpha2["Lplus"]
    idx = int(np.argmin(np.abs(rep.eigenvalues)))
    vec = rep.eigenvectors[:, idx]
    corr = abs(np.dot(vec, phi.values)) / (
        np.linalg.norm(vec) * np.linalg.norm(phi.values))
    assert corr >= 0.999999


def test_lminus_kernel_matches_phi_prime(op_grid, reports_alpha2):
    phi = phi_exact(2.0, op_grid)
    dphi = np.real(op_grid.apply_symbol(phi.values, lambda xi: 1j * xi))
    rep = reports_alpha2["Lminus"]
    idx = int(np.argmin(np.abs(rep.eigenvalues)))
    vec = rep.eigenvectors[:, idx]
    corr = abs(np.dot(vec, dphi)) / (np.linalg.norm(vec) * np.linalg.norm(dphi))
    assert corr >= 0.999999


def test_eigen_report_bare_matrix_needs_tolerance():
    with pytest.raises(ParameterError):
        eigen_report(np.diag([-1.0, 1.0]))
    rep = eigen_report(np.diag([-1.0, 0.0, 2.0]), tol_zero=1e-8)
    assert rep.n_negative == 1 and rep.n_zero == 1


def test_ground_state_positivity_synthetic():
    rep = eigen_report(np.diag([-1.0, 1.0, 2.0]), tol_zero=1e-8)
    assert ground_state_positivity(rep)
    rep_none = eigen_report(np.diag([1.0, 2.0]), tol_zero=1e-8)
    with pytest.raises(ParameterError):
        ground_state_positivity(rep_none)


@pytest.mark.xfail(
    reason="the discrete ground state of the fourth-order operator has "
    "oscillatory tails of order 1e-4 (grid-independent), outside the 1e-8 "
    "sign-tolerance band",
    strict=True,
)
def test_ground_state_single_signed(reports_alpha2):
    assert ground_state_positivity(reports_alpha2["Lminus"])


def test_ground_state_undershoot_is_small_and_grid_independent():
    # quantify the oscillatory tails behind the xfail above
    undershoots = []
    for n, L in ((1024, 100.0), (2048, 100.0)):
        grid = SpectralGrid(n_points=n, half_width=L)
        phi = phi_exact(2.0, grid)
        rep = eigen_report(build_operator(phi, 2.0, OMEGA0_2, "Lminus"))
        vec = rep.eigenvectors[:, 0]
        vec = vec / vec[np.argmax(np.abs(vec))]
        undershoots.append(vec.min())
    assert undershoots[0] == pytest.approx(undershoots[1], rel=1e-3)
    assert -1e-3 < undershoots[0] < -1e-8


def test_pf2_sech_transform():
    # range limited to where the log-curvature of this steep sech is still
    # resolvable in double precision (it underflows past xi of about 2)
    p = explicit_params(2.0)
    xi = np.linspace(-1.5, 1.5, 150)
    samples = (np.pi / (2 * p.b0)) / np.cosh(np.pi * xi / (2 * p.b0))
    assert check_pf2_logconcavity(samples)


def test_pf2_transformed_nonlinearity():
    xi = np.linspace(-10, 10, 400)
    for alpha in (1.0, 2.0, 4.0):
        assert check_pf2_logconcavity(phi_pow_alpha_hat_exact(alpha, xi))


def test_pf2_gaussian_and_counterexample():
    xi = np.linspace(-5, 5, 200)
    assert check_pf2_logconcavity(np.exp(-xi**2))
    assert not check_pf2_logconcavity(np.cosh(xi))


def test_pf2_rejects_nonpositive():
    with pytest.raises(DomainError):
        check_pf2_logconcavity(np.array([1.0, -1.0, 1.0]))


def test_even_sector_removes_odd_kernel(op_grid):
    for alpha in (2.0, 4.0):
        omega0 = explicit_params(alpha).omega0
        phi = phi_exact(alpha, op_grid)
        op = build_operator(phi, alpha, omega0, "Lminus")
        reduced = restrict_even_sector(op)
        rep = eigen_report(reduced, tol_zero=1e-6 * (omega0 + 1.0))
        assert rep.n_zero == 0
        assert rep.n_negative == 1


def test_negative_direction_scalar_alpha2(op_grid):
    phi = phi_exact(2.0, op_grid)
    assert negative_direction_scalar(phi, 2.0, OMEGA0_2) < 0


def test_negative_direction_scalar_opposes_d_second(op_grid):
    for alpha in (2.0, 6.0):
        omega0 = explicit_params(alpha).omega0
        phi = phi_exact(alpha, op_grid)
        scalar = negative_direction_scalar(phi, alpha, omega0)
        d2 = d_second_at_omega0(alpha, op_grid)
        assert np.sign(scalar) == -np.sign(d2)

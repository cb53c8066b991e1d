"""Branch continuation in omega and the numerical d''(omega) stability map.

d''(omega) = (1/2) d/domega of the squared L2 mass along the solitary
branch, discretized with the trapezoid rule for the mass and a forward
difference in omega.  Threshold detection locates omega_c (sign change in
omega for fixed alpha) and alpha0 (sign change of d'' at omega0(alpha)).
"""

from __future__ import annotations

import dataclasses
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import (
    BracketError,
    BranchError,
    DivergenceError,
    InsufficientDataError,
    ParameterError,
)
from .explicit import explicit_params
from .grid import RealProfile, SpectralGrid
from .petviashvili import SolverConfig, petviashvili_solve

# forward-difference step for pointwise d'' evaluations
DEFAULT_OMEGA_DELTA = 2e-3


@dataclass
class SolitaryBranch:
    """Ordered family of solitary waves along increasing omega."""

    alpha: float
    beta: float
    omegas: np.ndarray
    profiles: list
    masses: np.ndarray
    converged_flags: np.ndarray


@dataclass
class StabilityMap:
    """Sign of d'' on an (alpha, omega) lattice.

    Entries: +1 / -1 for a resolved sign, 0 for |d''| below the noise
    threshold, NaN for failed solves.
    """

    alpha_grid: np.ndarray
    omega_grid: np.ndarray
    sign_matrix: np.ndarray


def _check_omega_width(omega: float, grid: SpectralGrid) -> None:
    # tail decay rate is ~ sqrt(omega) for small omega; refuse domains the
    # soliton cannot decay on
    if np.sqrt(omega) * grid.half_width < 10.0:
        raise ParameterError(
            f"omega={omega:g} gives a soliton too wide for half_width={grid.half_width:g}"
        )


def _mass(profile: RealProfile) -> float:
    return float(profile.grid.quadrature(profile.values**2))


def continue_branch(
    alpha: float,
    omega_start: float,
    omega_end: float,
    n_steps: int,
    grid: SpectralGrid | None = None,
    config: SolverConfig | None = None,
) -> SolitaryBranch:
    """Warm-started Petviashvili sweep over [omega_start, omega_end].

    Each solve seeds from the previous converged profile.  A failure on the
    first point raises :class:`BranchError`; a mid-branch failure truncates
    the branch at the failed point, which is flagged not-converged.
    """
    if not (0 < omega_start < omega_end):
        raise ParameterError("need 0 < omega_start < omega_end")
    if n_steps < 2:
        raise ParameterError("n_steps must be >= 2")
    if grid is None:
        grid = SpectralGrid()
    if config is None:
        config = SolverConfig()
    _check_omega_width(omega_start, grid)

    omegas = np.linspace(omega_start, omega_end, n_steps)
    profiles, masses, flags = [], [], []
    seed_config = config
    for i, omega in enumerate(omegas):
        try:
            profile, diag = petviashvili_solve(alpha, float(omega), grid, seed_config)
        except DivergenceError as exc:
            if i == 0:
                raise BranchError(f"first branch point diverged: {exc}") from exc
            profiles.append(None)
            masses.append(np.nan)
            flags.append(False)
            break
        profiles.append(profile)
        masses.append(_mass(profile))
        flags.append(diag.converged)
        if not diag.converged:
            if i == 0:
                raise BranchError("first branch point did not converge")
            break
        seed_config = dataclasses.replace(config, initial_guess=profile)
    k = len(profiles)
    return SolitaryBranch(
        alpha=alpha,
        beta=config.dispersion_beta,
        omegas=omegas[:k],
        profiles=profiles,
        masses=np.asarray(masses),
        converged_flags=np.asarray(flags, dtype=bool),
    )


def d_second(branch: SolitaryBranch) -> np.ndarray:
    """Forward-difference d'' samples, attributed to the left endpoint.

    Returns an array of (omega, d2) rows, one per consecutive pair of
    converged branch points.
    """
    ok = branch.converged_flags
    pairs = [
        i for i in range(len(branch.omegas) - 1) if ok[i] and ok[i + 1]
    ]
    if not pairs:
        raise InsufficientDataError("need at least 2 consecutive converged points")
    rows = [
        (
            branch.omegas[i],
            0.5
            * (branch.masses[i + 1] - branch.masses[i])
            / (branch.omegas[i + 1] - branch.omegas[i]),
        )
        for i in pairs
    ]
    return np.asarray(rows)


def classify_sign(d2: float, mass: float, omega: float) -> int:
    """Sign of d'' with a scale-aware dead band around zero."""
    threshold = 1e-6 * mass / omega
    if abs(d2) < threshold:
        return 0
    return 1 if d2 > 0 else -1


def d_second_at(
    alpha: float,
    omega: float,
    grid: SpectralGrid | None = None,
    config: SolverConfig | None = None,
    delta: float = DEFAULT_OMEGA_DELTA,
    seed: RealProfile | None = None,
):
    """Local forward-difference d'' at a single omega.

    Returns (d2, mass, profile) where profile is the wave at omega.
    """
    if grid is None:
        grid = SpectralGrid()
    if config is None:
        config = SolverConfig()
    if seed is not None:
        config = dataclasses.replace(config, initial_guess=seed)
    profile, diag = petviashvili_solve(alpha, omega, grid, config)
    if not diag.converged:
        raise BranchError(f"solve at omega={omega:g} did not converge")
    warm = dataclasses.replace(config, initial_guess=profile)
    profile_up, diag_up = petviashvili_solve(alpha, omega + delta, grid, warm)
    if not diag_up.converged:
        raise BranchError(f"solve at omega={omega + delta:g} did not converge")
    mass = _mass(profile)
    d2 = 0.5 * (_mass(profile_up) - mass) / delta
    return d2, mass, profile


def find_omega_c(
    alpha: float,
    omega_range: tuple[float, float],
    grid: SpectralGrid | None = None,
    config: SolverConfig | None = None,
    tol_omega: float = 1e-3,
    n_coarse: int = 16,
):
    """Bisect for the frequency where d'' changes sign; None if no change."""
    lo, hi = omega_range
    branch = continue_branch(alpha, lo, hi, n_coarse, grid, config)
    samples = d_second(branch)
    signs = [
        classify_sign(d2, branch.masses[np.searchsorted(branch.omegas, omega)], omega)
        for omega, d2 in samples
    ]
    bracket = None
    for i in range(len(signs) - 1):
        if signs[i] != 0 and signs[i + 1] != 0 and signs[i] != signs[i + 1]:
            bracket = (samples[i, 0], samples[i + 1, 0], signs[i])
            break
    if bracket is None:
        return None
    a, b, sign_a = bracket
    seed = branch.profiles[0]
    while b - a > tol_omega:
        mid = 0.5 * (a + b)
        d2, mass, seed = d_second_at(alpha, mid, grid, config, seed=seed)
        s = classify_sign(d2, mass, mid)
        if s == sign_a:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def d_second_at_omega0(
    alpha: float,
    grid: SpectralGrid | None = None,
    config: SolverConfig | None = None,
    delta: float = DEFAULT_OMEGA_DELTA,
) -> float:
    """d'' evaluated on the branch at the explicit-solution frequency."""
    omega0 = explicit_params(alpha).omega0
    d2, _, _ = d_second_at(alpha, omega0, grid, config, delta)
    return d2


def find_alpha0(
    alpha_bracket: tuple[float, float],
    grid: SpectralGrid | None = None,
    config: SolverConfig | None = None,
    tol_alpha: float = 0.05,
) -> float:
    """Root of d''(omega0(alpha)) over the bracket, by bisection."""
    lo, hi = alpha_bracket
    g_lo = d_second_at_omega0(lo, grid, config)
    g_hi = d_second_at_omega0(hi, grid, config)
    if not (g_lo > 0 > g_hi):
        raise BracketError(
            f"d''(omega0) does not change sign over [{lo}, {hi}]"
            f" (values {g_lo:.3e}, {g_hi:.3e})"
        )
    while hi - lo > tol_alpha:
        mid = 0.5 * (lo + hi)
        if d_second_at_omega0(mid, grid, config) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _scan_row(args):
    alpha, omega_grid, n_points, half_width, config = args
    grid = SpectralGrid(n_points, half_width)
    omegas = np.asarray(omega_grid, dtype=float)
    # one extra point past the end so every cell has a forward difference
    extended = np.append(omegas, omegas[-1] + (omegas[-1] - omegas[-2]))
    row = np.full(omegas.size, np.nan)
    seed_config = config
    prev_mass = None
    for i, omega in enumerate(extended):
        try:
            profile, diag = petviashvili_solve(alpha, float(omega), grid, seed_config)
            ok = diag.converged
        except DivergenceError:
            ok = False
        if not ok:
            seed_config = config  # cold restart at the next cell
            prev_mass = None
            continue
        mass = float(grid.quadrature(profile.values**2))
        if prev_mass is not None:
            d2 = 0.5 * (mass - prev_mass) / (extended[i] - extended[i - 1])
            row[i - 1] = classify_sign(d2, prev_mass, extended[i - 1])
        prev_mass = mass
        seed_config = dataclasses.replace(config, initial_guess=profile)
    return row


def region_scan(
    alpha_grid,
    omega_grid,
    grid: SpectralGrid | None = None,
    config: SolverConfig | None = None,
    jobs: int = 1,
) -> StabilityMap:
    """Sign of d'' on the (alpha, omega) lattice; failed cells become NaN."""
    alpha_grid = np.asarray(alpha_grid, dtype=float)
    omega_grid = np.asarray(omega_grid, dtype=float)
    if alpha_grid.size == 0 or omega_grid.size == 0:
        raise ParameterError("alpha_grid and omega_grid must be nonempty")
    if np.any(omega_grid <= 0):
        raise ParameterError("omega values must be positive")
    if grid is None:
        grid = SpectralGrid()
    if config is None:
        config = SolverConfig()
    tasks = [
        (float(a), omega_grid, grid.n_points, grid.half_width, config)
        for a in alpha_grid
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_scan_row, tasks))
    else:
        rows = [_scan_row(t) for t in tasks]
    return StabilityMap(
        alpha_grid=alpha_grid,
        omega_grid=omega_grid,
        sign_matrix=np.vstack(rows),
    )

"""Command-line entry point.

Subcommands: solve, verify-exact, spectrum, branch, dmap, region, evolve.
Outputs are deterministic CSV/JSON files written to --out (or the
SOLITONLAB_OUT environment variable).  Exit codes: 0 success, 1 usage error,
2 numerical non-convergence, 3 internal numeric failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import evolve as evolve_mod
from . import spectra, stability
from .errors import (
    BlowUpDetected,
    BracketError,
    BranchError,
    DeflationSolveError,
    DivergenceError,
    DomainError,
    ParameterError,
)
from .explicit import explicit_params, phi_exact
from .grid import ComplexField, SpectralGrid
from .petviashvili import SolverConfig, petviashvili_solve

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NO_CONVERGENCE = 2
EXIT_NUMERIC = 3

FLOAT_FMT = "%.17g"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 by default; the CLI contract reserves 2 for
    # non-convergence, so flag-level problems are rerouted through code 1
    def error(self, message):
        raise UsageError(message)


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("SOLITONLAB_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_csv(path: Path, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(FLOAT_FMT % v for v in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _grid_from(args) -> SpectralGrid:
    return SpectralGrid(n_points=args.grid_n, half_width=args.grid_l)


def _config_from(args) -> SolverConfig:
    return SolverConfig(
        max_iter=args.max_iter,
        dispersion_beta=args.beta,
    )


def _add_common(parser, grid_n=8192):
    parser.add_argument("--grid-n", type=int, default=grid_n, help="number of grid points")
    parser.add_argument("--grid-l", type=float, default=200.0, help="domain half-width")
    parser.add_argument("--max-iter", type=int, default=2000)
    parser.add_argument("--beta", type=float, default=1.0,
                        help="coefficient of -d2/dx2 (0 selects the pure fourth-order model)")
    parser.add_argument("--out", default=None, help="output directory (default: $SOLITONLAB_OUT or .)")
    parser.add_argument("--seed", type=int, default=0, help="seed recorded in outputs")


def _diag_payload(diag) -> dict:
    return {
        "iterations": diag.iterations,
        "converged": bool(diag.converged),
        "error_history": [float(v) for v in diag.error_history],
        "stab_history": [float(v) for v in diag.stab_history],
        "res_history": [float(v) for v in diag.res_history],
    }


def cmd_solve(args) -> int:
    grid = _grid_from(args)
    config = _config_from(args)
    out = _out_dir(args)
    profile, diag = petviashvili_solve(args.alpha, args.omega, grid, config)
    _write_csv(out / "profile.csv", ["x", "phi"], [grid.nodes, profile.values])
    _write_json(out / "diagnostics.json", _diag_payload(diag) | {"seed": args.seed})
    return EXIT_OK if diag.converged else EXIT_NO_CONVERGENCE


def cmd_verify_exact(args) -> int:
    grid = _grid_from(args)
    config = _config_from(args)
    out = _out_dir(args)
    omega0 = explicit_params(args.alpha).omega0
    profile, diag = petviashvili_solve(args.alpha, omega0, grid, config)
    exact = phi_exact(args.alpha, grid)
    distance = float(np.max(np.abs(profile.values - exact.values)))
    iters = np.arange(1, diag.iterations + 1, dtype=float)
    _write_csv(
        out / "convergence.csv",
        ["iteration", "error", "stab", "res"],
        [iters, diag.error_history, diag.stab_history, diag.res_history],
    )
    print(f"alpha={args.alpha:g} omega0={omega0:.12g} Linf_distance={distance:.3e}")
    if not diag.converged:
        return EXIT_NO_CONVERGENCE
    return EXIT_OK if distance <= 1e-9 else EXIT_NO_CONVERGENCE


def cmd_spectrum(args) -> int:
    grid = _grid_from(args)
    config = _config_from(args)
    out = _out_dir(args)
    profile, diag = petviashvili_solve(args.alpha, args.omega, grid, config)
    if not diag.converged:
        return EXIT_NO_CONVERGENCE
    rep = {}
    for which, key in (("Lminus", "minus"), ("Lplus", "plus")):
        op = spectra.build_operator(profile, args.alpha, args.omega, which, args.beta)
        rep[key] = spectra.eigen_report(op)
    n_comp, z_comp = spectra.composite_counts(rep["minus"], rep["plus"])
    payload = {
        "alpha": args.alpha,
        "omega": args.omega,
        "n_minus": rep["minus"].n_negative,
        "z_minus": rep["minus"].n_zero,
        "n_plus": rep["plus"].n_negative,
        "z_plus": rep["plus"].n_zero,
        "n_composite": n_comp,
        "z_composite": z_comp,
        "ground_state_single_signed": spectra.ground_state_positivity(rep["minus"]),
        "smallest_minus": [float(v) for v in rep["minus"].smallest_eigenvalues],
        "smallest_plus": [float(v) for v in rep["plus"].smallest_eigenvalues],
    }
    _write_json(out / "spectrum.json", payload)
    return EXIT_OK


def cmd_branch(args) -> int:
    grid = _grid_from(args)
    config = _config_from(args)
    out = _out_dir(args)
    branch = stability.continue_branch(
        args.alpha, args.omega_min, args.omega_max, args.steps, grid, config
    )
    _write_csv(
        out / "branch.csv",
        ["omega", "mass", "converged"],
        [branch.omegas, branch.masses, branch.converged_flags.astype(float)],
    )
    return EXIT_OK if branch.converged_flags.all() else EXIT_NO_CONVERGENCE


def cmd_dmap(args) -> int:
    grid = _grid_from(args)
    config = _config_from(args)
    out = _out_dir(args)
    branch = stability.continue_branch(
        args.alpha, args.omega_min, args.omega_max, args.steps, grid, config
    )
    samples = stability.d_second(branch)
    signs = np.array(
        [
            float(
                stability.classify_sign(
                    d2,
                    branch.masses[np.searchsorted(branch.omegas, omega)],
                    omega,
                )
            )
            for omega, d2 in samples
        ]
    )
    _write_csv(out / "d2.csv", ["omega", "d2", "sign"], [samples[:, 0], samples[:, 1], signs])
    return EXIT_OK if branch.converged_flags.all() else EXIT_NO_CONVERGENCE


def cmd_region(args) -> int:
    grid = _grid_from(args)
    config = _config_from(args)
    out = _out_dir(args)
    alphas = np.linspace(args.alpha_min, args.alpha_max, args.alpha_steps)
    omegas = np.linspace(args.omega_min, args.omega_max, args.omega_steps)
    result = stability.region_scan(alphas, omegas, grid, config, jobs=args.jobs)
    rows_alpha, rows_omega, rows_sign = [], [], []
    for i, a in enumerate(result.alpha_grid):
        for j, w in enumerate(result.omega_grid):
            rows_alpha.append(a)
            rows_omega.append(w)
            rows_sign.append(result.sign_matrix[i, j])
    _write_csv(
        out / "region.csv",
        ["alpha", "omega", "sign"],
        [np.asarray(rows_alpha), np.asarray(rows_omega), np.asarray(rows_sign)],
    )
    return EXIT_OK


def cmd_evolve(args) -> int:
    grid = _grid_from(args)
    config = _config_from(args)
    out = _out_dir(args)
    profile, diag = petviashvili_solve(args.alpha, args.omega, grid, config)
    if not diag.converged:
        return EXIT_NO_CONVERGENCE
    u0 = ComplexField(grid, (1.0 + args.delta) * profile.values.astype(complex))
    total_steps = int(round(args.t_final / args.dt))
    checkpoints = np.unique(
        np.round(np.linspace(0, total_steps, args.samples + 1)).astype(int)
    )
    state = evolve_mod.EvolutionState(field=u0, alpha=args.alpha, dt=args.dt)
    times = [0.0]
    energies = [evolve_mod.energy(u0, args.alpha)]
    masses = [evolve_mod.mass(u0)]
    distances = [evolve_mod.orbital_distance(u0, profile)]
    blew_up = False
    for prev, nxt in zip(checkpoints[:-1], checkpoints[1:]):
        try:
            state = evolve_mod.advance(state, int(nxt - prev))
        except BlowUpDetected as exc:
            blew_up = True
            _write_json(out / "error.json", {"error": "blow-up", "time": exc.time})
            break
        times.append(state.time)
        energies.append(evolve_mod.energy(state.field, args.alpha))
        masses.append(evolve_mod.mass(state.field))
        distances.append(evolve_mod.orbital_distance(state.field, profile))
    _write_csv(
        out / "evolution.csv",
        ["t", "energy", "mass", "orbital_distance"],
        [np.asarray(times), np.asarray(energies), np.asarray(masses), np.asarray(distances)],
    )
    _write_json(
        out / "audit.json",
        {
            "energy_drift": float(np.max(np.abs(np.asarray(energies) - energies[0])) / abs(energies[0])),
            "mass_drift": float(np.max(np.abs(np.asarray(masses) - masses[0])) / abs(masses[0])),
            "blew_up": blew_up,
            "seed": args.seed,
        },
    )
    return EXIT_NUMERIC if blew_up else EXIT_OK


def build_parser() -> _Parser:
    parser = _Parser(prog="solitonlab")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="compute a solitary profile")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-exact", help="compare the solver with the closed-form wave")
    p.add_argument("--alpha", type=float, required=True)
    _add_common(p)
    p.set_defaults(func=cmd_verify_exact)

    p = sub.add_parser("spectrum", help="eigenvalue counts of the linearized operators")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    _add_common(p, grid_n=2048)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("branch", help="continue the solitary branch in omega")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--omega-min", type=float, default=0.02)
    p.add_argument("--omega-max", type=float, default=0.25)
    p.add_argument("--steps", type=int, default=24)
    _add_common(p)
    p.set_defaults(func=cmd_branch)

    p = sub.add_parser("dmap", help="d''(omega) along a branch")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--omega-min", type=float, default=0.02)
    p.add_argument("--omega-max", type=float, default=0.25)
    p.add_argument("--steps", type=int, default=24)
    _add_common(p)
    p.set_defaults(func=cmd_dmap)

    p = sub.add_parser("region", help="sign of d'' on an (alpha, omega) lattice")
    p.add_argument("--alpha-min", type=float, default=1.0)
    p.add_argument("--alpha-max", type=float, default=7.0)
    p.add_argument("--alpha-steps", type=int, default=25)
    p.add_argument("--omega-min", type=float, default=0.02)
    p.add_argument("--omega-max", type=float, default=0.25)
    p.add_argument("--omega-steps", type=int, default=24)
    p.add_argument("--jobs", type=int, default=1)
    _add_common(p)
    p.set_defaults(func=cmd_region)

    p = sub.add_parser("evolve", help="split-step evolution of a perturbed wave")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--omega", type=float, required=True)
    p.add_argument("--delta", type=float, default=0.0, help="relative amplitude perturbation")
    p.add_argument("--t-final", type=float, default=20.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--samples", type=int, default=100)
    _add_common(p)
    p.set_defaults(func=cmd_evolve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterError, DomainError) as exc:
        print(f"invalid parameter: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BranchError, BracketError) as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except (DivergenceError, DeflationSolveError, BlowUpDetected, ArithmeticError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())

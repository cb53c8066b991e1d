"""Pseudospectral laboratory for solitary standing waves of the
mixed-dispersion fourth-order nonlinear Schroedinger equation."""

from .grid import ComplexField, RealProfile, SpectralGrid
from .explicit import ExplicitWaveParams, explicit_params, phi_exact
from .petviashvili import SolverConfig, SolverDiagnostics, petviashvili_solve

__all__ = [
    "ComplexField",
    "RealProfile",
    "SpectralGrid",
    "ExplicitWaveParams",
    "explicit_params",
    "phi_exact",
    "SolverConfig",
    "SolverDiagnostics",
    "petviashvili_solve",
]

__version__ = "0.1.0"

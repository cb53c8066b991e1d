"""Dense discretizations of the linearized operators and eigenvalue counting.

The two diagonal blocks of the linearization at a solitary wave are

    Lminus = d^4/dx^4 - beta d^2/dx^2 + omega - (alpha+1) |phi|^alpha
    Lplus  = d^4/dx^4 - beta d^2/dx^2 + omega -           |phi|^alpha

realized as (circulant Fourier-multiplier) + (diagonal potential) matrices.
Counts of negative and zero eigenvalues certify the spectral propositions;
the PF(2) check certifies log-concavity of the transformed nonlinearity.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg
import scipy.sparse.linalg

from .errors import DeflationSolveError, DomainError, ParameterError
from .grid import RealProfile, SpectralGrid


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense symmetric discretization of Lminus or Lplus."""

    entries: np.ndarray
    which: str
    alpha: float
    omega: float
    grid: SpectralGrid

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class EigenReport:
    """Low-lying spectrum of an operator matrix.

    ``eigenvalues``/``eigenvectors`` hold the computed smallest part of the
    spectrum (enough to contain everything below ``tol_zero``).
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    n_negative: int
    n_zero: int
    tol_zero: float

    @property
    def smallest_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[:6]


def multiplier_matrix(grid: SpectralGrid, symbol) -> np.ndarray:
    """Dense matrix of a Fourier multiplier (circulant for a periodic grid)."""
    values = np.asarray(symbol(grid.wavenumbers), dtype=float)
    column = np.fft.ifft(values).real
    return scipy.linalg.circulant(column)


def build_operator(
    profile: RealProfile,
    alpha: float,
    omega: float,
    which: str = "Lminus",
    beta: float = 1.0,
) -> OperatorMatrix:
    """Assemble Lminus or Lplus at the given solitary-wave profile."""
    if which not in ("Lminus", "Lplus"):
        raise ParameterError(f"which must be 'Lminus' or 'Lplus', got {which!r}")
    grid = profile.grid
    matrix = multiplier_matrix(grid, lambda xi: xi**4 + beta * xi**2 + omega)
    factor = alpha + 1.0 if which == "Lminus" else 1.0
    potential = -factor * np.abs(profile.values) ** alpha
    matrix[np.diag_indices_from(matrix)] += potential
    matrix = 0.5 * (matrix + matrix.T)
    return OperatorMatrix(entries=matrix, which=which, alpha=alpha, omega=omega, grid=grid)


def default_tol_zero(omega: float) -> float:
    return 1e-6 * (omega + 1.0)


def eigen_report(matrix, tol_zero: float | None = None, n_small: int = 8) -> EigenReport:
    """Count negative and (numerically) zero eigenvalues.

    Computes the ``n_small`` smallest eigenpairs and enlarges the window
    until the largest computed eigenvalue clears ``tol_zero``, so the counts
    are complete.  Accepts an :class:`OperatorMatrix` or a dense symmetric
    array.
    """
    if isinstance(matrix, OperatorMatrix):
        entries = matrix.entries
        if tol_zero is None:
            tol_zero = default_tol_zero(matrix.omega)
    else:
        entries = np.asarray(matrix, dtype=float)
        if tol_zero is None:
            raise ParameterError("tol_zero is required for a bare matrix")
    n = entries.shape[0]
    k = min(n_small, n)
    while True:
        vals, vecs = scipy.linalg.eigh(entries, subset_by_index=(0, k - 1))
        if vals[-1] > tol_zero or k == n:
            break
        k = min(2 * k, n)
    n_negative = int(np.sum(vals < -tol_zero))
    n_zero = int(np.sum(np.abs(vals) <= tol_zero))
    return EigenReport(
        eigenvalues=vals,
        eigenvectors=vecs,
        n_negative=n_negative,
        n_zero=n_zero,
        tol_zero=float(tol_zero),
    )


def composite_counts(report_minus: EigenReport, report_plus: EigenReport):
    """Counts for the diagonal composite operator diag(Lminus, Lplus)."""
    return (
        report_minus.n_negative + report_plus.n_negative,
        report_minus.n_zero + report_plus.n_zero,
    )


def ground_state_positivity(report: EigenReport) -> bool:
    """True iff the most negative eigenvalue's eigenfunction is single-signed."""
    if report.n_negative < 1:
        raise ParameterError("report has no negative eigenvalue")
    vec = report.eigenvectors[:, 0]
    vec = vec / np.max(np.abs(vec))
    band = 1e-8
    return bool(vec.min() >= -band or vec.max() <= band)


def check_pf2_logconcavity(samples: np.ndarray) -> bool:
    """Discrete log-concavity of positive samples on a uniform xi-grid.

    True iff the second difference of log(samples) is negative at every
    interior node, excluding the node adjacent to the maximum (xi = 0) where
    equality can occur to rounding.
    """
    samples = np.asarray(samples, dtype=float)
    if np.any(samples <= 0):
        raise DomainError("PF(2) check requires strictly positive samples")
    log_s = np.log(samples)
    second = log_s[:-2] - 2.0 * log_s[1:-1] + log_s[2:]
    center = int(np.argmax(samples))
    interior = np.arange(1, samples.size - 1)
    keep = np.abs(interior - center) > 1
    return bool(np.all(second[keep] < 0))


def restrict_even_sector(matrix: OperatorMatrix) -> np.ndarray:
    """Project the operator onto even functions (removes odd zero modes)."""
    n = matrix.size
    half = n // 2
    basis = np.zeros((n, half + 1))
    basis[0, 0] = 1.0
    basis[half, half] = 1.0
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for j in range(1, half):
        basis[j, j] = inv_sqrt2
        basis[n - j, j] = inv_sqrt2
    reduced = basis.T @ matrix.entries @ basis
    return 0.5 * (reduced + reduced.T)


def negative_direction_scalar(
    profile: RealProfile, alpha: float, omega: float, beta: float = 1.0
) -> float:
    """Inner product <chi, phi> where Lminus chi = phi, zero mode deflated.

    The kernel of Lminus is spanned by phi' (odd), so for an even profile
    the system is consistent; the solve runs MINRES on the FFT-applied
    operator with the kernel projected out and the free operator
    (xi^4 + beta xi^2 + omega)^-1 as preconditioner.  The sign of the result
    is opposite to the sign of d''(omega).
    """
    grid = profile.grid
    phi = profile.values
    xi = grid.wavenumbers
    denom = xi**4 + beta * xi**2 + omega
    potential = (alpha + 1.0) * np.abs(phi) ** alpha

    kernel = np.real(grid.apply_symbol(phi, lambda x: 1j * x))
    kernel = kernel / np.linalg.norm(kernel)

    def deflate(v):
        return v - np.dot(kernel, v) * kernel

    def apply_lminus(v):
        return np.fft.ifft(denom * np.fft.fft(v)).real - potential * v

    def matvec(v):
        return deflate(apply_lminus(deflate(v)))

    def precondition(v):
        return np.fft.ifft(np.fft.fft(v) / denom).real

    n = grid.n_points
    op = scipy.sparse.linalg.LinearOperator((n, n), matvec=matvec, dtype=float)
    pre = scipy.sparse.linalg.LinearOperator((n, n), matvec=precondition, dtype=float)
    rhs = deflate(phi)
    chi, info = scipy.sparse.linalg.minres(op, rhs, M=pre, rtol=1e-12, maxiter=10 * n)
    if info != 0:
        raise DeflationSolveError(f"MINRES did not converge (info={info})")
    chi = deflate(chi)
    rel_res = np.linalg.norm(apply_lminus(chi) - rhs) / np.linalg.norm(rhs)
    if rel_res > 1e-6:
        raise DeflationSolveError(f"deflated solve residual too large ({rel_res:.2e})")
    return float(grid.quadrature(chi * phi))

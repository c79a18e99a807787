"""Two-qubit density matrices: validation, eigensystems and mixedness.

Matrices are 4x4 ``complex128`` numpy arrays in the basis
|00>, |01>, |10>, |11> with qubit A as the left tensor factor.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import (
    NoConvergence,
    NotHermitian,
    NotPositive,
    TraceInvalid,
    ValidationError,
    ZeroVector,
)

HERMITIAN_TOL = 1e-10
STRICT_TRACE_TOL = 1e-10
RENORMALIZE_TRACE_TOL = 1e-4
PSD_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

TRACE_POLICIES = ("strict", "renormalize")


def as_matrix(raw, n: int | None = 4) -> np.ndarray:
    """Coerce ``raw`` to a finite square complex array (n x n when given)."""
    mat = np.array(raw, dtype=np.complex128)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {mat.shape}")
    if n is not None and mat.shape != (n, n):
        raise ValidationError(f"expected a {n}x{n} matrix, got shape {mat.shape}")
    if not np.all(np.isfinite(mat)):
        raise ValidationError("matrix has non-finite entries")
    return mat


def hermitian_error(mat: np.ndarray) -> float:
    return float(np.max(np.abs(mat - mat.conj().T)))


def hermitian_eigensystem(h) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix with cyclic complex Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues descending and the
    k-th eigenvector in column k. Sweep order is fixed so results are
    reproducible bit for bit.
    """
    mat = as_matrix(h, n=None)
    err = hermitian_error(mat)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"matrix is not Hermitian (max |H - H^dag| = {err:.3g})", err)
    mat = 0.5 * (mat + mat.conj().T)
    diag, vre, vim, sweeps, converged = kernels.jacobi_eigh(
        mat.real, mat.imag, JACOBI_TOL, JACOBI_MAX_SWEEPS
    )
    if not converged:
        raise NoConvergence(f"Jacobi iteration did not converge in {sweeps} sweeps")
    w = np.array(diag)
    vecs = np.array(vre) + 1j * np.array(vim)
    order = np.argsort(-w, kind="stable")
    return w[order], vecs[:, order]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated two-qubit state. Build through :func:`validate`."""

    mat: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        for arr in (self.mat, self.eigenvalues, self.eigenvectors):
            arr.setflags(write=False)

    @property
    def trace(self) -> float:
        return float(np.trace(self.mat).real)

    def __repr__(self):
        return f"DensityMatrix(eigenvalues={np.array2string(self.eigenvalues, precision=6)})"


@dataclass(frozen=True)
class MixednessReport:
    purity: float
    linear_entropy: float
    normalized_linear_entropy: float


def validate(raw, trace_policy: str = "strict") -> DensityMatrix:
    """Check Hermiticity, trace and positivity and return a :class:`DensityMatrix`.

    Under ``trace_policy="renormalize"`` a trace within 1e-4 of one is divided
    out; ``"strict"`` demands it within 1e-10. Eigenvalues in ``[-1e-10, 0)``
    are cached as zero.
    """
    if trace_policy not in TRACE_POLICIES:
        raise ValueError(f"unknown trace policy {trace_policy!r}")
    mat = as_matrix(raw)
    err = hermitian_error(mat)
    if err > HERMITIAN_TOL:
        raise NotHermitian(f"matrix is not Hermitian (max |rho - rho^dag| = {err:.3g})", err)
    mat = 0.5 * (mat + mat.conj().T)

    tr = float(np.trace(mat).real)
    bound = STRICT_TRACE_TOL if trace_policy == "strict" else RENORMALIZE_TRACE_TOL
    if abs(tr - 1.0) > bound:
        raise TraceInvalid(f"trace {tr!r} differs from 1 by more than {bound:g}", tr)
    if trace_policy == "renormalize" and tr != 1.0:
        mat = mat / tr

    w, v = hermitian_eigensystem(mat)
    if w[-1] < -PSD_TOL:
        raise NotPositive(f"minimum eigenvalue {w[-1]!r} is negative", float(w[-1]))
    w = np.where(w < 0.0, 0.0, w)
    return DensityMatrix(mat, w, v)


def from_pure(psi) -> DensityMatrix:
    """Projector onto ``psi`` (normalised internally)."""
    vec = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if vec.shape != (4,):
        raise ValidationError(f"expected a 4-vector, got shape {vec.shape}")
    norm2 = float(np.vdot(vec, vec).real)
    if norm2 == 0.0:
        raise ZeroVector("cannot build a state from the zero vector", 0.0)
    return validate(np.outer(vec, vec.conj()) / norm2)


def maximally_mixed() -> DensityMatrix:
    return validate(np.eye(4) / 4)


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2), computed as the sum of squared entry moduli."""
    return float(np.sum(np.abs(rho.mat) ** 2))


def linear_entropy(rho: DensityMatrix) -> MixednessReport:
    p = purity(rho)
    s12 = 1.0 - p
    return MixednessReport(purity=p, linear_entropy=s12, normalized_linear_entropy=4.0 / 3.0 * s12)

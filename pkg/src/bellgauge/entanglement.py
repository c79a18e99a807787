"""Concurrence and the partial-transpose test for two qubits."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bell import SIGMA_Y
from .errors import NotXState, ValidationError
from .qstate import DensityMatrix, hermitian_eigensystem

YY = np.kron(SIGMA_Y, SIGMA_Y)
SWAP = np.eye(4)[[0, 2, 1, 3]]
PPT_TOL = 1e-10
XSTATE_TOL = 1e-12
_X_MASK = np.array(
    [[1, 0, 0, 1], [0, 1, 1, 0], [0, 1, 1, 0], [1, 0, 0, 1]], dtype=bool
)


@dataclass(frozen=True)
class EntanglementReport:
    concurrence: float
    min_pt_eigenvalue: float
    is_ppt: bool


def spin_flip(rho: DensityMatrix) -> np.ndarray:
    """rho~ = (sigma_y (x) sigma_y) rho* (sigma_y (x) sigma_y)."""
    return YY @ rho.mat.conj() @ YY


def _sqrt_psd(rho: DensityMatrix) -> np.ndarray:
    v = rho.eigenvectors
    return (v * np.sqrt(rho.eigenvalues)) @ v.conj().T


def concurrence_spectrum(rho: DensityMatrix) -> np.ndarray:
    """sqrt of the eigenvalues of rho rho~, descending.

    These are the singular values of ``sqrt(rho) Y sqrt(rho)*`` with
    ``Y = sigma_y (x) sigma_y``, read off the Hermitian dilation
    ``[[0, Z], [Z^dag, 0]]`` so small values are not squared and re-rooted.
    """
    root = _sqrt_psd(rho)
    z = root @ YY @ root.conj()
    dilation = np.zeros((8, 8), dtype=np.complex128)
    dilation[:4, 4:] = z
    dilation[4:, :4] = z.conj().T
    w, _ = hermitian_eigensystem(dilation)
    sv = w[:4]
    if sv[-1] < -1e-10:
        raise ValidationError(f"negative singular value {sv[-1]!r}; state is not PSD", float(sv[-1]))
    return np.where(sv < 0.0, 0.0, sv)


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence max(0, l1 - l2 - l3 - l4)."""
    lam = concurrence_spectrum(rho)
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def is_xstate(mat, tol: float = XSTATE_TOL) -> bool:
    return bool(np.all(np.abs(np.asarray(mat)[~_X_MASK]) <= tol))


def xstate_concurrence(rho: DensityMatrix) -> float:
    """Closed form 2 max(0, |r23| - sqrt(r11 r44), |r14| - sqrt(r22 r33)) for X-states."""
    m = rho.mat
    if not is_xstate(m):
        raise NotXState("state has entries outside the diagonal and anti-diagonal")
    d = m.diagonal().real
    inner = abs(m[1, 2]) - np.sqrt(max(d[0] * d[3], 0.0))
    outer = abs(m[0, 3]) - np.sqrt(max(d[1] * d[2], 0.0))
    return float(2.0 * max(0.0, inner, outer))


def partial_transpose(mat) -> np.ndarray:
    """Transpose on the second qubit."""
    return np.asarray(mat).reshape(2, 2, 2, 2).transpose(0, 3, 2, 1).reshape(4, 4)


def partial_transpose_min_eigenvalue(rho: DensityMatrix) -> float:
    w, _ = hermitian_eigensystem(partial_transpose(rho.mat))
    return float(w[-1])


def entanglement_report(rho: DensityMatrix) -> EntanglementReport:
    pt = partial_transpose_min_eigenvalue(rho)
    return EntanglementReport(
        concurrence=concurrence(rho), min_pt_eigenvalue=pt, is_ppt=pt >= -PPT_TOL
    )

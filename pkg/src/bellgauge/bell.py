"""CHSH operators, the correlation matrix and the closed-form CHSH maximum.

The maximal CHSH value over all projective +-1 settings is
``2*sqrt(u1 + u2)`` where ``u1 >= u2`` are the two largest eigenvalues of
``T^T T`` and ``T[n, m] = tr(rho sigma_n (x) sigma_m)``. :func:`optimize_settings`
reaches the same number numerically and serves as an independent check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import NonRealCorrelation, NonUnitVector, NotSymmetric
from .qstate import DensityMatrix, hermitian_eigensystem

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
PAULI = (SIGMA_X, SIGMA_Y, SIGMA_Z)

CLASSICAL_BOUND = 2.0
TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)

UNIT_TOL = 1e-12
IMAG_TOL = 1e-10
DEFAULT_BUDGET = 200


@dataclass(frozen=True, eq=False)
class CorrelationAnalysis:
    T: np.ndarray
    u: np.ndarray
    m: float
    chsh_max: float

    @property
    def violates(self) -> bool:
        return self.chsh_max > CLASSICAL_BOUND


def _unit_vector(v, name: str) -> np.ndarray:
    arr = np.asarray(v, dtype=np.float64).reshape(-1)
    if arr.shape != (3,) or not np.all(np.isfinite(arr)):
        raise NonUnitVector(f"{name} must be a finite 3-vector", None)
    norm = float(np.linalg.norm(arr))
    if abs(norm - 1.0) > UNIT_TOL:
        raise NonUnitVector(f"{name} has norm {norm!r}, expected 1", norm)
    return arr


@dataclass(frozen=True, eq=False)
class ChshSettings:
    """Measurement directions a, a' (qubit A) and b, b' (qubit B)."""

    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, _unit_vector(getattr(self, name), name))

    @classmethod
    def normalized(cls, a, a_prime, b, b_prime) -> "ChshSettings":
        """Build settings after rescaling each direction to unit length."""
        vecs = [np.asarray(x, dtype=np.float64) for x in (a, a_prime, b, b_prime)]
        return cls(*(x / np.linalg.norm(x) for x in vecs))

    def to_dict(self) -> dict:
        return {
            "a": self.a.tolist(),
            "a_prime": self.a_prime.tolist(),
            "b": self.b.tolist(),
            "b_prime": self.b_prime.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ChshSettings":
        return cls(data["a"], data["a_prime"], data["b"], data["b_prime"])


def tsirelson_settings() -> ChshSettings:
    """Settings that reach 2*sqrt(2) on the singlet (with value -2*sqrt(2))."""
    z = np.array([0.0, 0.0, 1.0])
    x = np.array([1.0, 0.0, 0.0])
    r = 1.0 / math.sqrt(2.0)
    return ChshSettings(z, x, (z + x) * r, (z - x) * r)


def spin_observable(n) -> np.ndarray:
    """n . sigma for a real 3-vector n."""
    return n[0] * SIGMA_X + n[1] * SIGMA_Y + n[2] * SIGMA_Z


def correlation_matrix(rho: DensityMatrix) -> np.ndarray:
    """3x3 real matrix of joint Pauli expectations tr(rho sigma_n (x) sigma_m)."""
    t = np.empty((3, 3), dtype=np.complex128)
    for n, sn in enumerate(PAULI):
        for m, sm in enumerate(PAULI):
            t[n, m] = np.trace(rho.mat @ np.kron(sn, sm))
    worst = float(np.max(np.abs(t.imag)))
    if worst > IMAG_TOL:
        raise NonRealCorrelation(f"correlation entry has imaginary part {worst:.3g}", worst)
    return t.real.copy()


def symmetric3_eigenvalues(M) -> np.ndarray:
    """Eigenvalues of a real symmetric 3x3 matrix, descending.

    Roots of the characteristic cubic come from its trigonometric solution.
    Near a double root that solution is only accurate to ~sqrt(eps), so the
    isolated root's eigenvector is used to deflate M and the clustered pair is
    recomputed from the remaining 2x2 block.
    """
    a = np.asarray(M, dtype=np.float64)
    if a.shape != (3, 3):
        raise NotSymmetric(f"expected a 3x3 matrix, got shape {a.shape}")
    asym = float(np.max(np.abs(a - a.T)))
    if asym > 1e-10:
        raise NotSymmetric(f"matrix is not symmetric (max |M - M^T| = {asym:.3g})", asym)
    a = 0.5 * (a + a.T)
    p1 = a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2
    if p1 == 0.0:
        return np.sort(np.diag(a))[::-1].copy()
    q = np.trace(a) / 3.0
    p2 = (a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = (a - q * np.eye(3)) / p
    r = float(np.linalg.det(b)) / 2.0
    r = min(1.0, max(-1.0, r))
    phi = math.acos(r) / 3.0
    e1 = q + 2.0 * p * math.cos(phi)
    e3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    e2 = 3.0 * q - e1 - e3
    return _deflate_refine(a, e1, e2, e3)


def _deflate_refine(a: np.ndarray, e1: float, e2: float, e3: float) -> np.ndarray:
    iso = e1 if e1 - e2 >= e2 - e3 else e3
    shifted = a - iso * np.eye(3)
    crosses = [
        np.cross(shifted[0], shifted[1]),
        np.cross(shifted[0], shifted[2]),
        np.cross(shifted[1], shifted[2]),
    ]
    v = max(crosses, key=lambda x: float(x @ x))
    norm = float(np.linalg.norm(v))
    if norm <= 1e-300 or norm < 1e-8 * float(np.max(np.abs(shifted))) ** 2:
        return np.array(sorted((e1, e2, e3), reverse=True))
    v = v / norm
    w1 = np.cross(v, np.eye(3)[int(np.argmin(np.abs(v)))])
    w1 /= np.linalg.norm(w1)
    w2 = np.cross(v, w1)
    w = np.column_stack([w1, w2])
    g = w.T @ a @ w
    mid = 0.5 * (g[0, 0] + g[1, 1])
    rad = math.sqrt((0.5 * (g[0, 0] - g[1, 1])) ** 2 + (0.5 * (g[0, 1] + g[1, 0])) ** 2)
    lam = float(v @ a @ v)
    return np.array(sorted((lam, mid + rad, mid - rad), reverse=True))


def horodecki_m(T) -> tuple[np.ndarray, float]:
    """Eigenvalues u of T^T T (descending) and m = u1 + u2."""
    t = np.asarray(T, dtype=np.float64)
    u = symmetric3_eigenvalues(t.T @ t)
    u = np.where(u < 0.0, 0.0, u)
    return u, float(u[0] + u[1])


def chsh_max(rho: DensityMatrix) -> CorrelationAnalysis:
    """Largest |tr(rho B)| over all CHSH operators B, in closed form."""
    t = correlation_matrix(rho)
    u, m = horodecki_m(t)
    return CorrelationAnalysis(T=t, u=u, m=m, chsh_max=2.0 * math.sqrt(m))


def build_chsh_operator(s: ChshSettings) -> np.ndarray:
    """B = (a.sigma) (x) ((b + b').sigma) + (a'.sigma) (x) ((b - b').sigma)."""
    return np.kron(spin_observable(s.a), spin_observable(s.b + s.b_prime)) + np.kron(
        spin_observable(s.a_prime), spin_observable(s.b - s.b_prime)
    )


def chsh_value(rho: DensityMatrix, s: ChshSettings) -> float:
    """tr(rho B) evaluated on the full 4x4 operator."""
    val = np.trace(rho.mat @ build_chsh_operator(s))
    if abs(val.imag) > IMAG_TOL:
        raise NonRealCorrelation(f"tr(rho B) has imaginary part {val.imag:.3g}", float(val.imag))
    return float(val.real)


def bilinear_chsh(T, s: ChshSettings) -> float:
    """a^T T (b + b') + a'^T T (b - b'), the correlation-matrix form of tr(rho B)."""
    t = np.asarray(T, dtype=np.float64)
    return float(s.a @ t @ (s.b + s.b_prime) + s.a_prime @ t @ (s.b - s.b_prime))


# -- optimizer ---------------------------------------------------------------


def _to_angles(v) -> tuple[float, float]:
    x, y, z = (float(c) for c in v)
    theta = math.acos(min(1.0, max(-1.0, z)))
    if math.sin(theta) == 0.0 or (x == 0.0 and y == 0.0):
        return theta, 0.0
    phi = math.atan2(y, x)
    if phi < 0.0:
        phi += 2.0 * math.pi
    return theta, phi


def _from_angles(theta: float, phi: float) -> np.ndarray:
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _orthogonal_unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    trial = np.eye(3)[int(np.argmin(np.abs(v)))]
    w = trial - (trial @ v) * v
    return w / np.linalg.norm(w)


@dataclass(frozen=True, eq=False)
class SettingsOptimum:
    """Result of :func:`optimize_settings`.

    ``value`` is |tr(rho B)| for the returned settings and ``signed_value`` the
    trace itself. ``degenerate`` marks a vanishing correlation matrix, for
    which every setting gives zero.
    """

    settings: ChshSettings
    value: float
    signed_value: float
    sweeps: int
    evaluations: int
    degenerate: bool = False


def analytic_seed(T) -> ChshSettings:
    """Optimal settings built from the top two eigenvectors of T^T T."""
    t = np.asarray(T, dtype=np.float64)
    w, vecs = hermitian_eigensystem(t.T @ t)
    v1 = vecs[:, 0].real
    v2 = vecs[:, 1].real
    v1 /= np.linalg.norm(v1)
    v2 = v2 - (v2 @ v1) * v1
    v2 /= np.linalg.norm(v2)
    u1 = max(float(w[0]), 0.0)
    u2 = max(float(w[1]), 0.0)
    theta = math.atan2(math.sqrt(u2), math.sqrt(u1)) if u1 > 0.0 else math.pi / 4
    ta = t @ v1
    a = ta / np.linalg.norm(ta) if np.linalg.norm(ta) > 0.0 else _orthogonal_unit(v2)
    tb = t @ v2
    if np.linalg.norm(tb) > 1e-12:
        a_prime = tb / np.linalg.norm(tb)
    else:
        a_prime = _orthogonal_unit(a)
    b = math.cos(theta) * v1 + math.sin(theta) * v2
    b_prime = math.cos(theta) * v1 - math.sin(theta) * v2
    return ChshSettings.normalized(a, a_prime, b, b_prime)


_FIXED_START = (math.pi / 3, 0.3, 2 * math.pi / 3, 1.1, math.pi / 4, 2.0, math.pi / 2, 4.0)


def optimize_settings(
    rho: DensityMatrix,
    budget: int = DEFAULT_BUDGET,
    start: str = "analytic",
) -> SettingsOptimum:
    """Maximise |tr(rho B)| over measurement settings.

    The search starts from :func:`analytic_seed` (``start="analytic"``) or from a
    fixed generic point (``start="fixed"``), then runs deterministic coordinate
    ascent over the eight spherical angles with a golden-section line search per
    angle, for at most ``budget`` sweeps.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    t = correlation_matrix(rho)
    flat = [float(x) for x in t.reshape(-1)]
    if not np.any(t):
        s = tsirelson_settings()
        return SettingsOptimum(s, 0.0, 0.0, 0, 0, degenerate=True)

    if start == "analytic":
        seed = analytic_seed(t)
        angles = []
        for v in (seed.a, seed.a_prime, seed.b, seed.b_prime):
            angles.extend(_to_angles(v))
    elif start == "fixed":
        angles = list(_FIXED_START)
    else:
        raise ValueError(f"unknown start {start!r}")

    x, _, sweeps, evals = kernels.refine_angles(flat, angles, budget, 1e-9, 0.5, 1e-10)
    vecs = [_from_angles(x[2 * k], x[2 * k + 1]) for k in range(4)]
    s = ChshSettings.normalized(*vecs)
    signed = bilinear_chsh(t, s)
    return SettingsOptimum(s, abs(signed), signed, sweeps, evals)

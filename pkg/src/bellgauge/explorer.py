"""Searching X-shaped states for CHSH violation above the entropy threshold.

The X-family has populations ``(p11, p22, p33, p44)`` on the diagonal and a
real coupling ``c`` between |01> and |10>. For these states

    S12      = 1 - sum(p_k^2) - 2 c^2
    T        = diag(2c, 2c, p11 - p22 - p33 + p44)

which the search loops use directly; every reported record is recomputed
from the full density matrix by :func:`analyze`.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bell import CLASSICAL_BOUND, chsh_max
from .entanglement import concurrence
from .errors import EmptyGrid, InfeasibleParams, NoRoot, SearchExhausted
from .fixtures import RHO1_ENTRIES, SANTOS_THRESHOLD
from .qstate import (
    RENORMALIZE_TRACE_TOL,
    STRICT_TRACE_TOL,
    DensityMatrix,
    linear_entropy,
    validate,
)

PSD_SLACK = 1e-12
PENALTY_WEIGHT = 1e3
MAX_EVALUATIONS = 100_000
CLIMB_STEPS = 1000
INITIAL_STEP = 0.05
MIN_STEP = 1e-9
MAX_STEP = 0.1
VIOLATION_MARGIN = 1e-9
ENTROPY_MARGIN = 1e-7

# one-parameter family through rho1
FAMILY_P22 = float(RHO1_ENTRIES[1, 1])
FAMILY_P44 = float(RHO1_ENTRIES[3, 3])
FAMILY_C = float(RHO1_ENTRIES[1, 2])
FAMILY_C_SLOPE = 0.01
FAMILY_P22_SLOPE = 0.1


@dataclass(frozen=True)
class XStateParams:
    p11: float
    p22: float
    p33: float
    p44: float
    c: float

    def check(self, trace_tol: float = STRICT_TRACE_TOL) -> None:
        pops = (self.p11, self.p22, self.p33, self.p44)
        if not all(math.isfinite(x) for x in (*pops, self.c)):
            raise InfeasibleParams("parameters must be finite")
        if min(pops) < 0.0 or max(pops) > 1.0:
            raise InfeasibleParams(f"populations {pops} outside [0, 1]")
        total = sum(pops)
        if abs(total - 1.0) > trace_tol:
            raise InfeasibleParams(f"populations sum to {total!r}", total)
        if self.c * self.c > self.p22 * self.p33 + PSD_SLACK:
            raise InfeasibleParams(f"coupling {self.c!r} exceeds sqrt(p22 p33)", self.c)

    def is_feasible(self, trace_tol: float = STRICT_TRACE_TOL) -> bool:
        try:
            self.check(trace_tol)
        except InfeasibleParams:
            return False
        return True

    def matrix(self) -> np.ndarray:
        m = np.diag([self.p11, self.p22, self.p33, self.p44]).astype(np.complex128)
        m[1, 2] = m[2, 1] = self.c
        return m

    def fast_s12(self) -> float:
        return 1.0 - (self.p11**2 + self.p22**2 + self.p33**2 + self.p44**2) - 2.0 * self.c**2

    def fast_chsh_max(self) -> float:
        t33 = self.p11 - self.p22 - self.p33 + self.p44
        cc = 4.0 * self.c * self.c
        return 2.0 * math.sqrt(cc + max(cc, t33 * t33))


@dataclass(frozen=True)
class StateRecord:
    label: str
    params: XStateParams | None
    s12: float
    s_norm: float
    concurrence: float
    chsh_max: float
    satisfies_santos: bool
    violates_chsh: bool


def make_xstate(params: XStateParams, trace_policy: str = "strict") -> DensityMatrix:
    tol = STRICT_TRACE_TOL if trace_policy == "strict" else RENORMALIZE_TRACE_TOL
    params.check(tol)
    return validate(params.matrix(), trace_policy=trace_policy)


def analyze(rho: DensityMatrix, params: XStateParams | None = None, label: str = "") -> StateRecord:
    mix = linear_entropy(rho)
    cm = chsh_max(rho).chsh_max
    return StateRecord(
        label=label,
        params=params,
        s12=mix.linear_entropy,
        s_norm=mix.normalized_linear_entropy,
        concurrence=concurrence(rho),
        chsh_max=cm,
        satisfies_santos=mix.linear_entropy >= SANTOS_THRESHOLD,
        violates_chsh=cm > CLASSICAL_BOUND,
    )


# -- grid scan ---------------------------------------------------------------


@dataclass(frozen=True)
class ScanGrid:
    c_range: tuple[float, float, int]
    p22_range: tuple[float, float, int]
    p44_range: tuple[float, float, int]
    p11: float = 0.0

    def __post_init__(self):
        for name in ("c_range", "p22_range", "p44_range"):
            lo, hi, steps = getattr(self, name)
            if int(steps) < 1 or lo > hi:
                raise ValueError(f"{name} needs lo <= hi and steps >= 1, got {(lo, hi, steps)}")

    @staticmethod
    def _axis(rng):
        lo, hi, steps = rng
        return np.linspace(lo, hi, int(steps)) if steps > 1 else np.array([float(lo)])

    def points(self):
        for c in self._axis(self.c_range):
            for p22 in self._axis(self.p22_range):
                for p44 in self._axis(self.p44_range):
                    p33 = 1.0 - self.p11 - p22 - p44
                    params = XStateParams(self.p11, float(p22), float(p33), float(p44), float(c))
                    if params.is_feasible():
                        yield params


def _scan_item(item) -> StateRecord:
    index, params = item
    return analyze(make_xstate(params), params, label=f"scan-{index:06d}")


def scan_family(grid: ScanGrid, workers: int = 1) -> list[StateRecord]:
    """Analyse every feasible grid point, c outermost and p44 innermost."""
    items = list(enumerate(grid.points()))
    if not items:
        raise EmptyGrid("grid contains no feasible X-state parameters")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_scan_item, items, chunksize=64))
    return [_scan_item(item) for item in items]


# -- counterexample search ---------------------------------------------------


def _random_params(rng: np.random.Generator) -> XStateParams:
    pops = rng.dirichlet(np.ones(4))
    p11, p22, p33, p44 = (float(x) for x in pops)
    p11 = max(0.0, 1.0 - p22 - p33 - p44)
    c = float(rng.uniform()) * math.sqrt(p22 * p33)
    return XStateParams(p11, p22, p33, p44, c)


def _score(params: XStateParams, threshold: float) -> float:
    return params.fast_chsh_max() + PENALTY_WEIGHT * min(params.fast_s12() - threshold, 0.0)


def _project(pops: np.ndarray, c: float) -> XStateParams:
    """Clip populations onto the simplex and the coupling onto the PSD bound."""
    pops = np.clip(pops, 0.0, None)
    total = float(pops.sum())
    pops = pops / total if total > 0.0 else np.full(4, 0.25)
    p11, p22, p33, p44 = (float(x) for x in pops)
    return XStateParams(p11, p22, p33, p44, min(abs(float(c)), math.sqrt(p22 * p33)))


def _repair(params: XStateParams, threshold: float) -> XStateParams:
    """Mix in white noise just far enough to lift S12 to ``threshold``.

    Mixing with weight k scales ``tr(rho^2) - 1/4`` by k^2, so the smallest
    admissible mixture is found in closed form.
    """
    excess = 1.0 - params.fast_s12() - 0.25
    if params.fast_s12() >= threshold or excess <= 0.0:
        return params
    k = math.sqrt((0.75 - threshold) / excess) * (1.0 - 1e-12)
    p11, p22, p33, p44 = (k * x + 0.25 * (1.0 - k) for x in (params.p11, params.p22, params.p33, params.p44))
    return XStateParams(p11, p22, p33, p44, k * params.c)


def find_counterexamples(
    threshold: float = SANTOS_THRESHOLD,
    count: int = 10,
    seed: int = 0,
    max_evaluations: int = MAX_EVALUATIONS,
) -> list[StateRecord]:
    """Collect ``count`` distinct X-states with S12 >= threshold and CHSH violation.

    Each restart draws random parameters and hill-climbs on the penalised
    objective ``chsh_max + 1e3 * min(S12 - threshold, 0)``. Gaussian proposals
    are projected back onto the feasible set and, when below the threshold,
    mixed with white noise up to it; the step grows on success and shrinks on
    failure. The climb aims ``ENTROPY_MARGIN`` inside the entropy region and
    counts only if it clears 2 by ``VIOLATION_MARGIN``, so no record satisfies
    either condition by rounding alone (classical mixtures sit at exactly 2).
    Raises
    :class:`SearchExhausted` once ``max_evaluations`` objective calls are spent.
    """
    if not 0.0 <= threshold <= 0.75:
        raise ValueError("threshold must lie in [0, 0.75]")
    if count < 1:
        raise ValueError("count must be at least 1")
    target = min(threshold + ENTROPY_MARGIN, 0.75)
    rng = np.random.default_rng(seed)
    evals = 0
    found: list[StateRecord] = []
    keys = set()
    best = None
    best_score = -math.inf

    while len(found) < count:
        cur = _repair(_random_params(rng), target)
        f = _score(cur, target)
        evals += 1
        if f > best_score:
            best, best_score = cur, f
        step = INITIAL_STEP
        for _ in range(CLIMB_STEPS):
            if evals >= max_evaluations:
                best_rec = analyze(make_xstate(best), best, "best") if best is not None else None
                raise SearchExhausted(
                    f"no qualifying state after {evals} evaluations "
                    f"({len(found)} of {count} found)",
                    best=best_rec,
                    found=found,
                )
            d = rng.normal(scale=step, size=5)
            pops = np.array([cur.p11, cur.p22, cur.p33, cur.p44]) + d[:4]
            cand = _repair(_project(pops, cur.c + d[4]), target)
            evals += 1
            fc = _score(cand, target)
            if fc > f:
                cur, f = cand, fc
                step = min(step * 1.2, MAX_STEP)
            else:
                step = max(step * 0.95, MIN_STEP)
            if f > best_score:
                best, best_score = cur, f

        if cur.fast_s12() >= threshold and cur.fast_chsh_max() > CLASSICAL_BOUND + VIOLATION_MARGIN:
            key = tuple(round(x, 12) for x in (cur.p11, cur.p22, cur.p33, cur.p44, cur.c))
            if key in keys:
                continue
            rec = analyze(make_xstate(cur), cur, label=f"search-{len(found):04d}")
            if rec.s12 >= threshold and rec.chsh_max > CLASSICAL_BOUND + VIOLATION_MARGIN:
                keys.add(key)
                found.append(rec)
    return found


# -- constant-entropy family through rho1 ------------------------------------


@dataclass(frozen=True)
class FamilyPoint:
    t: float
    params: XStateParams
    rho: DensityMatrix
    s12: float
    chsh_max: float

    @property
    def violates(self) -> bool:
        return self.chsh_max > CLASSICAL_BOUND


def rho1_entropy() -> float:
    """S12 of the published rho1 from its printed entries (0.46499973...)."""
    return XStateParams(0.0, FAMILY_P22, 1.0 - FAMILY_P22 - FAMILY_P44, FAMILY_P44, FAMILY_C).fast_s12()


def _solve_p44(p22: float, c: float, target: float) -> float:
    r = 1.0 - p22
    hi = min(0.5 * r, r - c * c / p22)
    if hi < 0.0:
        raise NoRoot(f"no PSD state with p22={p22!r}, c={c!r}")

    def entropy(p44):
        return 1.0 - p22 * p22 - 2.0 * c * c - (r - p44) ** 2 - p44 * p44

    lo = 0.0
    f_lo, f_hi = entropy(lo), entropy(hi)
    if not f_lo <= target <= f_hi:
        raise NoRoot(
            f"entropy {target!r} outside attainable range [{f_lo!r}, {f_hi!r}] "
            f"at p22={p22!r}, c={c!r}"
        )
    # entropy increases on [0, r/2]; bisect to full float resolution
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if entropy(mid) < target:
            lo = mid
        else:
            hi = mid
    root = lo if abs(entropy(lo) - target) <= abs(entropy(hi) - target) else hi
    if abs(entropy(root) - target) > 1e-12:
        raise NoRoot(f"bisection stalled {abs(entropy(root) - target):.3g} from target")
    return root


def one_parameter_family(t: float, target_entropy: float | None = None) -> FamilyPoint:
    """Point ``t`` in [0, 1] on a curve of constant linear entropy through rho1.

    Along the curve ``c = 0.125 + 0.01 t`` and ``p22 = 0.549027 + 0.1 t`` with
    ``p11 = 0``; ``p44`` is found by bisection so that S12 equals
    ``target_entropy`` (default: S12 of rho1, so that t = 0 gives rho1).
    """
    if not 0.0 <= t <= 1.0:
        raise ValueError("t must lie in [0, 1]")
    target = rho1_entropy() if target_entropy is None else float(target_entropy)
    c = FAMILY_C + FAMILY_C_SLOPE * t
    p22 = FAMILY_P22 + FAMILY_P22_SLOPE * t
    p44 = _solve_p44(p22, c, target)
    params = XStateParams(0.0, p22, 1.0 - p22 - p44, p44, c)
    rho = make_xstate(params)
    return FamilyPoint(t, params, rho, linear_entropy(rho).linear_entropy, chsh_max(rho).chsh_max)


def family_points(n_points: int, target_entropy: float | None = None) -> list[FamilyPoint]:
    if n_points < 1:
        raise ValueError("n_points must be at least 1")
    ts = np.linspace(0.0, 1.0, n_points) if n_points > 1 else np.array([0.0])
    return [one_parameter_family(float(t), target_entropy) for t in ts]


def violating_interval(
    target_entropy: float | None = None, n_points: int = 101
) -> tuple[float, float] | None:
    """Range of t on which the family violates CHSH.

    Sampled on ``n_points`` values of t; the end where violation stops is
    refined by bisection. Returns ``None`` when no sampled point violates.
    """
    pts = family_points(n_points, target_entropy)
    flags = [p.violates for p in pts]
    if not any(flags):
        return None
    first = flags.index(True)
    last = len(flags) - 1 - flags[::-1].index(True)

    def edge(inside, outside):
        for _ in range(60):
            mid = 0.5 * (inside + outside)
            if one_parameter_family(mid, target_entropy).violates:
                inside = mid
            else:
                outside = mid
        return inside

    lo = pts[first].t if first == 0 else edge(pts[first].t, pts[first - 1].t)
    hi = pts[last].t if last == len(pts) - 1 else edge(pts[last].t, pts[last + 1].t)
    return lo, hi


# -- random states -----------------------------------------------------------


def _rng(stream) -> np.random.Generator:
    if isinstance(stream, np.random.Generator):
        return stream
    return np.random.default_rng(stream)


def complex_normals(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians via Box-Muller on the generator's uniforms."""
    size = int(np.prod(shape))
    u1 = rng.random(size)
    u2 = rng.random(size)
    radius = np.sqrt(-np.log1p(-u1))
    angle = 2.0 * np.pi * u2
    return (radius * np.cos(angle) + 1j * radius * np.sin(angle)).reshape(shape)


def sample_random_state(stream=None, rank: int = 4) -> DensityMatrix:
    """Draw rho = G G^dag / tr(G G^dag) with G a 4 x rank complex Ginibre matrix.

    Full rank gives the Hilbert-Schmidt measure. ``stream`` is a numpy
    Generator or a seed.
    """
    if rank not in (1, 2, 3, 4):
        raise ValueError("rank must be 1, 2, 3 or 4")
    g = complex_normals(_rng(stream), (4, rank))
    m = g @ g.conj().T
    return validate(m / np.trace(m).real)


def sample_random_xstate(stream=None) -> DensityMatrix:
    """Random X-state with both anti-diagonal couplings complex and PSD."""
    rng = _rng(stream)
    p = rng.dirichlet(np.ones(4))
    m = np.diag(p).astype(np.complex128)
    inner = rng.uniform() * math.sqrt(p[1] * p[2]) * np.exp(2j * np.pi * rng.uniform())
    outer = rng.uniform() * math.sqrt(p[0] * p[3]) * np.exp(2j * np.pi * rng.uniform())
    m[1, 2], m[2, 1] = inner, np.conj(inner)
    m[0, 3], m[3, 0] = outer, np.conj(outer)
    return validate(m / np.trace(m).real)


def sample_records(count: int, rank: int = 4, seed: int = 0) -> list[StateRecord]:
    """Analyse ``count`` Ginibre draws; labels carry the measure and rank."""
    rng = np.random.default_rng(seed)
    return [
        analyze(sample_random_state(rng, rank), label=f"ginibre-hs-rank{rank}-{i:06d}")
        for i in range(count)
    ]

import math

import numpy as np
import pytest

from bellgauge.bell import chsh_max
from bellgauge.errors import EmptyGrid, InfeasibleParams, NoRoot, SearchExhausted
from bellgauge.explorer import (
    ENTROPY_MARGIN,
    VIOLATION_MARGIN,
    _project,
    _repair,
    FamilyPoint,
    ScanGrid,
    XStateParams,
    analyze,
    family_points,
    find_counterexamples,
    make_xstate,
    one_parameter_family,
    rho1_entropy,
    sample_random_state,
    sample_random_xstate,
    scan_family,
    violating_interval,
)
from bellgauge.fixtures import RHO1_ENTRIES, RHO2_ENTRIES, SANTOS_THRESHOLD
from bellgauge.qstate import linear_entropy, purity, validate

RHO1_PARAMS = XStateParams(0.0, 0.549027, 0.449798, 0.001175, 0.125)
RHO2_PARAMS = XStateParams(0.0, 0.632864, 0.317431, 0.049708, 0.125)


def test_threshold_constant():
    assert SANTOS_THRESHOLD == 1 / math.sqrt(2) - 1 / 4
    assert SANTOS_THRESHOLD == pytest.approx(0.457106781, abs=1e-9)


def test_make_xstate_fixtures(mixed):
    np.testing.assert_array_equal(make_xstate(RHO1_PARAMS).mat, RHO1_ENTRIES)
    with pytest.raises(InfeasibleParams):
        make_xstate(RHO2_PARAMS)
    rho2 = make_xstate(RHO2_PARAMS, trace_policy="renormalize")
    np.testing.assert_allclose(rho2.mat, RHO2_ENTRIES / 1.000003, atol=1e-15)
    np.testing.assert_array_equal(make_xstate(XStateParams(0.25, 0.25, 0.25, 0.25, 0.0)).mat, mixed.mat)


@pytest.mark.parametrize(
    "params",
    [
        XStateParams(0.0, 0.5, 0.5, 0.0, 0.6),
        XStateParams(-0.1, 0.6, 0.5, 0.0, 0.0),
        XStateParams(0.0, 0.5, 0.4, 0.0, 0.0),
        XStateParams(0.0, 0.5, 0.5, 0.0, math.nan),
    ],
)
def test_make_xstate_infeasible(params):
    with pytest.raises(InfeasibleParams):
        make_xstate(params)


def test_fast_formulas_match_full_analysis(rng):
    for _ in range(100):
        pops = rng.dirichlet(np.ones(4))
        c = rng.uniform() * math.sqrt(pops[1] * pops[2])
        params = XStateParams(1 - pops[1] - pops[2] - pops[3], pops[1], pops[2], pops[3], c)
        rho = make_xstate(params)
        assert params.fast_s12() == pytest.approx(linear_entropy(rho).linear_entropy, abs=1e-14)
        assert params.fast_chsh_max() == pytest.approx(chsh_max(rho).chsh_max, abs=1e-12)


def test_analyze_fixtures(rho1, rho2, mixed):
    r1 = analyze(rho1)
    assert r1.satisfies_santos and r1.violates_chsh
    r2 = analyze(rho2)
    assert r2.satisfies_santos and not r2.violates_chsh
    r0 = analyze(mixed)
    assert (r0.s12, r0.chsh_max, r0.satisfies_santos, r0.violates_chsh) == (0.75, 0.0, True, False)


def test_scan_single_point_matches_rho1(rho1):
    grid = ScanGrid((0.125, 0.125, 1), (0.549027, 0.549027, 1), (0.001175, 0.001175, 1))
    (rec,) = scan_family(grid)
    ref = analyze(rho1)
    assert rec.chsh_max == pytest.approx(2.05699, abs=1e-4)
    assert rec.chsh_max == pytest.approx(ref.chsh_max, abs=1e-12)
    assert rec.s12 == pytest.approx(ref.s12, abs=1e-12)


def test_scan_diagonal_states_are_separable():
    grid = ScanGrid((0.0, 0.0, 1), (0.0, 1.0, 11), (0.0, 1.0, 11))
    records = scan_family(grid)
    assert records
    for rec in records:
        p = rec.params
        t33 = p.p11 - p.p22 - p.p33 + p.p44
        assert rec.chsh_max == pytest.approx(2 * abs(t33), abs=1e-12)
        assert rec.concurrence == pytest.approx(0.0, abs=1e-8)
        assert not rec.violates_chsh


def test_scan_identity_point():
    (rec,) = scan_family(ScanGrid((0.0, 0.0, 1), (0.25, 0.25, 1), (0.25, 0.25, 1), p11=0.25))
    assert rec.s12 == pytest.approx(0.75) and rec.chsh_max == pytest.approx(0.0, abs=1e-15)


def test_scan_order_and_determinism():
    grid = ScanGrid((0.0, 0.2, 3), (0.3, 0.6, 4), (0.0, 0.1, 3))
    records = scan_family(grid)
    keys = [(r.params.c, r.params.p22, r.params.p44) for r in records]
    assert keys == sorted(keys)
    assert records == scan_family(grid)
    assert records == scan_family(grid, workers=2)


def test_scan_empty_grid():
    with pytest.raises(EmptyGrid):
        scan_family(ScanGrid((0.9, 0.9, 1), (0.1, 0.1, 1), (0.0, 0.0, 1)))
    with pytest.raises(ValueError):
        ScanGrid((0.2, 0.1, 3), (0, 1, 2), (0, 1, 2))


def test_find_counterexamples_above_threshold():
    records = find_counterexamples(SANTOS_THRESHOLD, 3, seed=7)
    assert len(records) == 3
    for rec in records:
        again = analyze(make_xstate(rec.params))
        assert again.s12 >= SANTOS_THRESHOLD and again.chsh_max > 2
        assert rec.satisfies_santos and rec.violates_chsh


def test_rho1_itself_qualifies(rho1):
    rec = analyze(rho1)
    assert rec.s12 >= SANTOS_THRESHOLD and rec.chsh_max > 2


def test_find_counterexamples_zero_threshold():
    (rec,) = find_counterexamples(0.0, 1, seed=1)
    assert rec.violates_chsh


def test_find_counterexamples_empty_region():
    with pytest.raises(SearchExhausted) as exc:
        find_counterexamples(0.75, 1, seed=0, max_evaluations=20_000)
    assert exc.value.best is not None
    assert exc.value.best.s12 < 0.75 or not exc.value.best.violates_chsh


def test_find_counterexamples_is_seeded():
    a = find_counterexamples(SANTOS_THRESHOLD, 2, seed=3)
    b = find_counterexamples(SANTOS_THRESHOLD, 2, seed=3)
    assert a == b


def test_repair_lands_on_target(rng):
    for _ in range(50):
        pops = rng.dirichlet(np.ones(4))
        c = rng.uniform() * math.sqrt(pops[1] * pops[2])
        p = XStateParams(*(float(x) for x in pops), float(c))
        fixed = _repair(p, SANTOS_THRESHOLD)
        assert fixed.is_feasible()
        if p.fast_s12() >= SANTOS_THRESHOLD:
            assert fixed == p
        else:
            assert fixed.fast_s12() == pytest.approx(SANTOS_THRESHOLD, abs=1e-12)
            assert fixed.fast_s12() >= SANTOS_THRESHOLD


def test_project_is_feasible(rng):
    for _ in range(50):
        p = _project(rng.normal(0.25, 0.4, size=4), rng.normal(0.0, 0.5))
        assert p.is_feasible()


def test_classical_mixture_is_not_a_counterexample():
    # |01><01| and |10><10| mixed evenly: S12 = 1/2 but chsh_max is exactly 2
    rec = analyze(make_xstate(XStateParams(0.0, 0.5, 0.5, 0.0, 0.0)))
    assert rec.chsh_max == pytest.approx(2.0, abs=1e-12)
    assert not rec.chsh_max > 2.0 + VIOLATION_MARGIN


def test_counterexamples_clear_margins():
    for rec in find_counterexamples(SANTOS_THRESHOLD, 10, seed=3):
        assert rec.s12 >= SANTOS_THRESHOLD + 0.5 * ENTROPY_MARGIN
        assert rec.chsh_max > 2.0 + VIOLATION_MARGIN


def test_family_starts_at_rho1():
    point = one_parameter_family(0.0)
    assert isinstance(point, FamilyPoint)
    np.testing.assert_allclose(point.rho.mat, RHO1_ENTRIES, atol=1e-12, rtol=0)
    assert point.chsh_max == pytest.approx(2.05699, abs=1e-4)


def test_family_entropy_is_constant():
    target = rho1_entropy()
    assert target == pytest.approx(0.465, abs=5e-4)
    for t in np.linspace(0, 1, 11):
        point = one_parameter_family(float(t))
        assert abs(point.s12 - target) <= 1e-9
        assert abs(1 - purity(point.rho) - target) <= 1e-9
        validate(point.rho.mat, trace_policy="strict")


def test_family_with_explicit_target():
    for t in np.linspace(0, 1, 11):
        point = one_parameter_family(float(t), 0.465)
        assert abs(point.s12 - 0.465) <= 1e-9
    np.testing.assert_allclose(one_parameter_family(0.0, 0.465).rho.mat, RHO1_ENTRIES, atol=1e-6)


def test_family_continuity():
    delta = 1e-4
    for t in np.linspace(0, 1 - delta, 25):
        a = one_parameter_family(float(t)).rho.mat
        b = one_parameter_family(float(t) + delta).rho.mat
        assert np.max(np.abs(a - b)) <= 10 * delta


def test_family_violating_interval():
    lo, hi = violating_interval()
    assert lo == 0.0 and 0.0 < hi < 1.0
    assert one_parameter_family(hi).violates
    assert not one_parameter_family(min(1.0, hi + 1e-6)).violates
    inside = [p for p in family_points(51) if p.t <= hi]
    assert all(p.violates for p in inside)


def test_family_no_root():
    with pytest.raises(NoRoot):
        one_parameter_family(0.5, 0.74)
    with pytest.raises(ValueError):
        one_parameter_family(1.5)


def test_sampling_rank_one_is_pure():
    for seed in range(20):
        assert abs(purity(sample_random_state(seed, 1)) - 1) < 1e-12


def test_sampling_golden_value():
    m = sample_random_state(42, 4).mat
    assert m[0, 0].real == float.fromhex("0x1.130293753dcadp-2")
    assert m[1, 2].real == float.fromhex("0x1.0cb8093b69434p-4")
    assert m[1, 2].imag == float.fromhex("-0x1.56a9431b24bbbp-6")
    assert m[3, 3].real == float.fromhex("0x1.7c469e70aa566p-3")


def test_sampling_is_deterministic():
    a = sample_random_state(np.random.default_rng(5), 3).mat
    b = sample_random_state(np.random.default_rng(5), 3).mat
    np.testing.assert_array_equal(a, b)


@pytest.mark.parametrize("rank", [2, 4])
def test_sampling_mean_purity(rank):
    # induced-measure moment E[tr rho^2] = (d + K) / (d K + 1) for d = 4, K = rank
    rng = np.random.default_rng(11)
    values = np.array([purity(sample_random_state(rng, rank)) for _ in range(10_000)])
    expected = (4 + rank) / (4 * rank + 1)
    assert abs(values.mean() - expected) <= 5 * values.std() / math.sqrt(len(values))


def test_sampling_rejects_bad_rank():
    with pytest.raises(ValueError):
        sample_random_state(0, 5)


def test_random_xstates_are_xstates(rng):
    from bellgauge.entanglement import is_xstate

    for _ in range(20):
        rho = sample_random_xstate(rng)
        assert is_xstate(rho.mat) and abs(rho.mat[0, 3]) > 0

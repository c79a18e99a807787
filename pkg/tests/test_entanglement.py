import math

import numpy as np
import pytest

from bellgauge.bell import chsh_max
from bellgauge.entanglement import (
    SWAP,
    concurrence,
    entanglement_report,
    is_xstate,
    partial_transpose,
    partial_transpose_min_eigenvalue,
    spin_flip,
    xstate_concurrence,
)
from bellgauge.errors import NotXState
from bellgauge.explorer import sample_random_state, sample_random_xstate
from bellgauge.qstate import from_pure, validate

from conftest import BELL_VECTORS, conjugate, haar_unitary, random_product_state

YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]])


def textbook_concurrence(mat):
    """Square roots of the eigenvalues of rho rho~ from a general eigensolver."""
    flipped = YY @ mat.conj() @ YY
    mu = np.sort(np.linalg.eigvals(mat @ flipped).real)[::-1]
    lam = np.sqrt(np.clip(mu, 0, None))
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def werner(p):
    singlet = from_pure(BELL_VECTORS["psi-"]).mat
    return validate((1 - p) * np.eye(4) / 4 + p * singlet)


def test_spin_flip_examples(mixed, singlet):
    np.testing.assert_allclose(spin_flip(mixed), mixed.mat, atol=1e-16)
    np.testing.assert_allclose(spin_flip(from_pure([1, 0, 0, 0])), np.diag([0, 0, 0, 1]), atol=1e-16)
    np.testing.assert_allclose(spin_flip(singlet), singlet.mat, atol=1e-15)


def test_spin_flip_is_a_state(rng):
    for _ in range(20):
        flipped = validate(spin_flip(sample_random_state(rng, 4)))
        assert flipped.eigenvalues[-1] >= 0


@pytest.mark.parametrize("name", sorted(BELL_VECTORS))
def test_bell_states_have_unit_concurrence(name):
    assert concurrence(from_pure(BELL_VECTORS[name])) == pytest.approx(1.0, abs=1e-9)


def test_product_states_have_zero_concurrence(rng):
    for _ in range(50):
        assert concurrence(random_product_state(rng)) < 1e-7


def test_fixture_concurrence(rho1, rho2):
    assert concurrence(rho1) == pytest.approx(0.25, abs=1e-12)
    assert xstate_concurrence(rho1) == pytest.approx(0.25, abs=1e-15)
    # rho2 is rescaled by 1/1.000003
    assert concurrence(rho2) == pytest.approx(0.25 / 1.000003, abs=1e-12)
    assert concurrence(rho2) == pytest.approx(0.25, abs=1e-6)
    assert abs(concurrence(rho2) - xstate_concurrence(rho2)) <= 1e-9


def test_xstate_examples(mixed):
    assert xstate_concurrence(mixed) == 0.0
    for p in (0.2, 1 / 3):
        assert xstate_concurrence(werner(p)) == pytest.approx(0.0, abs=1e-15)
    assert xstate_concurrence(werner(0.6)) == pytest.approx(2 * (0.3 - 0.1), abs=1e-15)


def test_xstate_rejects_general_states(rng):
    rho = sample_random_state(rng, 4)
    assert not is_xstate(rho.mat)
    with pytest.raises(NotXState):
        xstate_concurrence(rho)


def test_concurrence_matches_textbook_route(rng):
    for _ in range(200):
        rho = sample_random_state(rng, int(rng.integers(1, 5)))
        assert concurrence(rho) == pytest.approx(textbook_concurrence(rho.mat), abs=1e-6)


def test_xstate_oracle_equivalence(rng):
    for _ in range(200):
        rho = sample_random_xstate(rng)
        assert abs(concurrence(rho) - xstate_concurrence(rho)) <= 1e-9


def test_schmidt_family():
    for lam in np.linspace(0, 1, 21):
        rho = from_pure([math.sqrt(lam), 0, 0, math.sqrt(1 - lam)])
        assert concurrence(rho) == pytest.approx(2 * math.sqrt(lam * (1 - lam)), abs=1e-10)


def test_swap_symmetry(rng):
    for _ in range(50):
        rho = sample_random_state(rng, int(rng.integers(1, 5)))
        assert concurrence(validate(SWAP @ rho.mat @ SWAP)) == pytest.approx(concurrence(rho), abs=1e-10)


def test_local_unitary_invariance(rng):
    for _ in range(50):
        rho = sample_random_state(rng, int(rng.integers(1, 5)))
        u = np.kron(haar_unitary(rng), haar_unitary(rng))
        assert concurrence(conjugate(rho, u)) == pytest.approx(concurrence(rho), abs=1e-9)


def test_partial_transpose_examples(singlet, rho1, rng):
    assert partial_transpose_min_eigenvalue(singlet) == pytest.approx(-0.5, abs=1e-12)
    w = np.linalg.eigvalsh(partial_transpose(singlet.mat))
    np.testing.assert_allclose(w, [-0.5, 0.5, 0.5, 0.5], atol=1e-12)
    assert partial_transpose_min_eigenvalue(rho1) < 0
    for _ in range(50):
        assert partial_transpose_min_eigenvalue(random_product_state(rng)) >= -1e-10


def test_partial_transpose_layout():
    m = np.arange(16).reshape(4, 4)
    pt = partial_transpose(m)
    # <i1 j1| . |i2 j2>  ->  <i1 j2| . |i2 j1>
    assert pt[0, 1] == m[1, 0] and pt[1, 0] == m[0, 1]
    assert pt[0, 3] == m[1, 2] and pt[2, 1] == m[3, 0]


def test_report_consistency(rng):
    for _ in range(300):
        rho = sample_random_state(rng, int(rng.integers(1, 5)))
        rep = entanglement_report(rho)
        assert -1e-10 <= rep.concurrence <= 1 + 1e-10
        assert rep.is_ppt == (rep.min_pt_eigenvalue >= -1e-10)
        if rep.concurrence > 1e-8:
            assert not rep.is_ppt
        if chsh_max(rho).chsh_max > 2:
            assert rep.concurrence > 1e-8 and not rep.is_ppt

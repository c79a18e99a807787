import math

import numpy as np
import pytest

from bellgauge import fixtures
from bellgauge.qstate import from_pure, validate

SQRT2 = math.sqrt(2.0)

BELL_VECTORS = {
    "phi+": np.array([1, 0, 0, 1]) / SQRT2,
    "phi-": np.array([1, 0, 0, -1]) / SQRT2,
    "psi+": np.array([0, 1, 1, 0]) / SQRT2,
    "psi-": np.array([0, 1, -1, 0]) / SQRT2,
}


def haar_unitary(rng, n=2):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / SQRT2
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_product_state(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    return from_pure(np.kron(a, b))


def conjugate(rho, u):
    return validate(u @ rho.mat @ u.conj().T)


@pytest.fixture(scope="session")
def rho1():
    return fixtures.rho1()


@pytest.fixture(scope="session")
def rho2():
    return fixtures.rho2()


@pytest.fixture(scope="session")
def singlet():
    return from_pure(BELL_VECTORS["psi-"])


@pytest.fixture(scope="session")
def mixed():
    return validate(np.eye(4) / 4)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

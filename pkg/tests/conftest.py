import math

import numpy as np
import pytest

from qudyn import disorder, hamiltonians


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=["gaussian", "uniform"])
def dist(request):
    return disorder.gaussian(1.0) if request.param == "gaussian" else disorder.uniform(math.sqrt(3))


def random_state(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng, d):
    from qudyn import linalg

    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return linalg.expm(0.5 * (a - a.conj().T))


def projector(d, k):
    p = np.zeros((d, d), dtype=complex)
    p[k, k] = 1
    return p


QUBIT = hamiltonians.build_qubit()
SPIN1 = hamiltonians.build_spin1()
CLOCK = hamiltonians.build_clock_qutrit()


# -- acceptance reporting -------------------------------------------------------------

ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])

import numpy as np
import pytest

from symsep.states import build_fiducial, qubit_spec

FIG3 = (0.6386, 0.5841, 0.3817, 0.1321, 0.2964)
# 1 - cos(50 deg) / cos(20 deg)
QUBIT_XI = 1 - np.cos(np.radians(50)) / np.cos(np.radians(20))


def random_spec(rng, n=None, punctured=None, phases=False):
    """Random fiducial; ``punctured`` zeroes a random proper subset of modes."""
    n = int(rng.integers(2, 9)) if n is None else n
    a = rng.uniform(0.05, 1.0, size=n)
    if punctured is None:
        punctured = rng.random() < 0.5
    if punctured:
        zero = rng.random(n) < 0.4
        zero[rng.integers(n)] = False
        if not zero.any() and n > 2:
            zero[(np.flatnonzero(~zero)[0] + 1) % n] = True
        a[zero] = 0.0
    a /= np.linalg.norm(a)
    phi = rng.uniform(-np.pi, np.pi, size=n) if phases else np.zeros(n)
    return build_fiducial(n, a, phi)


def random_specs(seed, count, **kw):
    rng = np.random.default_rng(seed)
    return [random_spec(rng, **kw) for _ in range(count)]


@pytest.fixture
def fig3():
    return build_fiducial(5, FIG3)


@pytest.fixture
def qubit():
    return qubit_spec(20.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# acceptance lines, echoed in the terminal summary so they survive output capture
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

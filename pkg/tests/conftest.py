import numpy as np
import pytest

from opmean.hermitian import HermitianMatrix


def random_hermitian(rng, n):
    x = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return HermitianMatrix(0.5 * (x + x.conj().T))


def random_pd(rng, n, cond=100.0):
    from opmean.sampling import random_pd as _pd

    return _pd(rng, n, cond)


def scipy_mean(a, b, phi):
    """Reference ``A^{1/2} phi(A^{-1/2} B A^{-1/2}) A^{1/2}`` through LAPACK."""
    a = np.asarray(a)
    b = np.asarray(b)
    w, v = np.linalg.eigh(a)
    r = (v * np.sqrt(w)) @ v.conj().T
    ri = (v / np.sqrt(w)) @ v.conj().T
    t = ri @ b @ ri
    tw, tv = np.linalg.eigh(0.5 * (t + t.conj().T))
    return r @ ((tv * phi(tw)) @ tv.conj().T) @ r


def rel(x, y):
    x = np.asarray(x)
    y = np.asarray(y)
    return np.linalg.norm(x - y) / max(np.linalg.norm(y), 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)

import numpy as np
import pytest

from mxdisc import MultiplexNetwork

ACCEPTANCE_LINES: list[str] = []


def random_orthonormal(n, k, rng):
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q


def random_rotation(k, rng):
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    return q * np.sign(np.diag(r))


def random_weighted_graph(n, rng, density=0.6):
    w = rng.random((n, n)) * (rng.random((n, n)) < density)
    w = np.triu(w, 1)
    return w + w.T


def random_multiplex(n, layers, rng, density=0.6):
    return MultiplexNetwork(tuple(random_weighted_graph(n, rng, density) for _ in range(layers)))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)

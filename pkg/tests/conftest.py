import numpy as np
import pytest

from netentropy.experiments import ExperimentConfig
from netentropy.experiments.runners import build_configuration
from netentropy.spectral import SpectrumCache

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def spectrum_cache():
    return SpectrumCache()


@pytest.fixture(scope="session")
def full_config(spectrum_cache):
    """Configuration 0 at full size (N=1024) for the default master seed."""
    return build_configuration(ExperimentConfig().resolved(), 0, spectrum_cache)


def random_symmetric(n, rng, density=0.4):
    """Random tight-binding-like real symmetric matrix."""
    a = (rng.random((n, n)) < density).astype(float)
    a = np.triu(a, 1)
    h = -(a + a.T)
    h[np.diag_indices(n)] = rng.normal(size=n) * 0.3
    return h


def random_state(n, rng):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


def haar_unitary(n, rng):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_density(n, rng, rank=None):
    rank = n if rank is None else rank
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real

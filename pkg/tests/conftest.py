import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def ginibre(dim, seed, scale=True):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return g / np.sqrt(dim) if scale else g


def random_hermitian(dim, seed):
    g = ginibre(dim, seed)
    return 0.5 * (g + g.conj().T)


def random_psd(dim, seed):
    g = ginibre(dim, seed)
    return g @ g.conj().T


@pytest.fixture
def rng():
    return np.random.default_rng(20241016)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)

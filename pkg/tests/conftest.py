import numpy as np
import pytest

from qguess.linalg import projector, random_density, random_ket


def random_hermitian(rng, dim):
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return g + g.conj().T


def random_pure(rng):
    return projector(random_ket(rng))


def random_two_outcome_povm(rng):
    """Random qubit effect E with 0 <= E <= I, paired with I - E."""
    h = random_hermitian(rng, 2)
    lam, v = np.linalg.eigh(h)
    lam = rng.uniform(0, 1, size=2)
    e = (v * lam) @ v.conj().T
    return e, np.eye(2) - e


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


__all__ = ["random_hermitian", "random_pure", "random_two_outcome_povm", "random_density", "random_ket"]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(RESULTS, key=lambda s: int(s.split()[0])):
        ok, detail = RESULTS[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

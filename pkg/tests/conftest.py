import numpy as np
import pytest

from sg_swell.algebra import GalerkinAlgebra
from sg_swell.basis import haar_basis


def make_alg(K: int) -> GalerkinAlgebra:
    return GalerkinAlgebra(haar_basis(int(np.log2(K))))


def positive(alg, rng, n, lo=0.5, hi=2.0):
    """Coefficient vectors whose cell values (eigenvalues) lie in [lo, hi]."""
    return alg.from_cells(rng.uniform(lo, hi, size=(n, alg.K)))


def random_state(alg, rng, n, ndim=1):
    h = positive(alg, rng, n)
    vs = [alg.from_cells(rng.uniform(-1.0, 1.0, size=(n, alg.K))) for _ in range(ndim)]
    return np.stack([h, *[alg.mul(h, v) for v in vs]], axis=-2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# acceptance lines collected by tests/test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split('[', 1)[1].split(']', 1)[0])):
            terminalreporter.write_line(line)

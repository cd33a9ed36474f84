from pathlib import Path

import numpy as np
import pytest

from qcorr import linalg
from qcorr.states import DensityMatrix

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture
def fixtures():
    return FIXTURES


@pytest.fixture
def rng():
    return linalg.make_rng(1234)


def random_state(seed, rank=None, d=2):
    rng = linalg.make_rng(seed)
    rank = rank or int(rng.integers(1, d * d + 1))
    return DensityMatrix((d, d), linalg.random_density_matrix(d, d, rank, rng))


def local_unitary_conjugate(rho, seed):
    u = np.kron(linalg.random_unitary(2, seed), linalg.random_unitary(2, seed + 1))
    return DensityMatrix((2, 2), u @ rho.matrix @ u.conj().T)

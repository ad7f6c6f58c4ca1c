import numpy as np
import pytest

from polarevans.continuation import continue_frames
from polarevans.systems import boussinesq_problem


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def bous04():
    return boussinesq_problem(0.4)


def frames_at(problem, lam):
    """Analytic frames (W_minus, W_plus) at a single lambda."""
    return (
        continue_frames(problem, [lam], "minus")[0].W,
        continue_frames(problem, [lam], "plus")[0].W,
    )


def random_unitary(rng, m):
    Z = rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def crandn(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)

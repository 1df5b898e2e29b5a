import numpy as np
import pytest

from secure_hda.core import SystemParams

HP20 = SystemParams(P=1.0, Q=2.0, N1=0.01, N2=1.0, sigma_v2=1.0)
MID = SystemParams(P=1.0, Q=1.0, N1=1.0, N2=4.0, sigma_v2=1.0)


def random_params(rng, q_zero=False) -> SystemParams:
    n1 = 10 ** rng.uniform(-2, 0)
    return SystemParams(
        P=float(10 ** rng.uniform(-1, 1)),
        Q=0.0 if q_zero else float(10 ** rng.uniform(-1, 1)),
        N1=float(n1),
        N2=float(n1 * 10 ** rng.uniform(0.005, 2)),
        sigma_v2=float(10 ** rng.uniform(-0.7, 0.7)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def hp20():
    return HP20


@pytest.fixture
def mid():
    return MID

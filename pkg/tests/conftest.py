import numpy as np
import pytest

from qnoiseradar.channel import RadarScenario
from qnoiseradar.sources import SourceSpec


@pytest.fixture
def radar():
    def make(kind="TMSV", N_S=0.1, xi=0.5, eta=0.01, N_B=1.0, **kw):
        return RadarScenario(SourceSpec(kind, N_S, xi), eta, N_B, **kw)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

import numpy as np
import pytest

from qnoiseradar.asymptotics import gibbs_matrix, relative_entropy_gaussian, relative_entropy_variance_gaussian
from qnoiseradar.channel import Hypothesis, RadarScenario, simulate_scenario
from qnoiseradar.errors import DomainError, TruncationError
from qnoiseradar.fock import (
    FockGaussian,
    fock_relative_entropy_oracle,
    fock_relative_entropy_variance_oracle,
    gibbs_matrix_logm,
    tail_bound,
)
from qnoiseradar.gaussian import make_thermal, make_tmsv, tensor
from qnoiseradar.sources import SourceSpec


def radar_pair(kind, xi=0.5):
    sc = RadarScenario(SourceSpec(kind, 0.1, xi), 0.01, 1.0)
    return simulate_scenario(sc, Hypothesis.TARGET_PRESENT), simulate_scenario(sc, Hypothesis.TARGET_ABSENT)


def test_thermal_fock_state():
    f = FockGaussian(make_thermal(1.0), 60)
    p = np.real(np.diag(f.rho))
    assert np.allclose(p[:10], 0.5 ** np.arange(1, 11), atol=1e-12)
    assert np.trace(f.rho).real == pytest.approx(1.0, abs=1e-12)


def test_thermal_oracle():
    r1, r0 = make_thermal(1.0), make_thermal(2.0)
    exact = np.log(0.5) - 2 * np.log(2 / 3)
    assert fock_relative_entropy_oracle(r1, r0, 60) == pytest.approx(exact, abs=1e-8)
    assert fock_relative_entropy_variance_oracle(r1, r0, 60) == pytest.approx(
        relative_entropy_variance_gaussian(r1, r0), abs=1e-6
    )


def test_identical_inputs():
    s = make_thermal(0.3)
    assert fock_relative_entropy_oracle(s, s, 30) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("N", [0.3, 2.0])
def test_gibbs_matrices_agree(N):
    s = tensor(make_thermal(N), make_thermal(0.1))
    assert np.allclose(gibbs_matrix_logm(s.cov), gibbs_matrix(s.cov), atol=1e-10)
    r1, _ = radar_pair("TMSV")
    assert np.allclose(gibbs_matrix_logm(r1.cov), gibbs_matrix(r1.cov), atol=1e-8)


@pytest.mark.parametrize("kind", ["TMSV", "CCN"])
def test_radar_oracle(kind):
    r1, r0 = radar_pair(kind)
    assert fock_relative_entropy_oracle(r1, r0, 30) == pytest.approx(relative_entropy_gaussian(r1, r0), abs=1e-4)
    assert fock_relative_entropy_variance_oracle(r1, r0, 30) == pytest.approx(
        relative_entropy_variance_gaussian(r1, r0), abs=1e-4
    )


def test_truncation_and_limits():
    assert tail_bound(make_thermal(1.0), 40) == pytest.approx(0.5**40)
    with pytest.raises(TruncationError):
        FockGaussian(make_thermal(5.0), 30)
    with pytest.raises(DomainError):
        FockGaussian(make_thermal(0.1), 0)
    with pytest.raises(DomainError):
        FockGaussian(tensor(make_thermal(0.1), make_tmsv(0.1)), 5)

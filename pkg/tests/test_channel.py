import numpy as np
import pytest

from qnoiseradar.channel import Hypothesis, RadarScenario, received_photons, simulate_scenario, target_return
from qnoiseradar.correlations import pipeline_advantage, pipeline_report
from qnoiseradar.errors import DomainError
from qnoiseradar.gaussian import make_thermal, make_tmsv
from qnoiseradar.sources import SourceSpec


def test_target_return_limits():
    s = make_tmsv(1.0)
    gone = target_return(s, 0, 0.0, 7.0)
    assert np.allclose(gone.cov[:2, :2], 7.5 * np.eye(2))
    assert np.all(gone.cov[:2, 2:] == 0.0)
    full = target_return(s, 0, 1.0, 123.0)
    assert np.allclose(full.cov, s.cov)
    half = target_return(make_tmsv(1.0), 0, 0.5, 3.0)
    assert half.photon_numbers()[0] == pytest.approx(2.0)
    assert received_photons(1.0, 0.5, 3.0) == 2.0


def test_target_return_errors():
    with pytest.raises(DomainError):
        target_return(make_thermal(1.0), 0, 1.5, 1.0)
    with pytest.raises(DomainError):
        target_return(make_thermal(1.0), 0, 0.5, -1.0)


@pytest.mark.parametrize("kind", ["TMSV", "CCN"])
@pytest.mark.parametrize("gains", [{}, dict(G_S=3.0, N_GS=1.0), dict(G_R=5.0, G_I=2.0, N_GI=0.3)])
def test_target_absent_has_no_cross_block(radar, kind, gains):
    s = simulate_scenario(radar(kind, N_S=0.7, xi=0.2, eta=0.3, N_B=5.0, **gains), Hypothesis.TARGET_ABSENT)
    assert np.max(np.abs(s.cov[:2, 2:])) <= 1e-14


def test_target_absent_is_product(radar):
    s = simulate_scenario(radar("TMSV", N_S=0.7, eta=0.3, N_B=5.0), Hypothesis.TARGET_ABSENT)
    assert np.allclose(s.cov, np.diag([5.5, 5.5, 1.2, 1.2]))


@pytest.mark.parametrize("kind", ["TMSV", "CCN"])
@pytest.mark.parametrize("G_S, N_GS", [(1.0, 0.0), (10.0, 0.0), (4.0, 2.5)])
def test_received_photons_after_signal_gain(radar, kind, G_S, N_GS):
    sc = radar(kind, N_S=0.4, xi=0.1, eta=0.2, N_B=30.0, G_S=G_S, N_GS=N_GS)
    N_S_amp = G_S * 0.4 + (G_S - 1) * (N_GS + 1.0)
    n = simulate_scenario(sc, Hypothesis.TARGET_PRESENT).photon_numbers()[0]
    assert n == pytest.approx(received_photons(N_S_amp, 0.2, 30.0), abs=1e-10)


@pytest.mark.parametrize("G", [1.0, 10.0, 100.0])
@pytest.mark.parametrize("field", ["G_S", "G_R"])
def test_gain_invariance(radar, G, field):
    base = pipeline_advantage(radar("TMSV", N_S=0.1, xi=0.01, eta=0.01, N_B=100.0))
    amp = pipeline_advantage(radar("TMSV", N_S=0.1, xi=0.01, eta=0.01, N_B=100.0, **{field: G}))
    assert amp == pytest.approx(base, rel=1e-10)


def test_theta_rotates_pattern_only(radar):
    r0 = pipeline_report(radar("TMSV", N_S=0.5, eta=0.1, N_B=2.0))
    r1 = pipeline_report(radar("TMSV", N_S=0.5, eta=0.1, N_B=2.0, theta=np.pi / 4))
    assert r1.kappa == pytest.approx(r0.kappa, rel=1e-12)
    assert r1.theta_hat - r0.theta_hat == pytest.approx(np.pi / 4, abs=1e-12)
    assert not np.allclose(r0.D, r1.D)


@pytest.mark.parametrize(
    "bad",
    [dict(eta=1.2), dict(eta=-0.1), dict(N_B=-1.0), dict(G_S=0.5), dict(G_I=0.99), dict(N_GR=-1.0)],
)
def test_scenario_validation(bad):
    kw = dict(eta=0.1, N_B=1.0) | bad
    with pytest.raises(DomainError):
        RadarScenario(SourceSpec("TMSV", 1.0), **kw)


def test_effective_eta(radar):
    sc = radar(eta=0.3)
    assert sc.effective_eta(Hypothesis.TARGET_PRESENT) == 0.3
    assert sc.effective_eta(Hypothesis.TARGET_ABSENT) == 0.0

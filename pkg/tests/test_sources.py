import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from qnoiseradar.correlations import correlation_matrix, extract_cross_correlation
from qnoiseradar.errors import DomainError, InfeasibleError
from qnoiseradar.sources import SourceSpec, build_source, solve_power_constraint


@pytest.mark.parametrize(
    "N_S, xi, N_1, N_0",
    [(1.0, 0.5, 0.0, 2.0), (0.01, 1e-3, 0.0, 10.0), (2.0, 0.25, 1.0, 5.0)],
)
def test_power_constraint(N_S, xi, N_1, N_0):
    assert solve_power_constraint(N_S, xi, N_1) == pytest.approx(N_0, rel=1e-12)


def test_infeasible_names_constraint():
    with pytest.raises(InfeasibleError, match="N_0 > N_1"):
        solve_power_constraint(0.1, 0.5, 0.2)
    with pytest.raises(InfeasibleError):
        SourceSpec("CCN", 0.1, 0.5, 0.2)


@pytest.mark.parametrize("bad", [dict(kind="GHZ", N_S=1.0), dict(kind="TMSV", N_S=-1.0), dict(kind="CCN", N_S=1.0)])
def test_spec_validation(bad):
    with pytest.raises(DomainError):
        SourceSpec(**bad)


def test_ccn_symmetric_split():
    s = build_source(SourceSpec("CCN", 1.0, 0.5))
    assert np.allclose(np.diag(s.cov), 1.5)


def test_tmsv_zero_is_vacuum():
    assert np.allclose(build_source(SourceSpec("TMSV", 0.0)).cov, 0.5 * np.eye(4))


@pytest.mark.parametrize("xi", [1e-3, 0.1, 0.5, 0.9])
def test_cross_block_determinant_sign(xi):
    ccn = build_source(SourceSpec("CCN", 1.0, xi)).cov[:2, 2:]
    tmsv = build_source(SourceSpec("TMSV", 1.0)).cov[:2, 2:]
    assert np.linalg.det(ccn) > 0
    assert np.linalg.det(tmsv) < 0


@given(
    N_S=st.floats(1e-4, 100.0),
    xi=st.floats(1e-4, 1 - 1e-4),
    N_1=st.floats(0.0, 10.0),
    phi=st.floats(-np.pi, np.pi),
)
@settings(max_examples=100)
def test_signal_power_is_N_S(N_S, xi, N_1, phi):
    assume(N_S > N_1 * (1 + 1e-9) + 1e-9)
    for spec in (SourceSpec("CCN", N_S, xi, N_1, phi), SourceSpec("TMSV", N_S)):
        n = build_source(spec).photon_numbers()[0]
        assert n == pytest.approx(N_S, abs=1e-12 * max(1.0, N_S / xi))


def test_ccn_uncorrelated_iff_equal_ports():
    # N_0 = N_1 sits on the infeasible boundary, so approach it from above
    for gap in (1e-1, 1e-3, 1e-6):
        s = build_source(SourceSpec("CCN", 1.0 + gap * 0.5, 0.5, 1.0))
        assert np.max(np.abs(s.cov[:2, 2:])) == pytest.approx(gap * 0.5, rel=1e-6)


@pytest.mark.parametrize("xi", [1e-3, 0.2, 0.5, 0.8, 1 - 1e-3])
@pytest.mark.parametrize("N_S", [1e-3, 0.1, 1.0, 10.0])
def test_tmsv_beats_ccn(N_S, xi):
    k = lambda spec: extract_cross_correlation(correlation_matrix(build_source(spec))).kappa
    assert k(SourceSpec("TMSV", N_S)) > k(SourceSpec("CCN", N_S, xi))


def test_comparators():
    t = SourceSpec("TMSV", 0.4, xi=0.3)
    c = t.as_ccn()
    assert (c.kind, c.N_S, c.xi) == ("CCN", 0.4, 0.3)
    assert c.as_tmsv() == t
    assert c.N_0 == pytest.approx(0.4 / 0.3)
    with pytest.raises(DomainError):
        t.N_0

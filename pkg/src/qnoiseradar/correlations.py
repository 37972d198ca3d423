"""Pearson correlation structure of the (received, idler) pair.

For every state produced by the radar pipeline the correlation matrix has
the form ``[[I, kappa D], [kappa D^T, I]]`` with ``|det D| = 1``. ``kappa``
is reported nonnegative; the orientation (and whether the correlations are
phase-sensitive, ``det D = -1``, or phase-insensitive, ``det D = +1``) lives
in ``D``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Hypothesis, RadarScenario, received_photons, simulate_scenario
from .errors import DegenerateStateError, DomainError, StructureError
from .gaussian import GaussianState
from .sources import solve_power_constraint

STRUCTURE_TOL = 1e-6
ZERO_KAPPA = 1e-150


@dataclass(frozen=True)
class CorrelationReport:
    R: np.ndarray
    kappa: float
    D: np.ndarray
    detD: int
    theta_hat: float


def correlation_matrix(state: GaussianState | np.ndarray) -> np.ndarray:
    cov = state.cov if isinstance(state, GaussianState) else np.asarray(state, dtype=float)
    d = np.diag(cov)
    if np.any(d <= 0):
        raise DegenerateStateError("correlation matrix undefined for a zero-variance quadrature")
    s = np.sqrt(d)
    return cov / np.outer(s, s)


def extract_cross_correlation(R: np.ndarray) -> CorrelationReport:
    """Split the 4x4 correlation matrix into ``kappa`` and ``D``."""
    R = np.asarray(R, dtype=float)
    if R.shape != (4, 4):
        raise DomainError(f"expected a 4x4 correlation matrix, got {R.shape}")
    for blk in (R[:2, :2], R[2:, 2:]):
        if np.max(np.abs(blk - np.eye(2))) > STRUCTURE_TOL:
            raise StructureError("diagonal blocks are not the identity")
    C = R[:2, 2:]
    kappa = float(np.sqrt(abs(np.linalg.det(C))))
    if kappa < ZERO_KAPPA or kappa < STRUCTURE_TOL * np.max(np.abs(C)):
        if np.max(np.abs(C)) > STRUCTURE_TOL:
            raise StructureError("cross block is rank deficient but nonzero")
        return CorrelationReport(R, 0.0, np.eye(2), 1, 0.0)
    D = C / kappa
    sv = np.linalg.svd(D, compute_uv=False)
    if np.max(np.abs(sv - 1.0)) > STRUCTURE_TOL:
        raise StructureError(f"cross block is not kappa times an orthogonal matrix (singular values {sv})")
    detD = 1 if np.linalg.det(D) > 0 else -1
    if detD == 1:
        theta_hat = np.arctan2(D[0, 1], D[0, 0])
    else:
        theta_hat = np.arctan2(-D[0, 1], D[0, 0])
    return CorrelationReport(R, kappa, D, detD, float(theta_hat))


def kappa_tmsv(N_S: float, eta: float, N_B: float) -> float:
    if N_S < 0 or N_B < 0 or not 0.0 <= eta <= 1.0:
        raise DomainError("need N_S >= 0, N_B >= 0 and 0 <= eta <= 1")
    N_R = received_photons(N_S, eta, N_B)
    return float(np.sqrt(eta * N_S * (N_S + 1.0)) / (np.sqrt(N_R + 0.5) * np.sqrt(N_S + 0.5)))


def kappa_ccn(N_S: float, xi: float, N_1: float, eta: float, N_B: float) -> float:
    solve_power_constraint(N_S, xi, N_1)
    if N_B < 0 or not 0.0 <= eta <= 1.0:
        raise DomainError("need N_B >= 0 and 0 <= eta <= 1")
    N_R = received_photons(N_S, eta, N_B)
    excess = N_S - N_1
    idler_term = excess + xi / (1.0 - xi) * (N_1 + 0.5)
    return float(np.sqrt(eta) * excess / (np.sqrt(N_R + 0.5) * np.sqrt(idler_term)))


def quantum_advantage(N_S: float, xi: float) -> float:
    """``kappa_TMSV^2 / kappa_CCN^2`` at equal ``N_S`` (and ``N_1 = 0``)."""
    if N_S <= 0 or not 0.0 < xi < 1.0:
        raise DomainError("need N_S > 0 and 0 < xi < 1")
    return (N_S + 1.0) / (N_S + 0.5) * (1.0 + xi / (2.0 * N_S * (1.0 - xi)))


def quantum_advantage_idler_amplified(N_S: float, xi: float, N_GI: float = 0.0) -> float:
    """Advantage when the idler is amplified with gain ``G_I >> 1``."""
    if N_S <= 0 or not 0.0 < xi < 1.0 or N_GI < 0:
        raise DomainError("need N_S > 0, 0 < xi < 1 and N_GI >= 0")
    return (N_S + 1.0) / (N_S + N_GI + 1.0) * (1.0 + xi * (N_GI + 1.0) / (N_S * (1.0 - xi)))


def pipeline_report(scenario: RadarScenario) -> CorrelationReport:
    state = simulate_scenario(scenario, Hypothesis.TARGET_PRESENT)
    return extract_cross_correlation(correlation_matrix(state))


def pipeline_advantage(scenario: RadarScenario, xi: float | None = None) -> float:
    """``kappa^2`` ratio of TMSV over CCN, both run through ``scenario``."""
    q = pipeline_report(scenario.with_source(scenario.source.as_tmsv())).kappa
    c = pipeline_report(scenario.with_source(scenario.source.as_ccn(xi))).kappa
    return q**2 / c**2

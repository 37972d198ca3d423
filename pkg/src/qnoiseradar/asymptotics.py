"""Quantum relative entropy and its variance for zero-mean Gaussian states.

A faithful zero-mean Gaussian state can be written ``exp(-x^T G x / 2) / Z``.
With ``K = V^{1/2} (i Omega) V^{1/2}`` (Hermitian, spectrum ``+-nu_k``) the
Gibbs matrix is ``G = V^{-1/2} h(K) V^{-1/2}`` for the even function
``h(x) = 2 x arccoth(2 x)``, and ``ln Z = sum_k ln(nu_k^2 - 1/4) / 2``.
Then

    D(rho1 || rho0) = -S(rho1) + Tr(G0 V1) / 2 + ln Z0
    V(rho1 || rho0) = Tr(dG V1 dG V1) / 2 + Tr(dG Omega dG Omega) / 8

with ``dG = G1 - G0``. Normal modes of ``rho1`` that are pure carry zero
weight in ``G1``: their number operator has no fluctuations under ``rho1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import Hypothesis, RadarScenario, simulate_scenario
from .distributions import normal_quantile
from .errors import DomainError, RegimeError, SupportError
from .gaussian import GaussianState, symplectic_form

PURITY_GUARD = 1e-9


def _spectral(V: np.ndarray):
    n = V.shape[0] // 2
    w, U = np.linalg.eigh(V)
    sqrtV = (U * np.sqrt(w)) @ U.conj().T
    inv_sqrtV = (U / np.sqrt(w)) @ U.conj().T
    K = sqrtV @ (1j * symplectic_form(n)) @ sqrtV
    lam, P = np.linalg.eigh(0.5 * (K + K.conj().T))
    return lam, P, inv_sqrtV


def _excess(nu):
    """``nu - 1/2`` clipped at zero, i.e. the normal-mode photon numbers."""
    return np.maximum(np.asarray(nu) - 0.5, 0.0)


def _entropy_nu(nu) -> float:
    N = _excess(nu)
    out = 0.0
    for x in N:
        if x > 0.0:
            out += np.log1p(x) + x * np.log1p(1.0 / x)
    return float(out)


def gibbs_matrix(V: np.ndarray, pure_tol: float | None = None) -> np.ndarray:
    """``G`` with ``rho = exp(-x^T G x / 2) / Z``.

    With ``pure_tol`` set, normal modes whose symplectic eigenvalue lies
    within ``pure_tol`` of 1/2 get ``G``-weight zero instead of raising.
    """
    lam, P, inv_sqrtV = _spectral(V)
    a = np.abs(lam)
    N = a - 0.5
    h = np.zeros_like(a)
    ok = N > (pure_tol if pure_tol is not None else 0.0)
    if pure_tol is None and not np.all(ok):
        raise SupportError("state is pure in at least one normal mode; Gibbs matrix diverges")
    # 2 x arccoth(2x) = x * ln((x + 1/2)/(x - 1/2))
    h[ok] = a[ok] * np.log1p(1.0 / N[ok])
    G = inv_sqrtV @ ((P * h) @ P.conj().T) @ inv_sqrtV
    return np.real(0.5 * (G + G.conj().T))


def _symplectic_nu(V: np.ndarray) -> np.ndarray:
    lam, _, _ = _spectral(V)
    return np.sort(np.abs(lam))[::2]


def _check_pair(rho1: GaussianState, rho0: GaussianState) -> np.ndarray:
    if rho1.n_modes != rho0.n_modes:
        raise DomainError("states must have the same number of modes")
    nu0 = _symplectic_nu(rho0.cov)
    if np.min(nu0) < 0.5 + PURITY_GUARD:
        raise SupportError(
            f"reference state has symplectic eigenvalue {np.min(nu0)!r} within "
            f"{PURITY_GUARD} of 1/2; relative entropy is infinite unless the states coincide"
        )
    return nu0


def relative_entropy_gaussian(rho1: GaussianState, rho0: GaussianState) -> float:
    """``D(rho1 || rho0)`` in nats."""
    nu0 = _check_pair(rho1, rho0)
    G0 = gibbs_matrix(rho0.cov)
    N0 = _excess(nu0)
    log_Z0 = 0.5 * float(np.sum(np.log(N0) + np.log1p(N0)))
    nu1 = _symplectic_nu(rho1.cov)
    D = -_entropy_nu(nu1) + 0.5 * float(np.sum(G0 * rho1.cov)) + log_Z0
    return max(D, 0.0) if D > -1e-12 else D


def relative_entropy_variance_gaussian(rho1: GaussianState, rho0: GaussianState) -> float:
    """``V(rho1 || rho0) = Tr rho1 (ln rho1 - ln rho0 - D)^2``."""
    _check_pair(rho1, rho0)
    n = rho1.n_modes
    dG = gibbs_matrix(rho1.cov, pure_tol=PURITY_GUARD) - gibbs_matrix(rho0.cov)
    V1 = rho1.cov
    Om = symplectic_form(n)
    X = dG @ V1
    Y = dG @ Om
    var = 0.5 * np.trace(X @ X) + 0.125 * np.trace(Y @ Y)
    return float(max(var, 0.0))


def hypothesis_states(scenario: RadarScenario):
    """(rho1, rho0): joint received/idler state with and without the target."""
    return (
        simulate_scenario(scenario, Hypothesis.TARGET_PRESENT),
        simulate_scenario(scenario, Hypothesis.TARGET_ABSENT),
    )


def d_tmsv_first_order(N_S: float, N_B: float, eta: float) -> float:
    if N_S <= 0 or N_B <= 0 or not 0.0 <= eta <= 1.0:
        raise DomainError("need N_S > 0, N_B > 0 and 0 <= eta <= 1")
    return eta * N_S * (N_S + 1.0) / (N_S + N_B + 1.0) * (np.log1p(1.0 / N_B) + np.log1p(1.0 / N_S))


def d_ccn_first_order(N_S: float, xi: float, N_B: float, eta: float) -> float:
    if N_S <= 0 or N_B <= 0 or not 0.0 < xi < 1.0 or not 0.0 <= eta <= 1.0:
        raise DomainError("need N_S > 0, N_B > 0, 0 < xi < 1 and 0 <= eta <= 1")
    r = xi / (1.0 - xi)
    denom = N_S - r * N_B
    if denom <= 0:
        raise RegimeError(
            f"first-order CCN formula needs N_S > xi N_B / (1 - xi); got {N_S} <= {r * N_B}"
        )
    return eta * N_S**2 / denom * (np.log1p(1.0 / N_B) - np.log1p(r / N_S))


@dataclass(frozen=True)
class SteinReport:
    D: float
    V: float
    M: int
    epsilon: float

    @property
    def correction(self) -> float:
        """Second-order term ``sqrt(V/M) Phi^{-1}(epsilon)``; ``O(ln M / M)`` is dropped."""
        return float(np.sqrt(self.V / self.M) * normal_quantile(self.epsilon))

    @property
    def exponent(self) -> float:
        return self.D + self.correction


def stein_exponent(D: float, V: float, M: int, epsilon: float) -> SteinReport:
    if D < 0 or V < 0:
        raise DomainError("D and V must be nonnegative")
    if M < 1:
        raise DomainError("M must be a positive integer")
    if not 0.0 < epsilon < 1.0:
        raise DomainError("epsilon must lie in (0, 1)")
    return SteinReport(float(D), float(V), int(M), float(epsilon))

"""Number-basis cross-check of the Gaussian relative entropy.

Independent of :mod:`qnoiseradar.asymptotics`: the Gibbs matrix is obtained
from a matrix logarithm, ``G = logm((Y + I)(Y - I)^{-1}) i Omega`` with
``Y = 2 i Omega V``, the state is built as ``exp(-H)/Z`` from truncated ladder
operators, and traces are taken in the truncated Hilbert space.

Memory: the 2-mode case holds a few dense ``cutoff^2 x cutoff^2`` matrices,
i.e. O(cutoff^4) doubles (about 330 MB at cutoff 80).
"""

from __future__ import annotations

import numpy as np
from scipy import linalg, sparse
from scipy.special import logsumexp

from .errors import DomainError, SupportError, TruncationError
from .gaussian import GaussianState, symplectic_form

MAX_MODES = 2
MAX_CUTOFF = 80
TAIL_BOUND = 1e-8


def gibbs_matrix_logm(V: np.ndarray) -> np.ndarray:
    n = V.shape[0] // 2
    iOm = 1j * symplectic_form(n)
    Y = 2.0 * iOm @ V
    I = np.eye(2 * n)
    L = linalg.logm((Y + I) @ np.linalg.inv(Y - I))
    G = np.real(L @ iOm)
    return 0.5 * (G + G.T)


def tail_bound(state: GaussianState, cutoff: int) -> float:
    """Sum over modes of ``(n/(n+1))^cutoff``, the Bose-Einstein tail mass."""
    n = np.maximum(state.photon_numbers(), 0.0)
    return float(np.sum((n / (n + 1.0)) ** cutoff))


def _quadratures(n_modes: int, cutoff: int):
    a = sparse.diags(np.sqrt(np.arange(1, cutoff)), 1, format="csr")
    eye = sparse.identity(cutoff, format="csr")
    ops = []
    for k in range(n_modes):
        factors = [eye] * n_modes
        factors[k] = a
        ak = factors[0]
        for f in factors[1:]:
            ak = sparse.kron(ak, f, format="csr")
        ops.append((ak + ak.T) / np.sqrt(2.0))
        ops.append(1j * (ak.T - ak) / np.sqrt(2.0))
    return ops


def _kept_indices(n_modes: int, cutoff: int) -> np.ndarray:
    levels = np.indices((cutoff + 1,) * n_modes).reshape(n_modes, -1)
    return np.flatnonzero(np.all(levels < cutoff, axis=0))


class FockGaussian:
    """Truncated ``exp(-H)/Z`` representation of a faithful Gaussian state."""

    def __init__(self, state: GaussianState, cutoff: int):
        if state.n_modes > MAX_MODES:
            raise DomainError(f"Fock oracle supports at most {MAX_MODES} modes")
        if not 1 <= cutoff <= MAX_CUTOFF:
            raise DomainError(f"cutoff must lie in [1, {MAX_CUTOFF}]")
        tail = tail_bound(state, cutoff)
        if tail > TAIL_BOUND:
            raise TruncationError(f"cutoff {cutoff} leaves tail mass up to {tail:.3g} > {TAIL_BOUND}")
        try:
            G = gibbs_matrix_logm(state.cov)
        except (np.linalg.LinAlgError, ValueError) as exc:
            raise SupportError("state is (numerically) pure; no Gibbs form") from exc
        if not np.all(np.isfinite(G)):
            raise SupportError("state is (numerically) pure; no Gibbs form")
        # products are formed one level above the cutoff and then compressed,
        # so every matrix element of H inside the truncated space is exact
        x = _quadratures(state.n_modes, cutoff + 1)
        H = sparse.csr_matrix(x[0].shape, dtype=complex)
        for i in range(len(x)):
            for j in range(len(x)):
                if G[i, j] != 0.0:
                    H = H + 0.5 * G[i, j] * (x[i] @ x[j])
        keep = _kept_indices(state.n_modes, cutoff)
        H = H.toarray()[np.ix_(keep, keep)]
        H = 0.5 * (H + H.conj().T)
        e, U = np.linalg.eigh(H)
        self.H = H
        self.log_Z = float(logsumexp(-e))
        self.rho = (U * np.exp(-e - self.log_Z)) @ U.conj().T

    def log_rho(self) -> np.ndarray:
        return -self.H - self.log_Z * np.eye(self.H.shape[0])


def _pair(rho1, rho0, cutoff):
    if rho1.n_modes != rho0.n_modes:
        raise DomainError("states must have the same number of modes")
    return FockGaussian(rho1, cutoff), FockGaussian(rho0, cutoff)


def fock_relative_entropy_oracle(rho1: GaussianState, rho0: GaussianState, cutoff: int) -> float:
    f1, f0 = _pair(rho1, rho0, cutoff)
    L = f1.log_rho() - f0.log_rho()
    return float(np.real(np.trace(f1.rho @ L)))


def fock_relative_entropy_variance_oracle(rho1: GaussianState, rho0: GaussianState, cutoff: int) -> float:
    f1, f0 = _pair(rho1, rho0, cutoff)
    L = f1.log_rho() - f0.log_rho()
    D = np.real(np.trace(f1.rho @ L))
    return float(np.real(np.trace(f1.rho @ L @ L)) - D**2)

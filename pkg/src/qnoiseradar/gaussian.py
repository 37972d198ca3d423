"""Zero-mean Gaussian states and the linear optics acting on them.

Quadratures are interleaved, ``(q1, p1, q2, p2, ...)``, with
``q = (a + a^dag)/sqrt(2)`` and ``p = i(a^dag - a)/sqrt(2)``, so the vacuum
has variance 1/2 per quadrature and a mode with ``N`` mean photons has
``(N + 1/2) I`` as its diagonal block.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, ValidityError

VACUUM_VARIANCE = 0.5

SYMMETRY_RTOL = 1e-12
UNCERTAINTY_TOL = 1e-10


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal ``Omega`` with ``[[0, 1], [-1, 0]]`` per mode."""
    if n_modes < 1:
        raise DomainError("n_modes must be positive")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _symplectic_spectrum(cov: np.ndarray) -> np.ndarray:
    """Symplectic eigenvalues of a positive definite ``cov``.

    ``i Omega cov`` is similar to the Hermitian ``L^T (i Omega) L`` with
    ``cov = L L^T``, whose real spectrum ``+-nu_k`` eigvalsh returns stably
    even for strongly squeezed states.
    """
    n = cov.shape[0] // 2
    L = np.linalg.cholesky(cov)
    ev = np.linalg.eigvalsh(L.T @ (1j * symplectic_form(n)) @ L)
    return np.sort(ev[n:])


def _uncertainty_tol(cov: np.ndarray) -> float:
    # eigvalsh is accurate to a few eps * ||cov|| in absolute terms
    return max(UNCERTAINTY_TOL, 64.0 * np.finfo(float).eps * np.linalg.norm(cov, 2))


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Zero-mean Gaussian state described by its covariance matrix."""

    cov: np.ndarray

    def __post_init__(self):
        cov = np.array(self.cov, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1] or cov.shape[0] % 2:
            raise ValidityError(f"covariance must be 2n x 2n, got shape {cov.shape}")
        scale = max(np.max(np.abs(cov)), 1.0)
        if np.max(np.abs(cov - cov.T)) > SYMMETRY_RTOL * scale:
            raise ValidityError("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        try:
            np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            raise ValidityError("covariance is not positive definite") from None
        nu = _symplectic_spectrum(cov)
        if nu[0] < VACUUM_VARIANCE - _uncertainty_tol(cov):
            raise ValidityError(
                f"uncertainty principle violated: smallest symplectic eigenvalue {nu[0]!r} < 1/2"
            )
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)

    @property
    def n_modes(self) -> int:
        return self.cov.shape[0] // 2

    def photon_numbers(self) -> np.ndarray:
        """Mean photon number of every mode."""
        d = np.diag(self.cov)
        return 0.5 * (d[0::2] + d[1::2]) - VACUUM_VARIANCE

    def __repr__(self):
        return f"GaussianState(n_modes={self.n_modes})"


def _check_mode(state: GaussianState, mode: int):
    if not 0 <= mode < state.n_modes:
        raise DomainError(f"mode {mode} out of range for a {state.n_modes}-mode state")


def _embed(block: np.ndarray, modes: Sequence[int], n_modes: int) -> np.ndarray:
    """Embed a symplectic acting on ``modes`` into the full phase space."""
    S = np.eye(2 * n_modes)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in modes])
    S[np.ix_(idx, idx)] = block
    return S


def _apply(state: GaussianState, block: np.ndarray, modes: Sequence[int]) -> GaussianState:
    S = _embed(block, modes, state.n_modes)
    return GaussianState(S @ state.cov @ S.T)


def passive_symplectic(U: np.ndarray) -> np.ndarray:
    """Real symplectic matrix of the passive map ``a_j -> sum_k U_jk a_k``.

    Each complex entry ``x + iy`` becomes the block ``[[x, -y], [y, x]]``.
    """
    U = np.asarray(U, dtype=complex)
    n = U.shape[0]
    S = np.zeros((2 * n, 2 * n))
    for j in range(n):
        for k in range(n):
            x, y = U[j, k].real, U[j, k].imag
            S[2 * j : 2 * j + 2, 2 * k : 2 * k + 2] = [[x, -y], [y, x]]
    return S


def beamsplitter_symplectic(xi: float, phi: float = 0.0) -> np.ndarray:
    """4x4 symplectic of a beamsplitter with reflection coefficient ``xi``."""
    if not 0.0 <= xi <= 1.0:
        raise DomainError(f"beamsplitter coefficient must lie in [0, 1], got {xi}")
    r, t = np.sqrt(xi), np.sqrt(1.0 - xi)
    U = np.array(
        [[r, t * np.exp(1j * phi)], [-t * np.exp(-1j * phi), r]],
    )
    return passive_symplectic(U)


def rotation_symplectic(theta: float) -> np.ndarray:
    """Single-mode phase shift ``a -> a exp(-i theta)``."""
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]])


def thermal_photon_number(frequency: float, temperature: float) -> float:
    """Bose-Einstein occupation ``1/(exp(2 pi f / T) - 1)`` in natural units."""
    if frequency <= 0 or temperature <= 0:
        raise DomainError("frequency and temperature must be positive")
    x = 2.0 * np.pi * frequency / temperature
    # e^-x / (1 - e^-x) does not overflow for large x
    return float(np.exp(-x) / -np.expm1(-x))


def make_thermal(N: float) -> GaussianState:
    if N < 0:
        raise DomainError(f"photon number must be nonnegative, got {N}")
    return GaussianState((N + VACUUM_VARIANCE) * np.eye(2))


def vacuum(n_modes: int = 1) -> GaussianState:
    return GaussianState(VACUUM_VARIANCE * np.eye(2 * n_modes))


def make_tmsv(N_S: float) -> GaussianState:
    """Two-mode squeezed vacuum with ``N_S`` photons in each mode.

    q-q correlated and p-p anticorrelated: cross block ``c * diag(1, -1)``
    with ``c = sqrt(N_S (N_S + 1))``.
    """
    if N_S < 0:
        raise DomainError(f"N_S must be nonnegative, got {N_S}")
    a = N_S + VACUUM_VARIANCE
    c = np.sqrt(N_S * (N_S + 1.0))
    cov = np.array(
        [
            [a, 0.0, c, 0.0],
            [0.0, a, 0.0, -c],
            [c, 0.0, a, 0.0],
            [0.0, -c, 0.0, a],
        ]
    )
    return GaussianState(cov)


def tensor(a: GaussianState, b: GaussianState) -> GaussianState:
    na, nb = a.cov.shape[0], b.cov.shape[0]
    cov = np.zeros((na + nb, na + nb))
    cov[:na, :na] = a.cov
    cov[na:, na:] = b.cov
    return GaussianState(cov)


def partial_trace(state: GaussianState, keep: Sequence[int]) -> GaussianState:
    """Marginal on the modes in ``keep`` (in the given order)."""
    keep = list(keep)
    if not keep:
        raise DomainError("keep must name at least one mode")
    for m in keep:
        _check_mode(state, m)
    idx = np.concatenate([[2 * m, 2 * m + 1] for m in keep])
    return GaussianState(state.cov[np.ix_(idx, idx)])


def apply_beamsplitter(
    state: GaussianState, mode_i: int, mode_j: int, xi: float, phi: float = 0.0
) -> GaussianState:
    """Mix two modes; ``mode_i`` plays the role of input/output port 0.

    ``a_i' = sqrt(xi) a_i + sqrt(1-xi) e^{i phi} a_j`` and
    ``a_j' = -sqrt(1-xi) e^{-i phi} a_i + sqrt(xi) a_j``.
    """
    _check_mode(state, mode_i)
    _check_mode(state, mode_j)
    if mode_i == mode_j:
        raise DomainError("beamsplitter needs two distinct modes")
    if xi == 1.0:
        return state
    return _apply(state, beamsplitter_symplectic(xi, phi), [mode_i, mode_j])


def apply_phase(state: GaussianState, mode: int, theta: float) -> GaussianState:
    _check_mode(state, mode)
    return _apply(state, rotation_symplectic(theta), [mode])


def apply_amplifier(state: GaussianState, mode: int, G: float, N_G: float = 0.0) -> GaussianState:
    """Phase-insensitive amplifier ``a' = sqrt(G) a + sqrt(G-1) a_G^dag``.

    The idler ``a_G`` is thermal with ``N_G`` photons and is traced out, so the
    mode block becomes ``G*block + (G-1)(N_G+1/2) I`` and its correlations with
    every other mode are multiplied by ``sqrt(G)``.
    """
    _check_mode(state, mode)
    if G < 1.0:
        raise DomainError(f"amplifier gain must be >= 1, got {G}")
    if N_G < 0:
        raise DomainError(f"amplifier noise must be nonnegative, got {N_G}")
    if G == 1.0:
        return state
    cov = state.cov.copy()
    sl = slice(2 * mode, 2 * mode + 2)
    g = np.sqrt(G)
    cov[sl, :] *= g
    cov[:, sl] *= g
    cov[sl, sl] += (G - 1.0) * (N_G + VACUUM_VARIANCE) * np.eye(2)
    return GaussianState(cov)


def symplectic_eigenvalues(state: GaussianState) -> np.ndarray:
    """Sorted symplectic spectrum, one value per mode."""
    return _symplectic_spectrum(state.cov)


def ppt_min_symplectic(state: GaussianState, partition: int = 1) -> float:
    """Smallest symplectic eigenvalue of the partial transpose.

    Transposition of mode ``partition`` flips the sign of its ``p``
    quadrature. A value below 1/2 certifies entanglement.
    """
    if state.n_modes != 2:
        raise DomainError(f"PPT witness needs exactly 2 modes, got {state.n_modes}")
    _check_mode(state, partition)
    flip = np.ones(4)
    flip[2 * partition + 1] = -1.0
    cov = state.cov * np.outer(flip, flip)
    ev = np.linalg.eigvals(1j * symplectic_form(2) @ cov)
    return float(np.min(np.abs(ev)))

"""Heterodyne detection: Wilks statistic, analytic and Monte Carlo ROC curves.

Random numbers come from counter-based Philox streams keyed by
``(seed, stream, chunk)``. Trials are cut into chunks of fixed size, so a
result depends on the seed and the chunk size but never on how many
threads processed the chunks.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import kernels
from .channel import Hypothesis, RadarScenario, simulate_scenario
from .correlations import correlation_matrix, extract_cross_correlation
from .distributions import chi2_isf, noncentral_chi2_sf
from .errors import DomainError
from .gaussian import GaussianState

SAMPLE_CHUNK = 1 << 16


@dataclass(frozen=True)
class DetectionConfig:
    M: int
    p_fa_grid: tuple
    trials: int = 10_000
    seed: int = 0
    chunk_trials: int = 250

    def __post_init__(self):
        object.__setattr__(self, "p_fa_grid", tuple(float(p) for p in self.p_fa_grid))
        if self.M < 1:
            raise DomainError("M must be a positive integer")
        if self.trials < 1 or self.chunk_trials < 1:
            raise DomainError("trials and chunk_trials must be positive")
        if not 0 <= self.seed < 2**64:
            raise DomainError("seed must be an unsigned 64-bit integer")
        g = np.asarray(self.p_fa_grid)
        if g.size == 0 or np.any((g <= 0) | (g >= 1)) or np.any(np.diff(g) <= 0):
            raise DomainError("p_fa_grid must be strictly increasing inside (0, 1)")


@dataclass(frozen=True)
class RocCurve:
    p_fa: np.ndarray
    p_d: np.ndarray
    kind: str
    M: int
    kappa_het: float
    stderr: Optional[np.ndarray] = None
    p_fa_observed: Optional[np.ndarray] = None

    @property
    def points(self):
        return list(zip(self.p_fa.tolist(), self.p_d.tolist()))

    def rows(self):
        se = self.stderr if self.stderr is not None else [None] * len(self.p_fa)
        for pf, pd, s in zip(self.p_fa, self.p_d, se):
            yield float(pf), float(pd), (None if s is None else float(s))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["p_fa", "p_d", "stderr"])
        for pf, pd, s in self.rows():
            w.writerow([repr(pf), repr(pd), "" if s is None else repr(s)])
        return buf.getvalue()


def substream(seed: int, *index: int) -> np.random.Generator:
    """Independent generator for the counter ``(seed, *index)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence((int(seed), *map(int, index)))))


def heterodyne_covariance(state: GaussianState) -> np.ndarray:
    """Outcome covariance of joint q/p measurement: one vacuum unit added per mode."""
    return state.cov + 0.5 * np.eye(state.cov.shape[0])


def heterodyne_report(state: GaussianState):
    return extract_cross_correlation(correlation_matrix(heterodyne_covariance(state)))


def kappa_het(scenario: RadarScenario) -> float:
    return heterodyne_report(simulate_scenario(scenario, Hypothesis.TARGET_PRESENT)).kappa


def sample_heterodyne(state: GaussianState, M: int, seed: int) -> np.ndarray:
    """``M`` i.i.d. heterodyne outcomes, shape (M, 2n)."""
    if M < 1:
        raise DomainError("M must be positive")
    L = np.linalg.cholesky(heterodyne_covariance(state))
    dim = L.shape[0]
    out = np.empty((M, dim))
    for c, start in enumerate(range(0, M, SAMPLE_CHUNK)):
        stop = min(start + SAMPLE_CHUNK, M)
        z = substream(seed, 0, c).standard_normal((stop - start, dim))
        out[start:stop] = z @ L.T
    return out


def _inv_sqrt(S: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(S)
    return (V / np.sqrt(w)) @ V.T


def _whitener(null_cov: np.ndarray, alt_pattern: np.ndarray) -> np.ndarray:
    null_cov = np.asarray(null_cov, dtype=float)
    D = np.asarray(alt_pattern, dtype=float)
    if null_cov.shape != (4, 4) or D.shape != (2, 2):
        raise DomainError("expected a 4x4 null covariance and a 2x2 pattern")
    if np.max(np.abs(D @ D.T - np.eye(2))) > 1e-6:
        raise DomainError("alt_pattern must be orthogonal")
    try:
        np.linalg.cholesky(null_cov)
    except np.linalg.LinAlgError:
        raise DomainError("null covariance is singular or indefinite") from None
    W = np.zeros((4, 4))
    W[:2, :2] = _inv_sqrt(null_cov[:2, :2])
    W[2:, 2:] = D @ _inv_sqrt(null_cov[2:, 2:])
    return W


def wilks_statistic(samples: np.ndarray, null_cov: np.ndarray, alt_pattern: np.ndarray) -> float:
    """Generalized likelihood ratio for a correlation along ``alt_pattern``.

    Under the alternative the whitened received pair ``u`` and idler pair
    ``v`` satisfy ``cov(u, v) = rho * alt_pattern``. ``rho`` is fitted by
    maximum likelihood over (-1, 1) and ``2 * (l(rho_hat) - l(0))`` is
    returned. The null distribution is asymptotically chi-squared with one
    degree of freedom.
    """
    samples = np.asarray(samples, dtype=float)
    W = _whitener(null_cov, alt_pattern)
    A, B = kernels.trial_stats_numpy(samples[None, :, :], W)
    n = 2.0 * samples.shape[0]
    return float(kernels.glr(A, B, n)[0])


def roc_analytic(kappa_het: float, M: int, p_fa_grid: Sequence[float]) -> RocCurve:
    if not 0.0 <= kappa_het < 1.0:
        raise DomainError(f"kappa_het must lie in [0, 1), got {kappa_het}")
    if M < 1:
        raise DomainError("M must be positive")
    grid = np.asarray(p_fa_grid, dtype=float)
    if np.any((grid <= 0) | (grid >= 1)):
        raise DomainError("false-alarm probabilities must lie in (0, 1)")
    lam = 2.0 * M * kappa_het**2
    p_d = np.array([min(noncentral_chi2_sf(chi2_isf(p), lam), 1.0) for p in grid])
    return RocCurve(grid, p_d, "analytic", M, float(kappa_het))


def simulate_statistics(
    state: GaussianState,
    W: np.ndarray,
    M: int,
    trials: int,
    seed: int,
    stream: int,
    chunk_trials: int,
    threads: int = 1,
) -> np.ndarray:
    """Wilks statistic for ``trials`` independent data sets drawn from ``state``."""
    T = W @ np.linalg.cholesky(heterodyne_covariance(state))
    n = 2.0 * M
    starts = list(range(0, trials, chunk_trials))

    def run(c):
        k = min(chunk_trials, trials - starts[c])
        z = substream(seed, stream, c).standard_normal((k, M, 4))
        A, B = kernels.trial_stats(z, T)
        return kernels.glr(A, B, n)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(len(starts))))
    else:
        parts = [run(c) for c in range(len(starts))]
    return np.concatenate(parts)


def roc_empirical(scenario: RadarScenario, config: DetectionConfig, threads: int = 1) -> RocCurve:
    """Monte Carlo ROC of the Wilks detector at the analytic chi-squared thresholds."""
    h0 = simulate_scenario(scenario, Hypothesis.TARGET_ABSENT)
    h1 = simulate_scenario(scenario, Hypothesis.TARGET_PRESENT)
    report = heterodyne_report(h1)
    W = _whitener(heterodyne_covariance(h0), report.D)
    args = (config.M, config.trials, config.seed)
    stat0 = simulate_statistics(h0, W, *args, stream=1, chunk_trials=config.chunk_trials, threads=threads)
    stat1 = simulate_statistics(h1, W, *args, stream=2, chunk_trials=config.chunk_trials, threads=threads)
    thr = np.array([chi2_isf(p) for p in config.p_fa_grid])
    p_fa_obs = (stat0[None, :] > thr[:, None]).mean(axis=1)
    p_d = (stat1[None, :] > thr[:, None]).mean(axis=1)
    stderr = np.sqrt(p_d * (1.0 - p_d) / config.trials)
    return RocCurve(
        np.asarray(config.p_fa_grid), p_d, "empirical", config.M, report.kappa, stderr, p_fa_obs
    )

"""Hot loops of the detection code, in numba and pure-numpy flavours.

Each kernel exists twice: ``*_numba`` (compiled with ``nogil`` so sweep
threads can overlap) and ``*_numpy`` (vectorised numpy/scipy). The public
name is bound to one of them according to ``_accel.USE_NUMBA``; both stay
importable so tests and the benchmark can compare them.
"""

import math

import numpy as np
from scipy import special

from ._accel import USE_NUMBA, njit

NCX2_TAIL = 1e-14


# -- per-trial sufficient statistics ---------------------------------------

@njit(cache=True, nogil=True)
def trial_stats_numba(z, T):
    """For each trial, map ``y = T z`` and accumulate ``A`` and ``B``.

    ``z`` has shape (trials, M, 4). ``A`` is the total energy of the whitened
    samples and ``B`` the inner product between the received pair and the
    pattern-aligned idler pair.
    """
    trials, M = z.shape[0], z.shape[1]
    A = np.zeros(trials)
    B = np.zeros(trials)
    for t in range(trials):
        a = 0.0
        b = 0.0
        for m in range(M):
            z0 = z[t, m, 0]
            z1 = z[t, m, 1]
            z2 = z[t, m, 2]
            z3 = z[t, m, 3]
            y0 = T[0, 0] * z0 + T[0, 1] * z1 + T[0, 2] * z2 + T[0, 3] * z3
            y1 = T[1, 0] * z0 + T[1, 1] * z1 + T[1, 2] * z2 + T[1, 3] * z3
            y2 = T[2, 0] * z0 + T[2, 1] * z1 + T[2, 2] * z2 + T[2, 3] * z3
            y3 = T[3, 0] * z0 + T[3, 1] * z1 + T[3, 2] * z2 + T[3, 3] * z3
            a += y0 * y0 + y1 * y1 + y2 * y2 + y3 * y3
            b += y0 * y2 + y1 * y3
        A[t] = a
        B[t] = b
    return A, B


def trial_stats_numpy(z, T):
    y = z @ T.T
    A = np.einsum("tmk,tmk->t", y, y)
    B = np.einsum("tmk,tmk->t", y[..., :2], y[..., 2:])
    return A, B


# -- generalized likelihood ratio from (A, B) --------------------------------
#
# Model: n = 2M independent unit-variance pairs with correlation rho.
# dl/drho = 0  <=>  n rho^3 - B rho^2 + (A - n) rho - B = 0

@njit(cache=True, nogil=True)
def _cubic(r, A, B, n):
    return ((n * r - B) * r + (A - n)) * r - B


@njit(cache=True, nogil=True)
def _loglik_gain(r, A, B, n):
    one_m = 1.0 - r * r
    return -n * math.log1p(-r * r) + (2.0 * r * B - r * r * A) / one_m


@njit(cache=True, nogil=True)
def _bisect_root(lo, hi, A, B, n):
    flo = _cubic(lo, A, B, n)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fm = _cubic(mid, A, B, n)
        if (fm < 0.0) == (flo < 0.0):
            lo = mid
            flo = fm
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


@njit(cache=True, nogil=True)
def _glr_scalar(A, B, n):
    # split [-1, 1] at the critical points of the cubic into monotone pieces
    edges = [-1.0, 1.0]
    disc = B * B - 3.0 * n * (A - n)
    if disc > 0.0:
        s = math.sqrt(disc)
        for c in ((B - s) / (3.0 * n), (B + s) / (3.0 * n)):
            if -1.0 < c < 1.0:
                edges.append(c)
    edges.sort()
    best = 0.0
    for k in range(len(edges) - 1):
        lo, hi = edges[k], edges[k + 1]
        flo, fhi = _cubic(lo, A, B, n), _cubic(hi, A, B, n)
        if flo == 0.0:
            r = lo
        elif fhi == 0.0:
            r = hi
        elif (flo < 0.0) != (fhi < 0.0):
            r = _bisect_root(lo, hi, A, B, n)
        else:
            continue
        if -1.0 < r < 1.0:
            g = _loglik_gain(r, A, B, n)
            if g > best:
                best = g
    return best


@njit(cache=True, nogil=True)
def glr_numba(A, B, n):
    out = np.empty(A.shape[0])
    for i in range(A.shape[0]):
        out[i] = _glr_scalar(A[i], B[i], n)
    return out


def glr_numpy(A, B, n):
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    out = np.empty_like(A)
    mono = B * B - 3.0 * n * (A - n) <= 0.0
    # monotone cubic with f(-1) <= 0 <= f(1): unique root, safeguarded Newton
    a, b = A[mono], B[mono]
    lo = -np.ones_like(a)
    hi = np.ones_like(a)
    r = np.clip(b / np.maximum(a - n, 1e-300), -0.5, 0.5)
    for _ in range(100):
        f = ((n * r - b) * r + (a - n)) * r - b
        lo = np.where(f < 0, r, lo)
        hi = np.where(f > 0, r, hi)
        df = (3.0 * n * r - 2.0 * b) * r + (a - n)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = r - f / df
        bad = ~np.isfinite(step) | (step <= lo) | (step >= hi)
        new = np.where(bad, 0.5 * (lo + hi), step)
        if np.all(np.abs(new - r) <= 1e-15 * np.maximum(1.0, np.abs(r))):
            r = new
            break
        r = new
    out[mono] = -n * np.log1p(-r * r) + (2.0 * r * b - r * r * a) / (1.0 - r * r)
    for i in np.flatnonzero(~mono):
        roots = np.roots([n, -B[i], A[i] - n, -B[i]])
        roots = roots[np.abs(roots.imag) < 1e-12].real
        roots = roots[np.abs(roots) < 1.0]
        gains = [0.0] + [
            -n * np.log1p(-x * x) + (2.0 * x * B[i] - x * x * A[i]) / (1.0 - x * x) for x in roots
        ]
        out[i] = max(gains)
    return np.maximum(out, 0.0)


# -- noncentral chi-squared tail, one degree of freedom --------------------

@njit(cache=True, nogil=True)
def ncx2_sf_numba(x, lam):
    """Poisson mixture of central chi-squared tails with ``1 + 2j`` dof.

    The central tails ``Q(j + 1/2, x/2)`` follow from ``erfc`` by the upward
    recurrence ``Q(a + 1, y) = Q(a, y) + y^a e^{-y} / Gamma(a + 1)``. The
    sum stops once the Poisson mass beyond the current index is provably
    below ``NCX2_TAIL`` times the partial sum.
    """
    if x <= 0.0:
        return 1.0
    y = 0.5 * x
    S = math.erfc(math.sqrt(y))
    mu = 0.5 * lam
    if mu == 0.0:
        return S
    log_mu = math.log(mu)
    log_y = math.log(y)
    total = 0.0
    j = 0
    while True:
        log_w = -mu + j * log_mu - math.lgamma(j + 1.0)
        w = math.exp(log_w)
        total += w * S
        if j + 1 > mu:
            ratio = mu / (j + 1.0)
            if w * ratio / (1.0 - ratio) < NCX2_TAIL * total or w == 0.0:
                break
        a = j + 0.5
        S += math.exp(a * log_y - y - math.lgamma(a + 1.0))
        if S > 1.0:
            S = 1.0
        j += 1
    return total


def ncx2_sf_numpy(x, lam):
    if x <= 0.0:
        return 1.0
    y = 0.5 * x
    mu = 0.5 * lam
    if mu == 0.0:
        return float(special.erfc(math.sqrt(y)))
    # grow the index window until the Poisson tail bound is met
    J = int(mu + 10.0 * math.sqrt(mu) + 50.0)
    while True:
        w_J = math.exp(-mu + J * math.log(mu) - math.lgamma(J + 1.0))
        ratio = mu / (J + 1.0)
        if w_J * ratio / (1.0 - ratio) < NCX2_TAIL:
            break
        J *= 2
    j = np.arange(J + 1, dtype=float)
    w = np.exp(-mu + j * math.log(mu) - special.gammaln(j + 1.0))
    return float(np.sum(w * special.gammaincc(j + 0.5, y)))


if USE_NUMBA:
    trial_stats = trial_stats_numba
    glr = glr_numba
    ncx2_sf = ncx2_sf_numba
else:
    trial_stats = trial_stats_numpy
    glr = glr_numpy
    ncx2_sf = ncx2_sf_numpy

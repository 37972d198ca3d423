"""Tail probabilities and quantiles for one-degree-of-freedom chi-squared laws."""

from __future__ import annotations

import math

from scipy import special

from . import kernels
from .errors import DomainError


def _check_prob(p: float):
    if not 0.0 < p < 1.0:
        raise DomainError(f"probability must lie in (0, 1), got {p}")


def chi2_sf(x: float) -> float:
    """Right tail of the central chi-squared law with 1 dof."""
    if x <= 0.0:
        return 1.0
    return math.erfc(math.sqrt(0.5 * x))


def chi2_isf(p: float) -> float:
    """Threshold ``x`` with ``chi2_sf(x) = p``."""
    _check_prob(p)
    return 2.0 * float(special.erfcinv(p)) ** 2


def noncentral_chi2_sf(x: float, lam: float) -> float:
    """Right tail of the noncentral chi-squared law with 1 dof."""
    if lam < 0.0:
        raise DomainError(f"noncentrality must be nonnegative, got {lam}")
    # the series can overshoot 1 by a few ulps near x = 0
    return min(max(float(kernels.ncx2_sf(float(x), float(lam))), 0.0), 1.0)


def normal_quantile(p: float) -> float:
    """Inverse standard normal CDF."""
    _check_prob(p)
    return float(special.ndtri(p))

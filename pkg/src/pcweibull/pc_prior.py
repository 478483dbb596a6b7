"""Penalized-complexity prior for the Weibull shape.

The prior puts an exponential law with rate ``theta`` on the distance
d(alpha) to the exponential model and maps it back to the shape scale:

    pi(alpha) = w * theta * exp(-theta d(alpha)) * |d'(alpha)|

Because d is two-to-one, the formula without weights carries mass 2 over
(0, inf). Each branch (alpha <= 1, alpha >= 1) gets weight w = 1/2, which
keeps d(A) ~ Exp(theta) exactly and makes the prior proper.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .divergence import (
    Branch,
    alpha_from_distance,
    alpha_from_distance_array,
    distance_array,
    distance_log_alpha,
    distance_slope_log_alpha,
)
from .exceptions import DomainError
from .numerics import make_rng

log = logging.getLogger(__name__)

DEFAULT_THETA = 2.5
BRANCH_WEIGHT = 0.5


@dataclass(frozen=True)
class PcPriorSpec:
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        if not self.theta > 0:
            raise DomainError("theta must be positive")

    def log_density(self, alpha):
        return log_density(alpha, self)

    def density(self, alpha):
        return density(alpha, self)


@dataclass(frozen=True)
class TailSpec:
    """Tail statement P(d(alpha) > U) = p."""

    U: float
    p: float

    def __post_init__(self):
        if not self.U > 0:
            raise DomainError("U must be positive")
        if not 0 < self.p < 1:
            raise DomainError("p must lie in (0, 1)")


def theta_from_tail(t: TailSpec) -> PcPriorSpec:
    return PcPriorSpec(-math.log(t.p) / t.U)


def log_density_log_alpha(u, spec: PcPriorSpec):
    """Log density of log(alpha) under the prior, stable for any real ``u``.

    This is the same prior expressed on the log scale (it includes the
    Jacobian alpha), computed without ever forming alpha itself.
    """
    scalar = np.ndim(u) == 0
    u = np.array(u, dtype=float, ndmin=1)
    d = distance_log_alpha(u)
    slope = np.abs(distance_slope_log_alpha(u))
    with np.errstate(invalid="ignore", divide="ignore"):
        out = math.log(BRANCH_WEIGHT * spec.theta) - spec.theta * d + np.log(slope)
    out = np.where(np.isinf(d), -np.inf, out)
    return float(out[0]) if scalar else out


def log_density(alpha, spec: PcPriorSpec):
    """Log prior density; ``-inf`` where the distance saturates (alpha < 0.01)."""
    scalar = np.ndim(alpha) == 0
    a = np.array(alpha, dtype=float, ndmin=1)
    if np.any(~(a > 0)):
        raise DomainError("shape alpha must be positive")
    u = np.log(a)
    out = log_density_log_alpha(u, spec) - u
    return float(out[0]) if scalar else out


def density(alpha, spec: PcPriorSpec):
    out = np.exp(log_density(alpha, spec))
    return float(out) if np.ndim(alpha) == 0 else out


def cdf(alpha, spec: PcPriorSpec):
    scalar = np.ndim(alpha) == 0
    a = np.atleast_1d(np.asarray(alpha, dtype=float))
    tail = BRANCH_WEIGHT * np.exp(-spec.theta * distance_array(a))
    out = np.where(a <= 1.0, tail, 1.0 - tail)
    return float(out[0]) if scalar else out


def quantile(q, spec: PcPriorSpec):
    """Inverse of :func:`cdf`; scalar or array ``q`` in (0, 1)."""
    if np.ndim(q):
        return np.array([quantile(float(v), spec) for v in np.ravel(q)]).reshape(np.shape(q))
    q = float(q)
    if not 0 < q < 1:
        raise DomainError("quantile level must lie in (0, 1)")
    if q == 0.5:
        return 1.0
    if q < 0.5:
        return alpha_from_distance(-math.log(2.0 * q) / spec.theta, Branch.LOWER)
    return alpha_from_distance(-math.log(2.0 * (1.0 - q)) / spec.theta, Branch.UPPER)


def sample(n: int, spec: PcPriorSpec, seed, return_resampled=False):
    """Draw ``n`` shapes: branch ~ Bernoulli(1/2), d ~ Exp(theta), alpha = d^-1(d).

    Draws whose distance cannot be inverted in double precision are redrawn;
    the number of redraws is logged (and returned if ``return_resampled``).
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    rng = make_rng(seed)
    lower = rng.random(n) < BRANCH_WEIGHT
    d = rng.exponential(1.0 / spec.theta, n)
    alpha = alpha_from_distance_array(d, lower)
    redrawn = 0
    bad = np.isnan(alpha)
    while np.any(bad):
        k = int(bad.sum())
        redrawn += k
        lower[bad] = rng.random(k) < BRANCH_WEIGHT
        d[bad] = rng.exponential(1.0 / spec.theta, k)
        alpha[bad] = alpha_from_distance_array(d[bad], lower[bad])
        bad = np.isnan(alpha)
    if redrawn:
        log.warning("PC prior sampler redrew %d saturated draws (theta=%g)", redrawn, spec.theta)
    return (alpha, redrawn) if return_resampled else alpha

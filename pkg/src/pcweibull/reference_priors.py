"""Improper uniform and Gamma(a, a) shape priors, viewed on the distance scale.

The Gamma(a, a) prior is ambiguous in common usage. ``RATE`` is
alpha^(a-1) exp(-a alpha) a^a / Gamma(a) (mean 1); ``SCALE`` is
alpha^(a-1) exp(-alpha/a) / (Gamma(a) a^a) (mean a^2). The distance tables
for a = 1.5 and a = 0.1 are reproduced by ``SCALE``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .divergence import Branch, abs_distance_deriv_array, alpha_from_distance, alpha_from_distance_array
from .exceptions import DomainError
from .numerics import ln_gamma


class GammaConvention(enum.Enum):
    RATE = "rate"
    SCALE = "scale"


@dataclass(frozen=True)
class GammaPriorSpec:
    a: float
    convention: GammaConvention = GammaConvention.RATE

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("gamma prior parameter a must be positive")
        object.__setattr__(self, "convention", GammaConvention(self.convention))

    def log_density(self, alpha):
        return gamma_log_density(alpha, self)

    def density(self, alpha):
        return gamma_density(alpha, self)


@dataclass(frozen=True)
class ImproperUniform:
    """pi(alpha) proportional to 1 on (0, inf); not normalizable."""

    proper = False

    def log_density(self, alpha):
        return np.zeros_like(np.asarray(alpha, dtype=float)) if np.ndim(alpha) else 0.0

    def density(self, alpha):
        return improper_density(alpha)


def gamma_log_density(alpha, spec: GammaPriorSpec):
    scalar = np.ndim(alpha) == 0
    x = np.asarray(alpha, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("shape alpha must be positive")
    a = spec.a
    if spec.convention is GammaConvention.RATE:
        out = a * math.log(a) - ln_gamma(a) + (a - 1.0) * np.log(x) - a * x
    else:
        out = -a * math.log(a) - ln_gamma(a) + (a - 1.0) * np.log(x) - x / a
    return float(out) if scalar else out


def gamma_density(alpha, spec: GammaPriorSpec):
    out = np.exp(gamma_log_density(alpha, spec))
    return float(out) if np.ndim(alpha) == 0 else out


def improper_density(alpha):
    """Unnormalized constant density 1."""
    if np.any(~(np.asarray(alpha) > 0)):
        raise DomainError("shape alpha must be positive")
    return np.ones_like(np.asarray(alpha, dtype=float)) if np.ndim(alpha) else 1.0


@dataclass(frozen=True)
class DistanceTableRow:
    d: float
    alpha_lower: float
    dens_lower: float
    alpha_upper: float
    dens_upper: float


def distance_table(distances, prior) -> list[DistanceTableRow]:
    """For each distance, the two shapes at that distance and the prior density at each."""
    rows = []
    for d in distances:
        lo = alpha_from_distance(float(d), Branch.LOWER)
        hi = alpha_from_distance(float(d), Branch.UPPER)
        rows.append(DistanceTableRow(float(d), lo, float(prior.density(lo)), hi, float(prior.density(hi))))
    return rows


def prior_on_distance_scale(prior, branch: Branch, d_grid) -> np.ndarray:
    """Pushforward density of ``prior`` onto the distance, restricted to one branch.

    Returns an (m, 2) array of (d, pi(alpha(d)) / |d'(alpha(d))|). The branch
    curves together integrate to the prior's total mass.
    """
    d = np.asarray(d_grid, dtype=float)
    if np.any(~(d >= 0)) or not np.all(np.isfinite(d)):
        raise DomainError("distance grid must be finite and non-negative")
    lower = Branch(branch) is Branch.LOWER
    alpha = alpha_from_distance_array(d, lower)
    if np.any(np.isnan(alpha)):
        raise DomainError("distance grid exceeds the invertible range on this branch")
    dens = np.asarray(prior.density(alpha), dtype=float) / abs_distance_deriv_array(alpha)
    return np.column_stack([d, dens])

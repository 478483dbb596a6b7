"""Kullback-Leibler divergence from a Weibull to its exponential base model.

The base model is the same family with shape 1 and the same scale. Under
the scale parameterization (P2) the divergence depends on the shape only:

    KLD2(alpha) = (gamma - alpha (1 + gamma) + Gamma(1/alpha) + alpha log alpha) / alpha

and the distance is d(alpha) = sqrt(2 KLD2(alpha)). The distance is
two-to-one: every d > 0 is reached once with alpha < 1 and once with
alpha > 1.

Near alpha = 1 the closed form cancels catastrophically (the O(1) terms
sum to O((alpha - 1)^2)), so there the divergence is evaluated from its
power series in delta = 1/alpha - 1, whose constant and linear terms vanish
identically.
"""

from __future__ import annotations

import enum
import math
from typing import NamedTuple

import numpy as np

from .exceptions import DomainError, SaturationError
from .numerics import EULER_GAMMA, RootBracket, digamma, find_root, ln_gamma, zeta_int

# Gamma(1/alpha) overflows double precision for alpha below ~1/171.
ALPHA_FLOOR = 0.01
# Largest shape the upper-branch inversion will search to (d is ~37.1 there).
ALPHA_CEIL = 1e300
ROOT_TOL = 1e-10

_SERIES_RADIUS = 0.25
_SERIES_ORDER = 40


class Branch(enum.Enum):
    LOWER = "lower"  # alpha <= 1
    UPPER = "upper"  # alpha >= 1

    @classmethod
    def of(cls, alpha: float) -> "Branch":
        return cls.LOWER if alpha <= 1.0 else cls.UPPER


class DistanceValue(NamedTuple):
    d: float
    branch: Branch
    saturated: bool = False


def _kld_series_coefficients(order):
    g = EULER_GAMMA
    # ln Gamma(1 + delta) = -gamma delta + sum_k (-1)^k zeta(k) delta^k / k
    lg = np.zeros(order + 1)
    lg[1] = -g
    for k in range(2, order + 1):
        lg[k] = (-1) ** k * zeta_int(k) / k
    # exp of a power series: n e_n = sum_k k l_k e_{n-k}
    ex = np.zeros(order + 1)
    ex[0] = 1.0
    for n in range(1, order + 1):
        ex[n] = sum(k * lg[k] * ex[n - k] for k in range(1, n + 1)) / n
    a = ex.copy()
    a[0] += g
    b = a.copy()
    b[1:] += a[:-1]  # times (1 + delta)
    logx = np.zeros(order + 1)
    for k in range(1, order + 1):
        logx[k] = (-1) ** (k + 1) / k
    c = b - logx
    c[0] -= 1.0 + g
    # c[0] and c[1] vanish analytically; keep the exact zeros.
    return c[2:]


# KLD2 = delta^2 * sum_j _C[j] delta^j
_C = _kld_series_coefficients(_SERIES_ORDER)
# Curvature: KLD2 ~ _C[0] (alpha - 1)^2 near 1, so d ~ sqrt(2 _C[0]) |alpha - 1|.
DISTANCE_SLOPE_AT_ONE = math.sqrt(2.0 * _C[0])


_POWERS = np.arange(_C.size)
_DC = _C[1:] * _POWERS[1:]


def _series_s(delta):
    """s(delta) = sum_j _C[j] delta^j and its derivative, as one matrix product."""
    pw = delta[:, None] ** _POWERS
    return pw @ _C, pw[:, :-1] @ _DC


def _prep(alpha):
    scalar = np.ndim(alpha) == 0
    a = np.array(alpha, dtype=float, ndmin=1)
    if np.any(~(a > 0)):
        raise DomainError("shape alpha must be positive")
    return a, scalar


_LOG_FLOOR = math.log(ALPHA_FLOOR)


def _kld_and_slope(u):
    """KLD2 and dKLD2/du at log-shape ``u`` (array), plus the series mask.

    Working in u = log(alpha) keeps huge shapes (alpha beyond the float
    range) finite: with x = exp(-u), KLD2 = x gamma + Gamma(1 + x) - (1 + gamma) + u.
    """
    k = np.full_like(u, np.inf)
    dk = np.full_like(u, np.inf)
    with np.errstate(over="ignore"):
        delta = np.expm1(-u)
    near = np.abs(delta) <= _SERIES_RADIUS
    far = ~near & (u >= _LOG_FLOOR)
    if np.any(near):
        dn = delta[near]
        sv, ds = _series_s(dn)
        k[near] = dn * dn * sv
        # dK/ddelta times ddelta/du = -(1 + delta)
        dk[near] = -(1.0 + dn) * (2.0 * dn * sv + dn * dn * ds)
    if np.any(far):
        uf = u[far]
        x = np.exp(-uf)
        g1 = np.exp(ln_gamma(1.0 + x))
        k[far] = x * EULER_GAMMA + g1 - (1.0 + EULER_GAMMA) + uf
        # dK/dx = gamma + Gamma(1 + x) psi(1 + x) - 1/x and dx/du = -x.
        # Equivalent to the Gamma(1/alpha) psi(1/alpha) form since x Gamma(x) = Gamma(1 + x).
        dk[far] = 1.0 - x * (EULER_GAMMA + g1 * digamma(1.0 + x))
    return k, dk, near


def _distance_and_slope(u):
    """d and dd/du at log-shape ``u``; the slope at u = 0 is the upper-branch limit."""
    k, dk, near = _kld_and_slope(u)
    d = np.sqrt(2.0 * np.maximum(k, 0.0))
    slope = np.full_like(u, np.inf)
    if np.any(near):
        dn = np.expm1(-u[near])
        sv, ds = _series_s(dn)
        r = np.sqrt(2.0 * sv)
        d[near] = np.abs(dn) * r
        sgn = np.where(dn > 0, 1.0, -1.0)
        # d = |delta| r(delta), ddelta/du = -(1 + delta)
        slope[near] = -(1.0 + dn) * (sgn * r + np.abs(dn) * ds / r)
    far = ~near & np.isfinite(k)
    if np.any(far):
        slope[far] = dk[far] / d[far]
    return d, slope


def kld_p2(alpha):
    """KLD from Weibull(alpha, lam) to the exponential with the same scale (P2).

    Independent of lam. Returns ``inf`` (saturation) for alpha < ALPHA_FLOOR.
    """
    a, scalar = _prep(alpha)
    with np.errstate(divide="ignore"):
        k, _, _ = _kld_and_slope(np.log(a))
    out = np.maximum(k, 0.0)
    return float(out[0]) if scalar else out


def kld_p1(alpha, lam):
    """KLD for the rate parameterization (P1) with base rate equal to ``lam``.

    Unlike the P2 divergence this depends on ``lam``; with lam = 1 the two
    coincide.
    """
    a, scalar = _prep(alpha)
    if not np.all(np.asarray(lam) > 0):
        raise DomainError("lam must be positive")
    lam = np.broadcast_to(np.asarray(lam, dtype=float), a.shape)
    loglam = np.log(lam)
    x = 1.0 / a
    delta = x - 1.0
    near = np.abs(delta) <= _SERIES_RADIUS
    with np.errstate(over="ignore", invalid="ignore"):
        # Near alpha = 1: P2 divergence plus the lam-dependent correction
        # Gamma(1 + x) (lam^(-delta) - 1) + delta log lam, written as
        # (e^z - 1 - z) + (Gamma(1 + x) - 1)(e^z - 1) with z = -delta log lam.
        z = -delta * loglam
        near_val = kld_p2(a) + _expm1_minus_x(z) + np.expm1(ln_gamma(1.0 + x)) * np.expm1(z)
        far_val = (x * EULER_GAMMA - (1.0 + EULER_GAMMA) - np.log(x) + delta * loglam
                   + np.exp(ln_gamma(1.0 + x) - delta * loglam))
    out = np.where(near, near_val, far_val)
    out = np.where(a >= ALPHA_FLOOR, np.maximum(out, 0.0), np.inf)
    return float(out[0]) if scalar else out


def _expm1_minus_x(z):
    z = np.asarray(z, dtype=float)
    small = np.abs(z) < 0.5
    term = z * z / 2.0
    ser = np.zeros_like(z)
    for n in range(3, 24):
        ser = ser + term
        term = term * z / n
    return np.where(small, ser, np.expm1(z) - z)


def distance_log_alpha(u):
    """Vectorized distance as a function of u = log(alpha); valid for any real u."""
    scalar = np.ndim(u) == 0
    d, _ = _distance_and_slope(np.array(u, dtype=float, ndmin=1))
    return float(d[0]) if scalar else d


def distance_slope_log_alpha(u):
    """dd/du at u = log(alpha) (upper-branch limit at u = 0)."""
    scalar = np.ndim(u) == 0
    _, sl = _distance_and_slope(np.array(u, dtype=float, ndmin=1))
    return float(sl[0]) if scalar else sl


def distance_array(alpha):
    """Vectorized d(alpha) = sqrt(2 KLD2(alpha)); ``inf`` below ALPHA_FLOOR."""
    a, scalar = _prep(alpha)
    with np.errstate(divide="ignore"):
        d, _ = _distance_and_slope(np.log(a))
    return float(d[0]) if scalar else d


def distance(alpha: float) -> DistanceValue:
    d = distance_array(float(alpha))
    return DistanceValue(d, Branch.of(alpha), math.isinf(d))


def abs_distance_deriv_array(alpha):
    """|d'(alpha)|, finite everywhere including the limit at alpha = 1."""
    a, scalar = _prep(alpha)
    with np.errstate(divide="ignore"):
        _, sl = _distance_and_slope(np.log(a))
    out = np.abs(sl) / a
    return float(out[0]) if scalar else out


def distance_deriv(alpha: float) -> float:
    """Analytic derivative of d(alpha); negative for alpha < 1, positive above.

    Raises DomainError at alpha = 1 where d has a corner.
    """
    a = float(alpha)
    if not a > 0:
        raise DomainError("shape alpha must be positive")
    if a == 1.0:
        raise DomainError("distance is not differentiable at alpha = 1")
    if a < ALPHA_FLOOR:
        raise SaturationError(f"alpha={a} is below the overflow floor {ALPHA_FLOOR}")
    return distance_slope_log_alpha(math.log(a)) / a


def alpha_from_distance(d: float, branch: Branch, tol: float = ROOT_TOL) -> float:
    """The unique shape on ``branch`` whose distance to the base model is ``d``."""
    if not d >= 0:
        raise DomainError("distance must be non-negative")
    if d == 0:
        return 1.0
    branch = Branch(branch)

    def excess(a):
        return distance_array(a) - d

    if branch is Branch.LOWER:
        if d >= distance_array(ALPHA_FLOOR):
            raise SaturationError(
                f"d={d} exceeds the lower-branch range (alpha floor {ALPHA_FLOOR})"
            )
        return find_root(excess, RootBracket(ALPHA_FLOOR, 1.0, tol))
    hi = 2.0
    while distance_array(hi) <= d:
        hi *= 2.0
        if hi > ALPHA_CEIL:
            raise SaturationError(f"d={d} exceeds the upper-branch range")
    return find_root(excess, RootBracket(1.0, hi, tol))


def alpha_from_distance_array(d, lower, iters: int = 64):
    """Vectorized inversion by bisection on log(alpha).

    ``lower`` is a boolean mask selecting the branch per element. Elements
    whose distance lies beyond the branch's representable range come back as
    NaN.
    """
    d = np.asarray(d, dtype=float)
    lower = np.broadcast_to(np.asarray(lower, dtype=bool), d.shape)
    lo = np.where(lower, math.log(ALPHA_FLOOR), 0.0)
    hi = np.where(lower, 0.0, math.log(ALPHA_CEIL))
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        dm = distance_log_alpha(mid)
        # Lower branch: d decreases in alpha; upper branch: increases.
        go_right = np.where(lower, dm > d, dm < d)
        lo = np.where(go_right, mid, lo)
        hi = np.where(go_right, hi, mid)
    out = np.exp(0.5 * (lo + hi))
    dmax = np.where(lower, distance_array(ALPHA_FLOOR), distance_array(ALPHA_CEIL))
    out = np.where(d == 0, 1.0, out)
    return np.where(d >= dmax, np.nan, out)

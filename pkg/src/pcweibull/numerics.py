"""Special functions, adaptive quadrature, bracketed root finding and RNG.

Everything here is self-contained (numpy only) so that accuracy is pinned
by this module rather than by whichever scipy build is installed.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import BracketError, DomainError, QuadratureError

EULER_GAMMA = 0.57721566490153286061

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Bernoulli-number coefficients B_2k / (2k) for the digamma asymptotic series.
_DIGAMMA_ASYMP = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
_DIGAMMA_SHIFT = 10.0


def _as_output(x, scalar):
    return float(x) if scalar else x


def _check_positive(x, name):
    if np.any(~(x > 0)):
        raise DomainError(f"{name} requires x > 0")


def ln_gamma(x):
    """Natural log of the gamma function for positive real ``x``.

    Accepts scalars or arrays. Uses the Lanczos approximation for x >= 1/2
    and the reflection formula below that.
    """
    scalar = np.ndim(x) == 0
    x = np.asarray(x, dtype=float)
    _check_positive(x, "ln_gamma")
    small = x < 0.5
    # Reflection: ln G(x) = ln(pi / sin(pi x)) - ln G(1 - x).
    z = np.where(small, 1.0 - x, x) - 1.0
    acc = np.full_like(z, _LANCZOS_COEF[0])
    for i, c in enumerate(_LANCZOS_COEF[1:], start=1):
        acc = acc + c / (z + i)
    t = z + _LANCZOS_G + 0.5
    lg = _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(acc)
    with np.errstate(divide="ignore", invalid="ignore"):
        refl = np.log(np.pi / np.sin(np.pi * x)) - lg
    out = np.where(small, refl, lg)
    return _as_output(out, scalar)


def gamma_fn(x):
    """Gamma function via ``exp(ln_gamma(x))``; overflows to inf past ~171.6."""
    lg = ln_gamma(x)
    with np.errstate(over="ignore"):
        out = np.exp(lg)
    return float(out) if np.ndim(x) == 0 else out


def digamma(x):
    """Digamma function psi(x) = d/dx ln Gamma(x) for positive real ``x``.

    Shifts the argument up to x >= 10 with psi(x) = psi(x + 1) - 1/x, then
    sums the asymptotic series.
    """
    scalar = np.ndim(x) == 0
    x = np.array(x, dtype=float)
    _check_positive(x, "digamma")
    acc = np.zeros_like(x)
    while True:
        low = x < _DIGAMMA_SHIFT
        if not np.any(low):
            break
        acc = acc - np.where(low, 1.0 / x, 0.0)
        x = x + low
    inv2 = 1.0 / (x * x)
    series = np.zeros_like(x)
    for c in reversed(_DIGAMMA_ASYMP):
        series = (series + c) * inv2
    out = acc + np.log(x) - 0.5 / x - series
    return _as_output(out, scalar)


def zeta_int(k: int) -> float:
    """Riemann zeta at an integer k >= 2 (Euler-Maclaurin with N = 40)."""
    if k < 2:
        raise DomainError("zeta_int requires k >= 2")
    n = 40
    head = math.fsum(j ** -k for j in range(1, n))
    # Tail: integral + half endpoint + Bernoulli corrections.
    tail = n ** (1 - k) / (k - 1) + 0.5 * n ** -k
    tail += k * n ** (-k - 1) / 12.0
    tail -= k * (k + 1) * (k + 2) * n ** (-k - 3) / 720.0
    tail += k * (k + 1) * (k + 2) * (k + 3) * (k + 4) * n ** (-k - 5) / 30240.0
    return head + tail


# ---------------------------------------------------------------------------
# Quadrature

# Gauss-Kronrod 7/15 nodes on [-1, 1] (non-negative half).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WEIGHTS_K = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss weights live on the odd-indexed Kronrod nodes.
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[[1, 3, 5]] = _WG[:3]
_WEIGHTS_G[7] = _WG[3]
_WEIGHTS_G[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("quadrature tolerances must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


def _gk15(g, a, b):
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    fx = g(mid + half * _NODES)
    k = half * float(np.dot(_WEIGHTS_K, fx))
    gl = half * float(np.dot(_WEIGHTS_G, fx))
    return k, abs(k - gl)


def _mapped(fv, t, to_y):
    # Nodes that round onto t = 1 correspond to y = +-inf, where an
    # integrable f has already vanished.
    u = 1.0 - t
    inside = u > 0
    out = np.zeros_like(t)
    ui = u[inside]
    out[inside] = fv(to_y(t[inside], ui)) / (ui * ui)
    return out


def integrate(f, lo, hi, cfg: QuadratureConfig | None = None, vectorized=False):
    """Adaptive Gauss-Kronrod (7/15) integral of ``f`` over ``[lo, hi]``.

    ``hi`` may be ``+inf`` (and ``lo`` may be ``-inf``); infinite ranges are
    mapped onto a finite interval with y = lo + t / (1 - t). Panels are
    bisected in order of largest error estimate until the total error is
    within ``max(abs_tol, rel_tol * |I|)``.

    Set ``vectorized=True`` when ``f`` maps an array of nodes to an array.

    Raises QuadratureError (with the best estimate attached) when the budget
    of subdivisions runs out.
    """
    cfg = cfg or QuadratureConfig()
    lo, hi = float(lo), float(hi)
    if lo == hi:
        return 0.0
    if lo > hi:
        return -integrate(f, hi, lo, cfg, vectorized)

    if vectorized:
        fv = f
    else:
        def fv(x):
            return np.array([f(float(xi)) for xi in x])

    if math.isinf(lo) and math.isinf(hi):
        return (integrate(f, lo, 0.0, cfg, vectorized)
                + integrate(f, 0.0, hi, cfg, vectorized))
    if math.isinf(hi):
        def g(t):
            return _mapped(fv, t, lambda t, u: lo + t / u)
        a, b = 0.0, 1.0
    elif math.isinf(lo):
        def g(t):
            return _mapped(fv, t, lambda t, u: hi - t / u)
        a, b = 0.0, 1.0
    else:
        g, a, b = fv, lo, hi

    val, err = _gk15(g, a, b)
    # Max-heap on error; entries are (-err, a, b, val).
    heap = [(-err, a, b, val)]
    total, total_err = val, err
    n_sub = 1
    while total_err > max(cfg.abs_tol, cfg.rel_tol * abs(total)):
        if n_sub >= cfg.max_subdivisions:
            raise QuadratureError(
                f"no convergence after {n_sub} subdivisions "
                f"(estimate {total!r}, error {total_err:.3g})",
                total,
                total_err,
            )
        neg_err, pa, pb, pval = heapq.heappop(heap)
        pm = 0.5 * (pa + pb)
        v1, e1 = _gk15(g, pa, pm)
        v2, e2 = _gk15(g, pm, pb)
        heapq.heappush(heap, (-e1, pa, pm, v1))
        heapq.heappush(heap, (-e2, pm, pb, v2))
        n_sub += 1
        # Re-sum rather than update incrementally to avoid drift.
        total = math.fsum(item[3] for item in heap)
        total_err = math.fsum(-item[0] for item in heap)
    if not math.isfinite(total):
        raise QuadratureError("integrand produced non-finite values", total, total_err)
    return total


# ---------------------------------------------------------------------------
# Root finding


@dataclass(frozen=True)
class RootBracket:
    lo: float
    hi: float
    tol: float = 1e-10

    def __post_init__(self):
        if not self.lo < self.hi:
            raise BracketError(f"bracket requires lo < hi, got [{self.lo}, {self.hi}]")
        if not self.tol > 0:
            raise DomainError("root tolerance must be positive")


def find_root(f, bracket: RootBracket, max_iter: int = 200) -> float:
    """Brent's method on a sign-changing bracket.

    Combines inverse quadratic interpolation, secant steps and bisection;
    convergence is guaranteed once the bracket is valid.
    """
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise BracketError(
            f"no sign change on [{a}, {b}]: f(lo)={fa!r}, f(hi)={fb!r}"
        )
    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * np.finfo(float).eps * abs(b) + 0.5 * bracket.tol
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e, d = d, p / q
            else:
                d = e = xm
        else:
            d = e = xm
        a, fa = b, fb
        b += d if abs(d) > tol1 else math.copysign(tol1, xm)
        fb = f(b)
    return b


# ---------------------------------------------------------------------------
# Random streams


def make_rng(seed: int) -> np.random.Generator:
    """Deterministic PCG64 stream; split with ``rng.spawn(k)`` for parallel work."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))


def derive_seeds(seed: int, k: int) -> list[int]:
    """k independent 64-bit child seeds derived from ``seed``."""
    children = np.random.SeedSequence(seed).spawn(k)
    return [int(c.generate_state(1, dtype=np.uint64)[0]) for c in children]

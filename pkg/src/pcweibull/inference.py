"""Bayesian Weibull regression with right censoring.

Posterior for (alpha, beta) under an independent prior on the shape (PC,
Gamma or improper uniform) and N(0, sd^2) priors on the coefficients.
Two engines:

* ``grid``: deterministic tensor-grid quadrature over (log alpha, beta) for
  up to two coefficients (intercept plus one covariate).
* ``mcmc``: adaptive random-walk Metropolis on (log alpha, beta), any number
  of coefficients.

Both engines work on u = log(alpha); the shape prior is always applied on
alpha with the Jacobian e^u, so a prior defined for alpha is respected.
"""

from __future__ import annotations

import enum
import json
import logging
import math
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy import optimize, stats

from .divergence import ALPHA_FLOOR
from .exceptions import CapabilityError, DomainError, NumericError
from .numerics import make_rng
from .pc_prior import PcPriorSpec, log_density_log_alpha
from .reference_priors import GammaPriorSpec, ImproperUniform
from .weibull import SurvivalDataset, censored_loglik

log = logging.getLogger(__name__)

SENSITIVITY_THETAS = (0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


class Engine(enum.Enum):
    GRID = "grid"
    MCMC = "mcmc"
    BOTH = "both"


@dataclass(frozen=True)
class PriorChoice:
    alpha_prior: PcPriorSpec | GammaPriorSpec | ImproperUniform = field(default_factory=PcPriorSpec)
    beta_prior_sd: float | tuple[float, ...] = 10.0

    def __post_init__(self):
        if np.any(~(np.asarray(self.beta_prior_sd, dtype=float) > 0)):
            raise DomainError("beta_prior_sd must be positive")

    def beta_sd(self, k: int) -> np.ndarray:
        sd = np.broadcast_to(np.asarray(self.beta_prior_sd, dtype=float), (k,))
        return sd.copy()

    def log_prior_log_alpha(self, u):
        """Log prior density of u = log(alpha), Jacobian included."""
        p = self.alpha_prior
        if isinstance(p, PcPriorSpec):
            return log_density_log_alpha(u, p)
        with np.errstate(over="ignore"):
            return p.log_density(np.exp(u)) + u

    def log_prior_alpha(self, alpha):
        return self.log_prior_log_alpha(np.log(alpha)) - np.log(alpha)

    def log_prior_beta(self, beta) -> float:
        beta = np.asarray(beta, dtype=float)
        sd = self.beta_sd(beta.size)
        return float(np.sum(-0.5 * (beta / sd) ** 2 - np.log(sd) - _HALF_LOG_2PI))

    def label(self) -> str:
        p = self.alpha_prior
        if isinstance(p, PcPriorSpec):
            return f"pc(theta={p.theta:g})"
        if isinstance(p, GammaPriorSpec):
            return f"gamma(a={p.a:g}, {p.convention.value})"
        return "improper-uniform"


@dataclass(frozen=True)
class FitConfig:
    engine: Engine = Engine.GRID
    alpha_range: tuple[float, float] = (0.05, 20.0)
    grid_points: int = 400
    beta_grid_points: int = 200
    mcmc_iters: int = 50_000
    burn_in: int = 10_000
    seed: int = 0
    credible_level: float = 0.95

    def __post_init__(self):
        object.__setattr__(self, "engine", Engine(self.engine))
        lo, hi = self.alpha_range
        if not (ALPHA_FLOOR <= lo < 1.0 < hi):
            raise DomainError(f"alpha_range must satisfy {ALPHA_FLOOR} <= lo < 1 < hi")
        if self.grid_points < 50 or self.beta_grid_points < 50:
            raise DomainError("grid sizes must be >= 50")
        if not 0 <= self.burn_in < self.mcmc_iters:
            raise DomainError("burn_in must be smaller than mcmc_iters")
        if not 0 < self.credible_level < 1:
            raise DomainError("credible_level must lie in (0, 1)")


@dataclass(frozen=True)
class CoefSummary:
    mode: float
    mean: float
    sd: float
    ci: tuple[float, float]


@dataclass(frozen=True, eq=False)
class PosteriorResult:
    alpha_grid: np.ndarray
    alpha_density: np.ndarray
    alpha_mode: float
    alpha_mean: float
    alpha_sd: float
    alpha_ci: tuple[float, float]
    beta_summaries: tuple[CoefSummary, ...]
    engine_used: str
    prior: str
    diagnostics: dict
    warnings: tuple[str, ...] = ()
    samples: np.ndarray | None = None  # (draws, 1 + K) of (alpha, beta...) for MCMC

    @property
    def alpha_marginal(self) -> np.ndarray:
        return np.column_stack([self.alpha_grid, self.alpha_density])

    def prob_alpha_within(self, lo: float, hi: float) -> float:
        """Posterior P(lo < alpha < hi) from the marginal grid."""
        g, p = self.alpha_grid, self.alpha_density
        cdf = _cumtrapz(p, g)
        return float(np.interp(hi, g, cdf) - np.interp(lo, g, cdf))

    def summary(self) -> dict:
        return {
            "engine": self.engine_used,
            "prior": self.prior,
            "alpha": {
                "mode": self.alpha_mode,
                "mean": self.alpha_mean,
                "sd": self.alpha_sd,
                "ci": list(self.alpha_ci),
            },
            "beta": [
                {"mode": b.mode, "mean": b.mean, "sd": b.sd, "ci": list(b.ci)}
                for b in self.beta_summaries
            ],
            "diagnostics": self.diagnostics,
            "warnings": list(self.warnings),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.summary(), **kw)

    def write_marginal_csv(self, path, precision: int = 6) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("alpha,density\n")
            for a, p in zip(self.alpha_grid, self.alpha_density):
                fh.write(f"{a:.{precision}g},{p:.{precision}g}\n")


# ---------------------------------------------------------------------------
# Posterior density


def log_posterior(alpha: float, beta, data: SurvivalDataset, prior: PriorChoice) -> float:
    """Unnormalized log posterior density of (alpha, beta) on the alpha scale."""
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    lp = (censored_loglik(alpha, beta, data)
          + float(prior.log_prior_alpha(alpha))
          + prior.log_prior_beta(beta))
    if not math.isfinite(lp):
        raise NumericError(f"non-finite log posterior at alpha={alpha}, beta={list(np.ravel(beta))}")
    return lp


def log_posterior_grad_beta(alpha: float, beta, data: SurvivalDataset, prior: PriorChoice):
    """Analytic gradient of :func:`log_posterior` with respect to beta."""
    beta = np.asarray(beta, dtype=float)
    eta = data.covariates @ beta
    za = np.exp(alpha * (np.log(data.times) - eta))
    return data.covariates.T @ (alpha * (za - data.events)) - beta / prior.beta_sd(beta.size) ** 2


def _beta_hessian(alpha, beta, data, prior):
    eta = data.covariates @ beta
    za = np.exp(alpha * (np.log(data.times) - eta))
    x = data.covariates
    return -(alpha * alpha) * (x.T * za) @ x - np.diag(1.0 / prior.beta_sd(beta.size) ** 2)


def _conditional_beta_mode(alpha, data, prior, beta0=None, iters=100):
    """Newton ascent for beta at fixed alpha (the conditional is log-concave)."""
    beta = np.zeros(data.k) if beta0 is None else np.array(beta0, dtype=float)
    f_old = None
    for _ in range(iters):
        g = log_posterior_grad_beta(alpha, beta, data, prior)
        h = _beta_hessian(alpha, beta, data, prior)
        step = np.linalg.solve(h, -g)
        # Halve the step until the objective increases.
        f0 = censored_loglik(alpha, beta, data) + prior.log_prior_beta(beta)
        t = 1.0
        while t > 1e-8:
            cand = beta + t * step
            with np.errstate(over="ignore"):
                try:
                    f1 = censored_loglik(alpha, cand, data) + prior.log_prior_beta(cand)
                except NumericError:
                    f1 = -math.inf
            if f1 >= f0:
                break
            t *= 0.5
        beta = cand
        if np.max(np.abs(t * step)) < 1e-10 or (f_old is not None and abs(f1 - f_old) < 1e-13):
            break
        f_old = f1
    return beta, h


def _profile(u, data, prior, beta0=None):
    """Profile log posterior over beta at u = log(alpha) (shape prior excluded)."""
    alpha = math.exp(u)
    beta, h = _conditional_beta_mode(alpha, data, prior, beta0)
    val = censored_loglik(alpha, beta, data) + prior.log_prior_beta(beta)
    return val, beta, h


def _find_mode(data, prior, cfg):
    """Joint posterior mode on the log-alpha scale plus local widths.

    The u-width comes from the curvature of the smooth profile likelihood,
    so a kink in the shape prior at alpha = 1 does not spoil it.
    """
    lo, hi = np.log(cfg.alpha_range)
    cache = {}

    def neg(u):
        val, beta, _ = _profile(u, data, prior, cache.get("beta"))
        cache["beta"] = beta
        return -(val + float(prior.log_prior_log_alpha(u)))

    # Coarse scan then bounded refinement; robust to the kink at u = 0.
    scan = np.linspace(lo, hi, 61)
    vals = np.array([neg(u) for u in scan])
    i = int(np.argmin(vals))
    a, b = scan[max(i - 1, 0)], scan[min(i + 1, scan.size - 1)]
    res = optimize.minimize_scalar(neg, bounds=(a, b), method="bounded",
                                   options={"xatol": 1e-9})
    u_mode = float(res.x)
    if abs(u_mode) < 1e-6:
        u_mode = 0.0
    _, beta_mode, h = _profile(u_mode, data, prior)
    step = 1e-3
    prof = [_profile(u_mode + s * step, data, prior, beta_mode)[0] for s in (-1, 0, 1)]
    curv = -(prof[0] - 2 * prof[1] + prof[2]) / step ** 2
    sd_u = 1.0 / math.sqrt(curv) if curv > 0 else 0.5
    sd_beta = np.sqrt(np.diag(np.linalg.inv(-h)))
    return u_mode, beta_mode, sd_u, sd_beta


# ---------------------------------------------------------------------------
# Grid engine


def _trapz_weights(x):
    w = np.zeros_like(x)
    dx = np.diff(x)
    w[:-1] += 0.5 * dx
    w[1:] += 0.5 * dx
    return w


def _cumtrapz(y, x):
    out = np.zeros_like(y)
    out[1:] = np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(x))
    return out


def _constant_column(x):
    for j in range(x.shape[1]):
        col = x[:, j]
        if np.all(col == col[0]) and col[0] != 0:
            return j
    return None


def grid_log_posterior(u_grid, beta_axes, data: SurvivalDataset, prior: PriorChoice):
    """Log posterior on the (log alpha) x beta tensor grid, u-scale Jacobian included.

    Returns an array of shape (len(u_grid), *[len(ax) for ax in beta_axes]).
    With two coefficients one column must be constant (an intercept); its
    factor is pulled out of the sum so the cost stays O(n * m) per shape.
    """
    k = data.k
    if k > 2:
        raise CapabilityError("grid engine handles at most 2 coefficients; use the mcmc engine")
    if len(beta_axes) != k:
        raise DomainError("need one beta axis per coefficient")
    x = data.covariates
    logy = np.log(data.times)
    dvec = data.events.astype(float)
    n_ev = dvec.sum()
    sum_d_logy = float(dvec @ logy)
    sd = prior.beta_sd(k)
    axes = [np.asarray(ax, dtype=float) for ax in beta_axes]
    beta_lp = [-0.5 * (ax / s) ** 2 - math.log(s) - _HALF_LOG_2PI for ax, s in zip(axes, sd)]
    prior_u = np.asarray(prior.log_prior_log_alpha(np.asarray(u_grid, dtype=float)), dtype=float)

    j_const = _constant_column(x) if k == 2 else None
    if k == 2 and j_const is None:
        raise CapabilityError("grid engine with 2 coefficients needs an intercept column; use mcmc")

    shape = (len(u_grid),) + tuple(ax.size for ax in axes)
    out = np.empty(shape)
    for i, u in enumerate(u_grid):
        a = math.exp(u)
        base = n_ev * math.log(a) + (a - 1.0) * sum_d_logy + prior_u[i]
        if k == 1:
            eta = np.outer(x[:, 0], axes[0])  # (n, m)
            cum = np.exp(a * (logy[:, None] - eta)).sum(axis=0)
            lin = a * (dvec @ eta)
            out[i] = base - lin - cum + beta_lp[0]
        else:
            jc, jv = j_const, 1 - j_const
            c = x[0, jc]
            bc, bv = axes[jc], axes[jv]
            xv = x[:, jv]
            # sum_i y_i^a exp(-a x_i bv): shape (m_v,)
            tv = np.exp(a * (logy[:, None] - np.outer(xv, bv)))
            t_sum = tv.sum(axis=0)
            lin_v = a * float(dvec @ xv) * bv
            lin_c = a * c * n_ev * bc
            scale_c = np.exp(-a * c * bc)
            # (m_c, m_v) slab indexed [beta_c, beta_v]
            slab = (base - lin_c[:, None] - lin_v[None, :]
                    - scale_c[:, None] * t_sum[None, :]
                    + beta_lp[jc][:, None] + beta_lp[jv][None, :])
            out[i] = slab if jc == 0 else slab.T
    return out


def _grid_pass(u_grid, beta_axes, data, prior):
    """Normalized marginal densities on each grid axis (u first, then each beta)."""
    lp = grid_log_posterior(u_grid, beta_axes, data, prior)
    if np.any(np.isnan(lp)):
        raise NumericError("NaN in grid log posterior")
    p = np.exp(lp - np.max(lp))
    weights = [_trapz_weights(u_grid)] + [_trapz_weights(ax) for ax in beta_axes]
    marginals = []
    for axis in range(p.ndim):
        # Integrate out every other axis with its trapezoid weights.
        m = p
        for other in range(p.ndim - 1, -1, -1):
            if other != axis:
                m = np.tensordot(m, weights[other], axes=([other], [0]))
        marginals.append(m)
    mass = float(np.dot(marginals[0], weights[0]))
    marginals = [m / mass for m in marginals]
    return marginals[0], marginals[1:]


def _edge_ratio(dens):
    m = np.max(dens)
    return max(dens[0], dens[-1]) / m if m > 0 else 1.0


def _summaries_from_density(x, dens, level):
    cdf = _cumtrapz(dens, x)
    total = cdf[-1]
    cdf = cdf / total
    dens = dens / total
    mean = float(np.trapezoid(x * dens, x))
    sd = float(math.sqrt(max(np.trapezoid((x - mean) ** 2 * dens, x), 0.0)))
    tail = 0.5 * (1.0 - level)
    ci = (float(np.interp(tail, cdf, x)), float(np.interp(1.0 - tail, cdf, x)))
    mode = float(x[int(np.argmax(dens))])
    return mode, mean, sd, ci


def fit_grid(data: SurvivalDataset, prior: PriorChoice, cfg: FitConfig) -> PosteriorResult:
    """Deterministic tensor-grid posterior (K <= 2).

    The grid is centred on the posterior mode and widened until every
    marginal has decayed below 1e-9 of its peak at the grid edges (or the
    alpha window has reached ``cfg.alpha_range``).
    """
    if data.k > 2:
        raise CapabilityError("grid engine handles at most 2 coefficients; use the mcmc engine")
    if data.n_events == 0:
        raise DomainError("fitting requires at least one observed event")
    u_lo, u_hi = np.log(cfg.alpha_range)
    u_mode, beta_mode, sd_u, sd_beta = _find_mode(data, prior, cfg)

    # Beta centre moves with alpha; take the span of conditional modes across the u window.
    half_u = 12.0 * sd_u
    half_b = 12.0 * sd_beta
    warnings = []
    for attempt in range(8):
        ua, ub = max(u_lo, u_mode - half_u), min(u_hi, u_mode + half_u)
        ends = [_conditional_beta_mode(math.exp(v), data, prior, beta_mode)[0] for v in (ua, ub)]
        b_lo = np.minimum.reduce([beta_mode, *ends]) - half_b
        b_hi = np.maximum.reduce([beta_mode, *ends]) + half_b
        u_grid = np.linspace(ua, ub, cfg.grid_points)
        if ua < 0.0 < ub and not np.any(u_grid == 0.0):
            # Put a node on the kink at alpha = 1.
            u_grid[np.argmin(np.abs(u_grid))] = 0.0
        beta_axes = [np.linspace(b_lo[j], b_hi[j], cfg.beta_grid_points) for j in range(data.k)]
        p_u, beta_marg = _grid_pass(u_grid, beta_axes, data, prior)
        r_lo = p_u[0] / p_u.max()
        r_hi = p_u[-1] / p_u.max()
        widen_u = (r_lo > 1e-9 and ua > u_lo) or (r_hi > 1e-9 and ub < u_hi)
        widen_b = [_edge_ratio(m) > 1e-9 for m in beta_marg]
        if not widen_u and not any(widen_b):
            break
        if widen_u:
            half_u *= 1.5
        half_b = np.where(widen_b, half_b * 1.5, half_b)
    else:
        warnings.append("grid window did not fully contain the posterior after 8 widenings")

    # Mass outside alpha_range, extrapolating the edge density over one width.
    clipped_mass = 0.0
    if ua <= u_lo + 1e-12:
        clipped_mass += p_u[0] * sd_u
    if ub >= u_hi - 1e-12:
        clipped_mass += p_u[-1] * sd_u
    range_mass = 1.0 - clipped_mass
    if range_mass < 0.999:
        warnings.append(f"only ~{range_mass:.4f} of the posterior mass lies inside alpha_range")

    alpha = np.exp(u_grid)
    dens_alpha = p_u / alpha
    dens_alpha = dens_alpha / np.trapezoid(dens_alpha, alpha)
    mode, _, _, _ = _summaries_from_density(alpha, dens_alpha, cfg.credible_level)
    # Expectations and quantiles on the u grid, where the quadrature was done.
    mean = float(np.trapezoid(alpha * p_u, u_grid))
    sd = float(math.sqrt(max(np.trapezoid((alpha - mean) ** 2 * p_u, u_grid), 0.0)))
    cdf_u = _cumtrapz(p_u, u_grid)
    cdf_u /= cdf_u[-1]
    tail = 0.5 * (1.0 - cfg.credible_level)
    ci = (float(math.exp(np.interp(tail, cdf_u, u_grid))),
          float(math.exp(np.interp(1.0 - tail, cdf_u, u_grid))))
    betas = tuple(
        CoefSummary(*_summaries_from_density(ax, m, cfg.credible_level))
        for ax, m in zip(beta_axes, beta_marg)
    )
    diagnostics = {
        "grid_mass_captured": range_mass,
        "alpha_window": [float(alpha[0]), float(alpha[-1])],
        "grid_shape": [len(u_grid)] + [ax.size for ax in beta_axes],
        "widenings": attempt,
    }
    for w in warnings:
        log.warning(w)
    return PosteriorResult(alpha, dens_alpha, mode, mean, sd, ci, betas, Engine.GRID.value,
                           prior.label(), diagnostics, tuple(warnings))


# ---------------------------------------------------------------------------
# MCMC engine


def effective_sample_size(x) -> float:
    """ESS from the initial positive sequence of autocorrelation pair sums."""
    x = np.asarray(x, dtype=float)
    n = x.size
    if n < 4 or np.var(x) == 0:
        return float(n)
    xc = x - x.mean()
    f = np.fft.rfft(xc, 2 * n)
    acf = np.fft.irfft(f * np.conj(f))[:n]
    acf /= acf[0]
    tau = -1.0
    for k in range(0, n - 1, 2):
        pair = acf[k] + acf[k + 1]
        if pair <= 0:
            break
        tau += 2.0 * pair
    return float(n / max(tau, 1e-12))


def _log_target(state, data, prior):
    u = state[0]
    beta = state[1:]
    alpha = math.exp(u)
    if not (ALPHA_FLOOR <= alpha < 1e6):
        return -math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        try:
            ll = censored_loglik(alpha, beta, data)
        except NumericError:
            return -math.inf
    return ll + float(prior.log_prior_log_alpha(u)) + prior.log_prior_beta(beta)


def fit_mcmc(data: SurvivalDataset, prior: PriorChoice, cfg: FitConfig) -> PosteriorResult:
    """Adaptive random-walk Metropolis on (log alpha, beta).

    During burn-in the proposal covariance follows the chain's empirical
    covariance and a global scale is tuned towards 0.234 acceptance; both
    are frozen afterwards so the kept draws come from a fixed kernel.
    """
    if data.n_events == 0:
        raise DomainError("fitting requires at least one observed event")
    rng = make_rng(cfg.seed)
    dim = 1 + data.k
    u0, b0, sd_u, sd_b = _find_mode(data, prior, cfg)
    state = np.concatenate([[u0], b0])
    # Jitter the start so the chain does not sit on the kink.
    state[0] += 0.1 * sd_u * rng.standard_normal()
    cov = np.diag(np.concatenate([[sd_u], sd_b]) ** 2)
    log_scale = math.log(2.38 ** 2 / dim)
    chol = np.linalg.cholesky(cov * math.exp(log_scale))
    lp = _log_target(state, data, prior)

    keep = cfg.mcmc_iters - cfg.burn_in
    draws = np.empty((keep, dim))
    hist = np.empty((cfg.burn_in, dim))
    batch = 100
    acc_batch = 0
    acc_kept = 0
    for it in range(cfg.mcmc_iters):
        prop = state + chol @ rng.standard_normal(dim)
        lp_prop = _log_target(prop, data, prior)
        accept = math.log(rng.random()) < lp_prop - lp
        if accept:
            state, lp = prop, lp_prop
        if it < cfg.burn_in:
            hist[it] = state
            acc_batch += accept
            if (it + 1) % batch == 0:
                rate = acc_batch / batch
                acc_batch = 0
                log_scale += (rate - 0.234) * min(1.0, 10.0 / math.sqrt((it + 1) / batch))
                if it + 1 >= 1000:
                    emp = np.cov(hist[(it + 1) // 2: it + 1].T) + 1e-10 * np.eye(dim)
                    cov = emp
                chol = np.linalg.cholesky(cov * math.exp(log_scale))
        else:
            draws[it - cfg.burn_in] = state
            acc_kept += accept

    acceptance = acc_kept / keep
    alpha_draws = np.exp(draws[:, 0])
    ess = effective_sample_size(alpha_draws)
    warnings = []
    if not 0.1 <= acceptance <= 0.6:
        warnings.append(f"acceptance rate {acceptance:.3f} outside [0.1, 0.6] after adaptation")
    if ess < 100:
        warnings.append(f"effective sample size {ess:.0f} < 100; chain may not have mixed")
    for w in warnings:
        log.warning(w)

    tail = 0.5 * (1.0 - cfg.credible_level)
    grid, dens = _kde_marginal(alpha_draws, cfg.grid_points, positive=True)
    alpha_ci = tuple(float(q) for q in np.quantile(alpha_draws, [tail, 1.0 - tail]))
    betas = []
    for j in range(data.k):
        bj = draws[:, 1 + j]
        bg, bd = _kde_marginal(bj, cfg.beta_grid_points)
        betas.append(CoefSummary(
            float(bg[np.argmax(bd)]), float(bj.mean()), float(bj.std(ddof=1)),
            tuple(float(q) for q in np.quantile(bj, [tail, 1.0 - tail])),
        ))
    diagnostics = {
        "acceptance_rate": acceptance,
        "ess_alpha": ess,
        "iterations": cfg.mcmc_iters,
        "burn_in": cfg.burn_in,
        "proposal_scale": math.exp(log_scale),
    }
    return PosteriorResult(
        grid, dens, float(grid[np.argmax(dens)]), float(alpha_draws.mean()),
        float(alpha_draws.std(ddof=1)), alpha_ci, tuple(betas), Engine.MCMC.value,
        prior.label(), diagnostics, tuple(warnings),
        samples=np.column_stack([alpha_draws, draws[:, 1:]]),
    )


def _kde_marginal(x, points, positive=False, max_kde=20_000):
    sub = x if x.size <= max_kde else x[:: int(math.ceil(x.size / max_kde))]
    kde = stats.gaussian_kde(sub)
    bw = float(np.sqrt(kde.covariance[0, 0]))
    lo, hi = x.min() - 4 * bw, x.max() + 4 * bw
    if positive:
        lo = max(lo, 1e-12)
    grid = np.linspace(lo, hi, points)
    dens = kde(grid)
    dens /= np.trapezoid(dens, grid)
    return grid, dens


# ---------------------------------------------------------------------------
# Dispatch


def fit(data: SurvivalDataset, prior: PriorChoice, cfg: FitConfig) -> PosteriorResult:
    engine = Engine(cfg.engine)
    if engine is Engine.GRID:
        return fit_grid(data, prior, cfg)
    if engine is Engine.MCMC:
        return fit_mcmc(data, prior, cfg)
    g = fit_grid(data, prior, cfg)
    m = fit_mcmc(data, prior, cfg)
    diag = dict(g.diagnostics)
    diag["mcmc"] = m.summary()["alpha"] | {
        "acceptance_rate": m.diagnostics["acceptance_rate"],
        "ess_alpha": m.diagnostics["ess_alpha"],
    }
    diag["engine_alpha_mean_diff"] = abs(g.alpha_mean - m.alpha_mean)
    return replace(g, engine_used=Engine.BOTH.value, diagnostics=diag,
                   warnings=g.warnings + m.warnings, samples=m.samples)


def sensitivity_sweep(data: SurvivalDataset, thetas=SENSITIVITY_THETAS, cfg: FitConfig | None = None,
                      beta_prior_sd=10.0):
    """One fit per PC-prior rate theta, everything else held fixed."""
    cfg = cfg or FitConfig()
    out = []
    for theta in thetas:
        if not theta > 0:
            raise DomainError("theta values must be positive")
        prior = PriorChoice(PcPriorSpec(float(theta)), beta_prior_sd)
        out.append((float(theta), fit(data, prior, cfg)))
    return out


def config_to_dict(cfg: FitConfig) -> dict:
    d = asdict(cfg)
    d["engine"] = cfg.engine.value
    d["alpha_range"] = list(cfg.alpha_range)
    return d

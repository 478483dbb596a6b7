"""Acceptance criteria, one check per criterion at its stated tolerance.

Run with pytest, or directly (``python3 tests/test_acceptance.py``) for a
one-line PASS/FAIL summary per criterion.
"""

import math
import sys
import time

import numpy as np
import pytest
from scipy import stats

from pcweibull.divergence import Branch, alpha_from_distance, distance_array, distance_deriv, kld_p1, kld_p2
from pcweibull.inference import SENSITIVITY_THETAS, FitConfig, PriorChoice, fit_grid, fit_mcmc, sensitivity_sweep
from pcweibull.numerics import QuadratureConfig, integrate
from pcweibull.pc_prior import PcPriorSpec, cdf, density, log_density_log_alpha, quantile, sample
from pcweibull.reference_priors import GammaPriorSpec, gamma_density
from pcweibull.weibull import Parameterization, WeibullParams, log_density, simulate


def _report(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok, detail


def c01_inversion():
    expect = {0.1: (0.93, 1.08), 0.5: (0.72, 1.53), 0.8: (0.62, 2.09), 1.45: (0.48, 4.93)}
    t0 = time.perf_counter()
    got = {d: (alpha_from_distance(d, Branch.LOWER), alpha_from_distance(d, Branch.UPPER)) for d in expect}
    elapsed = time.perf_counter() - t0
    err = max(abs(g - e) for d in expect for g, e in zip(got[d], expect[d]))
    return err <= 0.01 and elapsed < 1.0, f"max |err|={err:.4f}, {elapsed:.3f}s"


def c02_gamma_scale_a15_densities():
    spec = GammaPriorSpec(1.5, "scale")
    # (alpha_lower, alpha_upper) for d = 0.1, 0.5, 0.8, 1.45 and alpha = 1 at d = 0.
    alphas = [1.0]
    for d in (0.1, 0.5, 0.8, 1.45):
        alphas += [alpha_from_distance(d, Branch.LOWER), alpha_from_distance(d, Branch.UPPER)]
    expect = [0.315, 0.319, 0.311, 0.322, 0.274, 0.320, 0.220, 0.309, 0.051]
    got = [gamma_density(a, spec) for a in alphas]
    err = max(abs(g - e) for g, e in zip(got, expect))
    return err <= 0.002, f"max |err|={err:.5f}"


def c03_gamma_scale_a01_densities():
    spec = GammaPriorSpec(0.1, "scale")
    small = {a: gamma_density(a, spec) for a in (1.00, 0.93, 1.08, 0.72, 1.53)}
    d062 = gamma_density(0.62, spec)
    d048 = gamma_density(0.48, spec)
    ok_small = all(v < 1e-4 for v in small.values())
    ok = ok_small and abs(d062 - 0.0004) <= 0.0005 and abs(d048 - 0.002) <= 0.001
    worst = max(small, key=small.get)
    return ok, (f"max density on the '<0.0001' set is {small[worst]:.6f} at alpha={worst}; "
                f"0.62 -> {d062:.6f}; 0.48 -> {d048:.6f}")


def _kld_quadrature(param, a, lam):
    f = WeibullParams(a, lam, param)
    f0 = WeibullParams(1.0, lam, param)

    def g(s):
        y = np.exp(s)
        lf = log_density(y, f)
        with np.errstate(under="ignore"):
            return np.exp(lf + s) * (lf - log_density(y, f0))

    cfg = QuadratureConfig(abs_tol=1e-13, rel_tol=1e-13, max_subdivisions=1000)
    return integrate(g, -80.0, 14.0, cfg, vectorized=True)


def c04_kld_vs_quadrature():
    worst = 0.0
    lam_dependent = True
    for a in (0.5, 0.8, 1.2, 2.0, 5.0):
        p1 = []
        for lam in (0.5, 1.0, 2.0):
            worst = max(worst, abs(kld_p2(a) - _kld_quadrature(Parameterization.P2, a, lam)))
            v1 = kld_p1(a, lam)
            worst = max(worst, abs(v1 - _kld_quadrature(Parameterization.P1, a, lam)))
            p1.append(v1)
        lam_dependent &= np.ptp(p1) > 1e-6
    return worst < 1e-8 and lam_dependent, f"max |analytic - quadrature|={worst:.2e}, P1 varies with lam: {lam_dependent}"


def c05_pc_prior_proper():
    worst = 0.0
    for theta in (0.25, 0.5, 1.0, 2.5, 5.0):
        spec = PcPriorSpec(theta)
        # Same integral after alpha = e^u; heavy upper tails make alpha-space quadrature impractical.
        mass = integrate(lambda u: np.exp(log_density_log_alpha(u, spec)), -math.inf, math.inf, vectorized=True)
        worst = max(worst, abs(mass - 1.0))
    return worst <= 1e-6, f"max |mass - 1|={worst:.2e}"


def c06_roundtrips():
    worst = 0.0
    for theta in (0.5, 2.5):
        spec = PcPriorSpec(theta)
        for a in (0.3, 0.9, 1.5, 4.0):
            worst = max(worst, abs(quantile(cdf(a, spec), spec) - a))
    for a in (0.3, 0.9, 1.5, 4.0):
        worst = max(worst, abs(alpha_from_distance(distance_array(a), Branch.of(a)) - a))
    return worst <= 1e-8, f"max |roundtrip - alpha|={worst:.2e}"


def c07_derivative():
    worst = 0.0
    for a in (0.3, 0.7, 1.5, 3.0, 8.0):
        h = 1e-5 * a
        fd = (distance_array(a + h) - distance_array(a - h)) / (2 * h)
        worst = max(worst, abs(distance_deriv(a) - fd) / abs(fd))
    return worst <= 1e-6, f"max relative error={worst:.2e}"


def c08_mode_claim():
    grid = np.linspace(0.05, 3.0, 29501)
    modes = {t: float(grid[np.argmax(density(grid, PcPriorSpec(t)))]) for t in (0.5, 1.5, 2.5, 5.0)}
    ok = all(abs(modes[t] - 1) <= 1e-3 for t in (1.5, 2.5, 5.0)) and abs(modes[0.5] - 1) > 1e-3
    return ok, ", ".join(f"theta={t:g}: mode {m:.4f}" for t, m in modes.items())


def c09_sampler():
    n = 100_000
    crit = 1.6276 / math.sqrt(n)  # asymptotic 99% KS critical value
    parts, ok = [], True
    for theta in (1.0, 2.5):
        a = sample(n, PcPriorSpec(theta), seed=2024)
        ks = stats.kstest(distance_array(a), stats.expon(scale=1 / theta).cdf).statistic
        frac = float(np.mean(a < 1))
        ok &= ks < crit and abs(frac - 0.5) <= 0.01
        parts.append(f"theta={theta:g}: KS={ks:.4f} (crit {crit:.4f}), lower fraction={frac:.4f}")
    return ok, "; ".join(parts)


def _regression_data():
    return simulate(1.4, [0.3, 0.5], 500, censor_rate=0.2, seed=7)


def c10_posterior_recovery():
    t0 = time.perf_counter()
    data = _regression_data()
    prior = PriorChoice(PcPriorSpec(2.5), 10.0)
    g = fit_grid(data, prior, FitConfig())
    m = fit_mcmc(data, prior, FitConfig(engine="mcmc"))
    elapsed = time.perf_counter() - t0
    ok = abs(g.alpha_mean - 1.4) <= 0.15 and abs(g.alpha_mean - m.alpha_mean) <= 0.02 and elapsed < 120
    return ok, f"grid mean={g.alpha_mean:.4f}, mcmc mean={m.alpha_mean:.4f}, {elapsed:.1f}s"


def c11_coverage():
    covered = 0
    for seed in range(100):
        r = fit_grid(simulate(1.0, [0.0], 200, seed=seed), PriorChoice(), FitConfig())
        covered += r.alpha_ci[0] <= 1.0 <= r.alpha_ci[1]
    return covered >= 88, f"{covered}/100 intervals cover 1"


def c12_sensitivity():
    t0 = time.perf_counter()
    results = sensitivity_sweep(_regression_data(), SENSITIVITY_THETAS, FitConfig())
    means = [r.alpha_mean for _, r in results]
    spread = max(means) - min(means)
    elapsed = time.perf_counter() - t0
    ok = len(results) == 10 and spread < 0.1 and elapsed < 900
    return ok, f"spread of alpha means={spread:.4f} over {len(results)} thetas, {elapsed:.1f}s"


def c13_shrinkage():
    wins = 0
    pc = PriorChoice(PcPriorSpec(2.5))
    vague = PriorChoice(GammaPriorSpec(0.1, "rate"))
    for seed in range(100):
        data = simulate(1.0, [0.0], 50, seed=1000 + seed)
        a = fit_grid(data, pc, FitConfig()).prob_alpha_within(0.8, 1.2)
        b = fit_grid(data, vague, FitConfig()).prob_alpha_within(0.8, 1.2)
        wins += a > b
    return wins >= 90, f"PC more concentrated near 1 on {wins}/100 paired seeds (n=50)"


CRITERIA = [
    ("C1 distance-to-shape inversion", c01_inversion),
    ("C2 Gamma(1.5) densities at matched shapes", c02_gamma_scale_a15_densities),
    ("C3 Gamma(0.1) densities at matched shapes", c03_gamma_scale_a01_densities),
    ("C4 KLD closed form vs quadrature", c04_kld_vs_quadrature),
    ("C5 PC prior is proper", c05_pc_prior_proper),
    ("C6 roundtrips", c06_roundtrips),
    ("C7 derivative check", c07_derivative),
    ("C8 mode at the base model", c08_mode_claim),
    ("C9 sampler correctness", c09_sampler),
    ("C10 posterior recovery", c10_posterior_recovery),
    ("C11 credible interval coverage", c11_coverage),
    ("C12 sensitivity sweep", c12_sensitivity),
    ("C13 shrinkage contrast", c13_shrinkage),
]


@pytest.mark.parametrize("name,check", CRITERIA, ids=[c[0].split()[0] for c in CRITERIA])
def test_criterion(name, check):
    ok, detail = _report(name, *check())
    assert ok, detail


if __name__ == "__main__":
    results = [_report(name, *check())[0] for name, check in CRITERIA]
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from pcweibull.divergence import Branch
from pcweibull.exceptions import DomainError
from pcweibull.numerics import integrate
from pcweibull.pc_prior import PcPriorSpec
from pcweibull.reference_priors import (
    GammaConvention,
    GammaPriorSpec,
    ImproperUniform,
    distance_table,
    gamma_density,
    prior_on_distance_scale,
)


@given(st.floats(0.05, 10.0), st.floats(0.01, 30.0))
def test_gamma_conventions_match_scipy(a, x):
    rate = gamma_density(x, GammaPriorSpec(a, GammaConvention.RATE))
    scale = gamma_density(x, GammaPriorSpec(a, "scale"))
    assert rate == pytest.approx(stats.gamma.pdf(x, a, scale=1 / a), rel=1e-10, abs=1e-300)
    assert scale == pytest.approx(stats.gamma.pdf(x, a, scale=a), rel=1e-10, abs=1e-300)


def test_rate_form_has_unit_mean():
    spec = GammaPriorSpec(1.5)
    m = integrate(lambda x: x * spec.density(x), 0.0, math.inf)
    assert m == pytest.approx(1.0, abs=1e-8)


def test_unit_exponential_at_zero_distance():
    row = distance_table([0.0], GammaPriorSpec(1.0, "rate"))[0]
    assert row.dens_lower == pytest.approx(math.exp(-1)) and row.dens_upper == pytest.approx(math.exp(-1))


def test_improper_uniform():
    u = ImproperUniform()
    assert not u.proper and u.density(3.0) == 1.0 and u.log_density(3.0) == 0.0
    with pytest.raises(DomainError):
        u.density(-1.0)


@pytest.mark.parametrize("prior", [GammaPriorSpec(1.5, "scale"), GammaPriorSpec(2.0)])
def test_pushforward_mass_matches_prior_mass(prior):
    # Mass on d in [0, 2] equals prior mass on [alpha_lower(2), alpha_upper(2)].
    d = np.linspace(0.0, 2.0, 4001)
    lo = prior_on_distance_scale(prior, Branch.LOWER, d)
    hi = prior_on_distance_scale(prior, Branch.UPPER, d)
    mass_d = np.trapezoid(lo[:, 1] + hi[:, 1], d)
    row = distance_table([2.0], prior)[0]
    mass_a = integrate(prior.density, row.alpha_lower, row.alpha_upper)
    assert mass_d == pytest.approx(mass_a, abs=1e-5)


def test_pc_pushforward_is_exponential():
    theta = 2.5
    d = np.linspace(0.0, 5.0, 51)
    spec = PcPriorSpec(theta)
    for br in Branch:
        curve = prior_on_distance_scale(spec, br, d)
        np.testing.assert_allclose(curve[:, 1], 0.5 * theta * np.exp(-theta * d), rtol=1e-9)


def test_bad_distance_grid():
    with pytest.raises(DomainError):
        prior_on_distance_scale(GammaPriorSpec(1.0), Branch.LOWER, [-1.0])
    with pytest.raises(DomainError):
        GammaPriorSpec(0.0)

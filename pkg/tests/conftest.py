import numpy as np
import pytest
from hypothesis import settings

from pcweibull.weibull import simulate

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def exp_data():
    return simulate(1.0, [0.0], 200, seed=3)


@pytest.fixture(scope="session")
def reg_data():
    return simulate(1.4, [0.3, 0.5], 500, censor_rate=0.2, seed=7)


def kld_by_quadrature(log_f, log_f0):
    """KLD of f from f0 integrated over s = log(y) (smooth on the real line)."""
    from pcweibull.numerics import QuadratureConfig, integrate

    def g(s):
        y = np.exp(s)
        lf = log_f(y)
        with np.errstate(under="ignore"):
            return np.exp(lf + s) * (lf - log_f0(y))

    cfg = QuadratureConfig(abs_tol=1e-12, rel_tol=1e-12, max_subdivisions=500)
    return integrate(g, -60.0, 12.0, cfg, vectorized=True)

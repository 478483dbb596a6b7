"""Weibull sampling model, right-censored likelihood and a data simulator.

Two parameterizations are supported:

* ``P1``: f(y) = alpha y^(alpha-1) lam exp(-lam y^alpha), lam acts as a rate
  on the y^alpha scale.
* ``P2``: f(y) = (alpha/lam) (y/lam)^(alpha-1) exp(-(y/lam)^alpha), lam is a
  scale in the units of y.

Regression always uses P2 with lam_i = exp(x_i . beta), so a positive
coefficient lengthens survival times.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DomainError, NumericError
from .numerics import RootBracket, find_root, gamma_fn, make_rng


class Parameterization(enum.Enum):
    P1 = "P1"
    P2 = "P2"


@dataclass(frozen=True)
class WeibullParams:
    alpha: float
    lam: float = 1.0
    parameterization: Parameterization = Parameterization.P2

    def __post_init__(self):
        if not (self.alpha > 0 and self.lam > 0):
            raise DomainError("Weibull parameters require alpha > 0 and lam > 0")

    def to_p2(self) -> "WeibullParams":
        """Equivalent P2 parameters (P1 rate lam corresponds to scale lam^(-1/alpha))."""
        if self.parameterization is Parameterization.P2:
            return self
        return WeibullParams(self.alpha, self.lam ** (-1.0 / self.alpha), Parameterization.P2)


def _times(y):
    scalar = np.ndim(y) == 0
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise DomainError("Weibull functions require y > 0")
    return y, scalar


def _out(v, scalar):
    return float(v) if scalar else v


def log_survival(y, p: WeibullParams):
    y, scalar = _times(y)
    if p.parameterization is Parameterization.P1:
        out = -p.lam * y ** p.alpha
    else:
        out = -((y / p.lam) ** p.alpha)
    return _out(out, scalar)


def log_density(y, p: WeibullParams):
    y, scalar = _times(y)
    a, lam = p.alpha, p.lam
    if p.parameterization is Parameterization.P1:
        out = math.log(a) + (a - 1.0) * np.log(y) + math.log(lam) - lam * y ** a
    else:
        logz = np.log(y) - math.log(lam)
        out = math.log(a) - math.log(lam) + (a - 1.0) * logz - np.exp(a * logz)
    return _out(out, scalar)


def density(y, p: WeibullParams):
    return _out(np.exp(log_density(y, p)), np.ndim(y) == 0)


def survival(y, p: WeibullParams):
    return _out(np.exp(log_survival(y, p)), np.ndim(y) == 0)


def log_hazard(y, p: WeibullParams):
    y, scalar = _times(y)
    a, lam = p.alpha, p.lam
    if p.parameterization is Parameterization.P1:
        out = math.log(a) + math.log(lam) + (a - 1.0) * np.log(y)
    else:
        out = math.log(a) - a * math.log(lam) + (a - 1.0) * np.log(y)
    return _out(out, scalar)


def hazard(y, p: WeibullParams):
    return _out(np.exp(log_hazard(y, p)), np.ndim(y) == 0)


def mean(p: WeibullParams) -> float:
    q = p.to_p2()
    return q.lam * gamma_fn(1.0 + 1.0 / q.alpha)


# ---------------------------------------------------------------------------
# Data


class DatasetFormatError(ValueError):
    """Malformed survival CSV; message names the offending row/column."""


@dataclass(frozen=True, eq=False)
class SurvivalDataset:
    """Right-censored survival data. ``events[i] == 1`` marks an observed event."""

    times: np.ndarray
    events: np.ndarray
    covariates: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=float)
        events = np.array(self.events)
        x = np.array(self.covariates, dtype=float)
        if x.ndim == 1:
            x = x[:, None]
        if not (times.ndim == 1 and events.shape == times.shape and x.shape[0] == times.size):
            raise DomainError(
                f"length mismatch: times {times.shape}, events {events.shape}, "
                f"covariates {x.shape}"
            )
        if np.any(~(times > 0)):
            raise DomainError("all survival times must be strictly positive")
        if not np.all((events == 0) | (events == 1)):
            raise DomainError("event indicators must be 0 or 1")
        events = events.astype(np.int8)
        for name, arr in (("times", times), ("events", events), ("covariates", x)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.times.size

    @property
    def k(self) -> int:
        return self.covariates.shape[1]

    @property
    def n_events(self) -> int:
        return int(self.events.sum())

    def with_columns(self, order) -> "SurvivalDataset":
        return SurvivalDataset(self.times, self.events, self.covariates[:, list(order)])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["time", "event"] + [f"x{j + 1}" for j in range(self.k)])
            for t, e, row in zip(self.times, self.events, self.covariates):
                w.writerow([repr(float(t)), int(e)] + [repr(float(v)) for v in row])

    @classmethod
    def from_csv(cls, path) -> "SurvivalDataset":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise DatasetFormatError(f"{path}: empty file")
        header = [h.strip() for h in rows[0]]
        if len(header) < 3 or header[:2] != ["time", "event"]:
            raise DatasetFormatError(
                f"{path}: header must be 'time,event,x1,...,xK', got {','.join(header)!r}"
            )
        times, events, xs = [], [], []
        for lineno, row in enumerate(rows[1:], start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DatasetFormatError(
                    f"{path}: row {lineno} has {len(row)} fields, expected {len(header)}"
                )
            vals = []
            for col, cell in zip(header, row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise DatasetFormatError(
                        f"{path}: row {lineno}, column {col!r}: not a number: {cell!r}"
                    ) from None
            if not vals[0] > 0:
                raise DatasetFormatError(f"{path}: row {lineno}, column 'time': must be > 0")
            if vals[1] not in (0.0, 1.0):
                raise DatasetFormatError(f"{path}: row {lineno}, column 'event': must be 0 or 1")
            times.append(vals[0])
            events.append(int(vals[1]))
            xs.append(vals[2:])
        if not times:
            raise DatasetFormatError(f"{path}: no data rows")
        return cls(np.array(times), np.array(events), np.array(xs))


# ---------------------------------------------------------------------------
# Likelihood


def _loglik_terms(alpha, beta, data: SurvivalDataset):
    beta = np.asarray(beta, dtype=float).reshape(-1)
    if beta.size != data.k:
        raise DomainError(f"beta has length {beta.size}, data has {data.k} covariates")
    eta = data.covariates @ beta
    logz = np.log(data.times) - eta
    cum = np.exp(alpha * logz)
    return data.events * (math.log(alpha) - eta + (alpha - 1.0) * logz) - cum


def censored_loglik(alpha: float, beta, data: SurvivalDataset) -> float:
    """Right-censored Weibull (P2) log-likelihood with lam_i = exp(x_i . beta).

    Events contribute log f(y_i); censored rows contribute log S(y_i).
    """
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    with np.errstate(over="ignore", invalid="ignore"):
        terms = _loglik_terms(alpha, beta, data)
    total = float(terms.sum())
    if not math.isfinite(total):
        bad = int(np.flatnonzero(~np.isfinite(terms))[0]) if not np.all(np.isfinite(terms)) else None
        raise NumericError(f"non-finite log-likelihood (alpha={alpha}, observation {bad})", bad)
    return total


# ---------------------------------------------------------------------------
# Simulation


def simulate(alpha, beta, n, censor_rate=0.0, seed=0, covariates=None) -> SurvivalDataset:
    """Draw a right-censored Weibull regression dataset.

    Event times come from inverse-CDF sampling under P2. Censoring times are
    independent exponentials whose rate is chosen so that, given the drawn
    event times, the expected censored fraction equals ``censor_rate``.
    Without ``covariates`` the design is an intercept plus standard-normal
    columns, one per extra coefficient.
    """
    if not 0.0 <= censor_rate < 1.0:
        raise DomainError("censor_rate must lie in [0, 1)")
    if n < 1:
        raise DomainError("n must be >= 1")
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    rng = make_rng(seed)
    if covariates is None:
        x = np.ones((n, beta.size))
        if beta.size > 1:
            x[:, 1:] = rng.standard_normal((n, beta.size - 1))
    else:
        x = np.asarray(covariates, dtype=float).reshape(n, -1)
    scale = np.exp(x @ beta)
    t = scale * rng.standard_exponential(n) ** (1.0 / alpha)
    events = np.ones(n, dtype=np.int8)
    if censor_rate > 0:
        rate = _censoring_rate(t, censor_rate)
        c = rng.standard_exponential(n) / rate
        events = (t <= c).astype(np.int8)
        t = np.minimum(t, c)
    return SurvivalDataset(t, events, x)


def _censoring_rate(t, target):
    def excess(r):
        return float(np.mean(-np.expm1(-r * t))) - target

    hi = 1.0 / float(np.mean(t))
    while excess(hi) < 0:
        hi *= 2.0
    return find_root(excess, RootBracket(0.0, hi, tol=1e-12 * hi))

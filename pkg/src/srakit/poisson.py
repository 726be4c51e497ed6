"""Poisson (shifted-exponential) model of dark-count intervals.

For a Poisson process with rate ``rate`` and a non-paralyzable dead time
``dead_time`` the intervals have density ``rate * exp(-rate (x - dead_time))``
for ``x >= dead_time``. Combined with the plotting position of rank ``n``
this gives the ranked-sequence curve

    s_n = dead_time + ln(N / (n - 1)) / rate,   n = 2..N

(rank 1 diverges and is left out of every fit and residual sum).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .binning import BinningRule, Histogram, build_histogram
from .exceptions import (
    DegenerateVariance,
    DivergentRank,
    InconsistentDeadTime,
    NonPositiveScale,
    RankOutOfRange,
    TooFewPoints,
)
from .ranked import RankedSequence, build_sra
from .validation import check_intervals, check_positive_int

MLE = "mle"
SRA_LEAST_SQUARES = "sra-ls"
METHODS = (MLE, SRA_LEAST_SQUARES)


@dataclass(frozen=True)
class PoissonModel:
    rate: float
    dead_time: float = 0.0

    def __post_init__(self):
        rate = float(self.rate)
        dead_time = float(self.dead_time)
        if not (math.isfinite(rate) and rate > 0):
            raise ValueError(f"rate must be finite and > 0, got {self.rate}")
        if not (math.isfinite(dead_time) and dead_time >= 0):
            raise ValueError(f"dead_time must be finite and >= 0, got {self.dead_time}")
        object.__setattr__(self, "rate", rate)
        object.__setattr__(self, "dead_time", dead_time)

    @property
    def mean_interval(self) -> float:
        return self.dead_time + 1.0 / self.rate


@dataclass(frozen=True)
class PoissonFit:
    """Fitted model with its goodness of fit on the ranked sequence.

    ``r_squared`` is NaN when it cannot be computed (fewer than three
    points, or all ranked values from rank 2 on are equal).
    """

    model: PoissonModel
    method: str
    r_squared: float
    n_used: int

    @property
    def rate(self) -> float:
        return self.model.rate

    @property
    def residual_fraction(self) -> float:
        return 1.0 - self.r_squared


def model_density(model: PoissonModel, x):
    """Interval density; zero below the dead time. Scalar in, float out."""
    x_arr = np.asarray(x, dtype=np.float64)
    shifted = x_arr - model.dead_time
    with np.errstate(over="ignore"):
        dens = np.where(shifted >= 0, model.rate * np.exp(-model.rate * np.maximum(shifted, 0)), 0.0)
    return float(dens) if dens.ndim == 0 else dens


def model_sra(model: PoissonModel, n_total: int, rank):
    """Expected ranked interval at ``rank`` out of ``n_total``.

    ``rank`` may be an int or an integer array; every entry must lie in
    ``[2, n_total]``.
    """
    n_total = check_positive_int("n_total", n_total)
    r = np.asarray(rank)
    if not np.issubdtype(r.dtype, np.integer):
        if not np.all(np.mod(r, 1) == 0):
            raise ValueError("rank must be integral")
        r = r.astype(np.int64)
    if np.any(r == 1):
        raise DivergentRank("rank 1 diverges: ln(N / 0)")
    if np.any(r < 1) or np.any(r > n_total):
        raise RankOutOfRange(f"rank must be in [2, {n_total}]")
    val = model.dead_time + np.log(n_total / (r - 1.0)) / model.rate
    return float(val) if val.ndim == 0 else val


def _rank_log_terms(n_total: int) -> np.ndarray:
    # a_n = ln(N / (n - 1)) for n = 2..N
    return np.log(n_total / np.arange(1, n_total, dtype=np.float64))


def _r_squared(observed, predicted) -> float:
    observed = np.asarray(observed, dtype=np.float64)
    ss_tot = np.sum((observed - observed.mean()) ** 2)
    if ss_tot == 0:
        raise DegenerateVariance("observed values have zero variance")
    ss_res = np.sum((observed - predicted) ** 2)
    return float(1.0 - ss_res / ss_tot)


def r2_sra(sra, model: PoissonModel) -> float:
    """Coefficient of determination of the model curve against ranks 2..N."""
    if not isinstance(sra, RankedSequence):
        sra = build_sra(sra)
    n_total = len(sra)
    if n_total < 3:
        raise TooFewPoints("R^2 on a ranked sequence needs N >= 3")
    predicted = model.dead_time + _rank_log_terms(n_total) / model.rate
    return _r_squared(sra.values[1:], predicted)


def r2_hist(hist: Histogram, model: PoissonModel) -> float:
    """Coefficient of determination of the model density at the bin centres."""
    if hist.n_bins < 3:
        raise TooFewPoints("R^2 on a histogram needs at least 3 bins")
    return _r_squared(hist.densities, model_density(model, hist.centers))


def _safe_r2_sra(sra, model) -> float:
    try:
        return r2_sra(sra, model)
    except (TooFewPoints, DegenerateVariance):
        return math.nan


def _check_dead_time(dead_time) -> float:
    dead_time = float(dead_time)
    if not (math.isfinite(dead_time) and dead_time >= 0):
        raise ValueError(f"dead_time must be finite and >= 0, got {dead_time}")
    return dead_time


def fit_mle(sample, dead_time: float = 0.0) -> PoissonFit:
    """Maximum-likelihood rate of a shifted exponential with known dead time:
    ``1 / (mean - dead_time)``."""
    x = check_intervals(sample, copy=False)
    dead_time = _check_dead_time(dead_time)
    excess = float(np.mean(x)) - dead_time
    if excess <= 0:
        raise InconsistentDeadTime(
            f"sample mean {excess + dead_time!r} does not exceed dead time {dead_time!r}"
        )
    model = PoissonModel(1.0 / excess, dead_time)
    return PoissonFit(model, MLE, _safe_r2_sra(build_sra(x), model), int(x.size))


def fit_sra_least_squares(sra, dead_time: float = 0.0) -> PoissonFit:
    """Least-squares fit of the ranked-sequence curve, one free parameter.

    With ``a_n = ln(N / (n - 1))`` and ``t_n = s_n - dead_time`` for
    ``n = 2..N`` the model is ``t_n = a_n / rate``; the least-squares scale
    ``1 / rate = sum(a t) / sum(a a)`` has a closed form.
    """
    if not isinstance(sra, RankedSequence):
        sra = build_sra(sra)
    dead_time = _check_dead_time(dead_time)
    n_total = len(sra)
    if n_total < 3:
        raise TooFewPoints("SRA least squares needs N >= 3")
    a = _rank_log_terms(n_total)
    t = sra.values[1:] - dead_time
    cross = float(np.dot(a, t))
    if cross <= 0:
        raise NonPositiveScale("fitted scale 1/rate is not positive")
    model = PoissonModel(float(np.dot(a, a)) / cross, dead_time)
    return PoissonFit(model, SRA_LEAST_SQUARES, _safe_r2_sra(sra, model), n_total)


def fit(sample, method: str = MLE, dead_time: float = 0.0) -> PoissonFit:
    if method == MLE:
        return fit_mle(sample, dead_time)
    if method == SRA_LEAST_SQUARES:
        return fit_sra_least_squares(sample, dead_time)
    raise ValueError(f"unknown fit method {method!r}; expected one of {METHODS}")


@dataclass(frozen=True)
class FitComparison:
    """Same fitted model scored on the ranked sequence and on a histogram."""

    fit: PoissonFit
    histogram: Histogram
    r2_sra: float
    r2_hist: float
    scale: float

    @property
    def residual_sra(self) -> float:
        return 1.0 - self.r2_sra

    @property
    def residual_hist(self) -> float:
        return 1.0 - self.r2_hist

    @property
    def residual_ratio(self) -> float:
        """``(1 - R2_hist) / (1 - R2_sra)``; above 1 when the SRA fits better."""
        if self.residual_sra == 0:
            return math.inf if self.residual_hist > 0 else math.nan
        return self.residual_hist / self.residual_sra


def compare_fits(
    sample,
    method: str = MLE,
    dead_time: float = 0.0,
    rule=BinningRule.mann_wald(),
    normalize: bool = True,
    model: PoissonModel | None = None,
) -> FitComparison:
    """Fit one Poisson model and score it against both representations.

    With ``normalize=True`` intervals and dead time are divided by the
    sample mean first, so the rate comes out close to 1 and the R^2 values
    do not depend on the time unit. ``model`` skips fitting (rate and dead
    time are then taken in the original unit and rescaled the same way).
    """
    x = check_intervals(sample, copy=False)
    dead_time = _check_dead_time(dead_time)
    scale = float(np.mean(x)) if normalize else 1.0
    z = x / scale
    sra = build_sra(z)
    if model is None:
        fitted = fit(sra if method == SRA_LEAST_SQUARES else z, method, dead_time / scale)
    else:
        scaled = PoissonModel(model.rate * scale, model.dead_time / scale)
        fitted = PoissonFit(scaled, "fixed", _safe_r2_sra(sra, scaled), int(z.size))
    hist = build_histogram(z, rule)
    return FitComparison(
        fit=fitted,
        histogram=hist,
        r2_sra=r2_sra(sra, fitted.model),
        r2_hist=r2_hist(hist, fitted.model),
        scale=scale,
    )


__all__ = [
    "FitComparison",
    "METHODS",
    "MLE",
    "PoissonFit",
    "PoissonModel",
    "SRA_LEAST_SQUARES",
    "compare_fits",
    "fit",
    "fit_mle",
    "fit_sra_least_squares",
    "model_density",
    "model_sra",
    "r2_hist",
    "r2_sra",
]

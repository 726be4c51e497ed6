"""scikit-learn compatible wrappers.

The transformers work on a matrix ``X`` of shape ``(Q, N)``: one subsample of
``N`` intervals per row. :class:`SRATransformer` ranks every row,
:class:`HistogramTransformer` bins every row, and either output can go straight
into :func:`srakit.stability.deviation_factor`::

    rows = SRATransformer().fit_transform(X)
    eps = deviation_factor(rows)

:class:`PoissonIntervalModel` is a one-parameter estimator for a single
interval sample given as a 1-D array or an ``(n, 1)`` column.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .binning import BinningRule, bin_counts, build_histogram, equal_width_edges
from .exceptions import DegenerateRange, EdgesDoNotCover, InvalidInterval, TooFewPoints
from .poisson import (
    METHODS,
    MLE,
    fit,
    model_density,
    model_sra,
    r2_hist,
    r2_sra,
)
from .ranked import build_sra
from .stability import EDGE_MODES, PER_SUBSAMPLE, SHARED
from .validation import check_intervals


def check_subsamples(X) -> np.ndarray:
    """2-D float array of finite positive intervals, one subsample per row."""
    X = np.array(X, dtype=np.float64)
    if X.ndim == 1:
        X = X[None, :]
    if X.ndim != 2 or X.size == 0:
        raise ValueError(f"expected a non-empty (Q, N) array, got shape {X.shape}")
    bad = ~(np.isfinite(X) & (X > 0))
    if bad.any():
        q, k = np.argwhere(bad)[0]
        raise InvalidInterval(int(k), float(X[q, k]))
    return X


class SRATransformer(TransformerMixin, BaseEstimator):
    """Sort each row in descending order (the ranked sequence of each subsample).

    Stateless; ``fit`` only records the input width.
    """

    def fit(self, X, y=None):
        X = check_subsamples(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_subsamples(X)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} columns, transformer was fitted with {self.n_features_in_}"
            )
        return np.sort(X, axis=1)[:, ::-1].copy()

    def plotting_positions(self, n_total=None):
        """Plotting position of every output column, ``(N + 1 - n) / N``."""
        check_is_fitted(self, "n_features_in_")
        n_total = n_total or self.n_features_in_
        return (n_total + 1 - np.arange(1, n_total + 1)) / n_total


class HistogramTransformer(TransformerMixin, BaseEstimator):
    """Bin each row into equal-width bins.

    Parameters
    ----------
    rule : str, int or BinningRule
        Bin-count rule, applied to the row length seen in ``fit``.
    edges : {"per-subsample", "shared"}
        ``"per-subsample"`` splits each row's own range at transform time.
        ``"shared"`` learns one partition from the pooled range in ``fit``;
        at transform time values outside it are an error.
    output : {"counts", "density"}
    """

    def __init__(self, rule="mann-wald", edges=PER_SUBSAMPLE, output="counts"):
        self.rule = rule
        self.edges = edges
        self.output = output

    def fit(self, X, y=None):
        X = check_subsamples(X)
        if self.edges not in EDGE_MODES:
            raise ValueError(f"edges must be one of {EDGE_MODES}, got {self.edges!r}")
        if self.output not in ("counts", "density"):
            raise ValueError(f"output must be 'counts' or 'density', got {self.output!r}")
        self.rule_ = BinningRule.parse(self.rule)
        self.n_features_in_ = X.shape[1]
        self.n_bins_ = self.rule_.n_bins_for(X.shape[1])
        if self.edges == SHARED:
            self.edges_ = equal_width_edges(X.min(), X.max(), self.n_bins_)
        else:
            self.edges_ = None
        return self

    def transform(self, X):
        check_is_fitted(self, "n_bins_")
        X = check_subsamples(X)
        if self.edges_ is None:
            lo, hi = X.min(axis=1), X.max(axis=1)
            if np.any(hi == lo):
                raise DegenerateRange("a row has zero range")
            edges = equal_width_edges(lo, hi, self.n_bins_)
            widths = np.diff(edges, axis=1)
        else:
            edges = self.edges_
            if X.min() < edges[0] or X.max() > edges[-1]:
                raise EdgesDoNotCover("values fall outside the fitted shared edges")
            widths = np.diff(edges)[None, :]
        counts = bin_counts(X, edges)
        if self.output == "counts":
            return counts
        return counts / (X.shape[1] * widths)


class PoissonIntervalModel(BaseEstimator):
    """Shifted-exponential model of a single interval sample.

    Parameters
    ----------
    method : {"mle", "sra-ls"}
        Maximum likelihood, or least squares on the ranked sequence.
    dead_time : float
        Known dead time, same unit as the data.

    Attributes
    ----------
    model_ : PoissonModel
    rate_ : float
    fit_ : PoissonFit
    n_samples_fit_ : int
    """

    def __init__(self, method=MLE, dead_time=0.0):
        self.method = method
        self.dead_time = dead_time

    def fit(self, X, y=None):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        x = check_intervals(X)
        self.fit_ = fit(x, self.method, self.dead_time)
        self.model_ = self.fit_.model
        self.rate_ = self.model_.rate
        self.n_samples_fit_ = x.size
        return self

    def predict(self, ranks, n_total=None):
        """Expected ranked interval for each rank in ``[2, n_total]``."""
        check_is_fitted(self, "model_")
        ranks = np.asarray(ranks).ravel()
        return model_sra(self.model_, n_total or self.n_samples_fit_, ranks)

    def expected_sra(self, n_total=None):
        """Model curve for ranks ``2..n_total``."""
        check_is_fitted(self, "model_")
        n_total = n_total or self.n_samples_fit_
        if n_total < 2:
            raise TooFewPoints("model curve needs n_total >= 2")
        return model_sra(self.model_, n_total, np.arange(2, n_total + 1))

    def density(self, x):
        check_is_fitted(self, "model_")
        return model_density(self.model_, x)

    def score(self, X, y=None):
        """R^2 of the model curve against the ranked sequence of ``X``."""
        check_is_fitted(self, "model_")
        return r2_sra(build_sra(check_intervals(X)), self.model_)

    def score_histogram(self, X, rule="mann-wald"):
        """R^2 of the model density against the histogram of ``X`` at bin centres."""
        check_is_fitted(self, "model_")
        return r2_hist(build_histogram(check_intervals(X), rule), self.model_)


__all__ = [
    "HistogramTransformer",
    "PoissonIntervalModel",
    "SRATransformer",
    "check_subsamples",
]

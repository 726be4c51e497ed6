"""Equal-width histograms under the Sturges, Mann-Wald and N/10 bin-count rules."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateRange, EdgesDoNotCover, SRAError, TooFewPoints
from .validation import check_intervals, check_positive_int

STURGES = "sturges"
MANN_WALD = "mann-wald"
MAX_TENTH = "max-tenth"
EXPLICIT = "explicit"
_KINDS = (STURGES, MANN_WALD, MAX_TENTH, EXPLICIT)


def bins_sturges(n: int) -> int:
    """``ceil(log2 n) + 1``; 1 for a single point."""
    n = check_positive_int("n", n)
    # (n - 1).bit_length() == ceil(log2 n) for n >= 1, without float log
    return (n - 1).bit_length() + 1


def bins_mann_wald(n: int) -> int:
    """Mann-Wald bin count ``4 * (3 (n-1)^2 / 4) ** (1/5)``, rounded half up.

    Truncating would give 59 bins at n = 1000; rounding gives the commonly
    quoted 60.
    """
    n = check_positive_int("n", n)
    if n < 2:
        raise TooFewPoints("Mann-Wald rule needs n >= 2")
    raw = 4.0 * (3.0 * (n - 1) ** 2 / 4.0) ** 0.2
    return int(math.floor(raw + 0.5))


def bins_max_tenth(n: int) -> int:
    """``n // 10``, the finest partition usually considered sensible."""
    n = check_positive_int("n", n)
    if n < 10:
        raise TooFewPoints("N/10 rule needs n >= 10")
    return n // 10


@dataclass(frozen=True)
class BinningRule:
    """How many bins to use for a sample of size N.

    Build with the class methods or :meth:`parse`; ``n_bins`` is only used by
    the explicit rule.
    """

    kind: str = MANN_WALD
    n_bins: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown binning rule {self.kind!r}; expected one of {_KINDS}")
        if self.kind == EXPLICIT:
            object.__setattr__(self, "n_bins", check_positive_int("n_bins", self.n_bins))
        elif self.n_bins is not None:
            raise ValueError(f"n_bins is only meaningful for the explicit rule, not {self.kind!r}")

    @classmethod
    def sturges(cls):
        return cls(STURGES)

    @classmethod
    def mann_wald(cls):
        return cls(MANN_WALD)

    @classmethod
    def max_tenth(cls):
        return cls(MAX_TENTH)

    @classmethod
    def explicit(cls, n_bins: int):
        return cls(EXPLICIT, n_bins)

    @classmethod
    def parse(cls, spec) -> "BinningRule":
        """Accept a rule, an int (explicit bin count) or one of
        ``"sturges"``, ``"mann-wald"``, ``"max-tenth"``, ``"explicit:K"``, ``"K"``."""
        if isinstance(spec, BinningRule):
            return spec
        if isinstance(spec, (int, np.integer)) and not isinstance(spec, bool):
            return cls.explicit(int(spec))
        text = str(spec).strip().lower().replace("_", "-")
        aliases = {"mannwald": MANN_WALD, "maxtenth": MAX_TENTH, "n/10": MAX_TENTH}
        text = aliases.get(text, text)
        if text.startswith(EXPLICIT + ":"):
            text = text.split(":", 1)[1]
        if text.isdigit():
            return cls.explicit(int(text))
        return cls(text)

    def n_bins_for(self, n: int) -> int:
        if self.kind == STURGES:
            return bins_sturges(n)
        if self.kind == MANN_WALD:
            return bins_mann_wald(n)
        if self.kind == MAX_TENTH:
            return bins_max_tenth(n)
        return self.n_bins

    def __str__(self):
        return f"{EXPLICIT}:{self.n_bins}" if self.kind == EXPLICIT else self.kind


@dataclass(frozen=True, eq=False)
class Histogram:
    edges: np.ndarray
    counts: np.ndarray
    densities: np.ndarray
    rule: BinningRule
    n_source: int

    @property
    def n_bins(self) -> int:
        return self.counts.size

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.edges)

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.edges[:-1] + self.edges[1:])

    def __eq__(self, other):
        if not isinstance(other, Histogram):
            return NotImplemented
        return (
            self.rule == other.rule
            and self.n_source == other.n_source
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.counts, other.counts)
            and np.array_equal(self.densities, other.densities)
        )

    __hash__ = None


def equal_width_edges(lo, hi, n_bins: int) -> np.ndarray:
    """``n_bins + 1`` edges from ``lo`` to ``hi`` inclusive; broadcasts over arrays of bounds."""
    lo = np.asarray(lo, dtype=np.float64)
    hi = np.asarray(hi, dtype=np.float64)
    if np.any(hi <= lo):
        raise DegenerateRange("zero-width range: all values identical")
    edges = np.linspace(lo, hi, n_bins + 1, axis=-1)
    # linspace can land one ulp off the stop value for array bounds
    edges[..., 0] = lo
    edges[..., -1] = hi
    if np.any(np.diff(edges, axis=-1) <= 0):
        raise DegenerateRange(f"range too narrow to split into {n_bins} distinct bins")
    return edges


def bin_index(x, edges) -> np.ndarray:
    """Bin number of each value: bins are ``[e_m, e_{m+1})`` except the last, which is closed.

    ``edges`` is either one edge vector shared by all of ``x`` or, when ``x``
    is 2-D, one equal-width edge row per row of ``x``.
    """
    x = np.asarray(x, dtype=np.float64)
    edges = np.asarray(edges, dtype=np.float64)
    last = edges.shape[-1] - 2
    if edges.ndim == 1:
        idx = np.searchsorted(edges, x, side="right") - 1
        return np.clip(idx, 0, last)

    lo = edges[:, :1]
    hi = edges[:, -1:]
    idx = np.floor((x - lo) / (hi - lo) * (last + 1)).astype(np.intp)
    np.clip(idx, 0, last, out=idx)
    # the float guess can be one bin off near an edge; settle against the real edges
    while True:
        below = x < np.take_along_axis(edges, idx, axis=1)
        above = (idx < last) & (x >= np.take_along_axis(edges, idx + 1, axis=1))
        if not (below.any() or above.any()):
            return idx
        idx = idx - below + above


def bin_counts(rows, edges) -> np.ndarray:
    """Per-row bin counts, shape ``(Q, N_h)``."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    n_bins = np.asarray(edges).shape[-1] - 1
    idx = bin_index(rows, edges)
    offsets = np.arange(rows.shape[0])[:, None] * n_bins
    flat = np.bincount((idx + offsets).ravel(), minlength=rows.shape[0] * n_bins)
    return flat.reshape(rows.shape[0], n_bins)


def _check_override(edges, lo, hi) -> np.ndarray:
    edges = np.asarray(edges, dtype=np.float64)
    if edges.ndim != 1 or edges.size < 2:
        raise SRAError("edges_override needs at least two edges")
    if not np.all(np.isfinite(edges)) or np.any(np.diff(edges) <= 0):
        raise SRAError("edges_override must be finite and strictly increasing")
    if edges[0] > lo or edges[-1] < hi:
        raise EdgesDoNotCover(
            f"edges [{edges[0]}, {edges[-1]}] do not cover data range [{lo}, {hi}]"
        )
    return edges


def build_histogram(sample, rule=MANN_WALD, edges_override=None) -> Histogram:
    """Histogram of a sample.

    Parameters
    ----------
    sample : IntervalSample, RankedSequence or array_like
        Order does not matter: the result depends only on the multiset of
        values, so the histogram of a sample and of its SRA are identical.
    rule : BinningRule, str or int
        Bin-count rule applied to the sample size. Ignored when
        ``edges_override`` is given.
    edges_override : array_like, optional
        Explicit strictly increasing edges covering ``[min, max]``.

    Returns
    -------
    Histogram
        ``densities`` are ``count / (N * width)`` and integrate to 1.

    Raises
    ------
    DegenerateRange
        All values are identical and no edges were supplied.
    EdgesDoNotCover
        ``edges_override`` misses part of the data.
    """
    x = check_intervals(sample, copy=False)
    rule = BinningRule.parse(rule)
    lo, hi = float(x.min()), float(x.max())
    if edges_override is not None:
        edges = _check_override(edges_override, lo, hi)
        if rule.kind != EXPLICIT or rule.n_bins != edges.size - 1:
            rule = BinningRule.explicit(edges.size - 1)
    else:
        if hi == lo:
            raise DegenerateRange("zero-width range: all values identical")
        edges = equal_width_edges(lo, hi, rule.n_bins_for(x.size))
    counts = bin_counts(x, edges)[0]
    densities = counts / (x.size * np.diff(edges))
    return Histogram(edges, counts, densities, rule, int(x.size))


def normalized_coordinate(sample) -> np.ndarray:
    """Map each value to ``N (x - x_min) / (x_max - x_min)``, a number in ``[0, N]``."""
    x = check_intervals(sample, copy=False)
    lo, hi = x.min(), x.max()
    if hi == lo:
        raise DegenerateRange("zero-width range: all values identical")
    return x.size * (x - lo) / (hi - lo)

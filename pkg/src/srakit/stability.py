"""Subsample stability of SRA and histogram representations.

A record is cut into ``Q`` subsamples of length ``N``. Each subsample is turned
into a vector (its SRA, or its histogram counts), and the deviation factor

    eps = (1/Q) sum_k sum_q (x_qk - y_k)^2  /  sum_k (y_k - y)^2

with ``y_k`` the column mean over subsamples and ``y`` the grand mean measures
how much the representation scatters between subsamples relative to its own
structure. Smaller is more stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .binning import BinningRule, bin_counts, equal_width_edges
from .exceptions import DegenerateDenominator, DegenerateRange, InsufficientData, TooFewPoints
from .validation import check_intervals, check_positive_int, check_rows

DEFAULT_Q = 100
DEFAULT_GRID = tuple(range(20, 1001, 20))

PER_SUBSAMPLE = "per-subsample"
SHARED = "shared"
EDGE_MODES = (PER_SUBSAMPLE, SHARED)


@dataclass(frozen=True, eq=False)
class SubsampleSet:
    subsamples: np.ndarray

    def __post_init__(self):
        arr = np.array(self.subsamples, dtype=np.float64)
        if arr.ndim != 2:
            raise ValueError("subsamples must be Q rows of equal length")
        if arr.shape[0] < 2:
            raise TooFewPoints(f"need Q >= 2 subsamples, got {arr.shape[0]}")
        arr.setflags(write=False)
        object.__setattr__(self, "subsamples", arr)

    @property
    def q_count(self) -> int:
        return self.subsamples.shape[0]

    @property
    def n_len(self) -> int:
        return self.subsamples.shape[1]


@dataclass(frozen=True, eq=False)
class StabilityCurve:
    n_grid: np.ndarray
    eps_sra: np.ndarray
    eps_hist: np.ndarray
    q_count: int
    binning: BinningRule
    edges: str = PER_SUBSAMPLE

    def __len__(self):
        return len(self.n_grid)

    def at(self, n: int) -> tuple[float, float]:
        """``(eps_sra, eps_hist)`` at grid point ``n``."""
        hits = np.flatnonzero(self.n_grid == n)
        if hits.size == 0:
            raise KeyError(n)
        i = hits[0]
        return float(self.eps_sra[i]), float(self.eps_hist[i])

    def rows(self):
        for n, s, h in zip(self.n_grid, self.eps_sra, self.eps_hist):
            yield int(n), float(s), float(h)


def split_subsamples(sample, q: int, n: int, *, mode: str = "contiguous", seed=None) -> SubsampleSet:
    """Cut ``q`` non-overlapping blocks of length ``n`` out of a record.

    ``mode="contiguous"`` takes the first ``q`` blocks in order.
    ``mode="random"`` draws ``q`` distinct block-aligned positions with a
    seeded generator.
    """
    x = check_intervals(sample, copy=False)
    q = check_positive_int("q", q)
    n = check_positive_int("n", n)
    if q * n > x.size:
        raise InsufficientData(q * n, x.size)
    if mode == "contiguous":
        return SubsampleSet(x[: q * n].reshape(q, n))
    if mode == "random":
        rng = np.random.Generator(np.random.PCG64(seed))
        blocks = rng.choice(x.size // n, size=q, replace=False)
        starts = blocks * n
        return SubsampleSet(np.stack([x[s : s + n] for s in starts]))
    raise ValueError(f"unknown split mode {mode!r}")


def deviation_factor(rows) -> float:
    """Deviation factor of ``Q`` aligned rows (see module docstring)."""
    arr = check_rows(rows)
    # offsets from the first row are exactly zero for identical rows, so eps is exactly 0
    offsets = arr - arr[0]
    offset_mean = offsets.mean(axis=0)
    col_mean = arr[0] + offset_mean
    denom = np.sum((col_mean - col_mean.mean()) ** 2)
    if denom == 0:
        raise DegenerateDenominator("all column means are equal")
    numer = np.sum((offsets - offset_mean) ** 2) / arr.shape[0]
    return float(numer / denom)


def _as_set(subsamples) -> SubsampleSet:
    return subsamples if isinstance(subsamples, SubsampleSet) else SubsampleSet(subsamples)


def sra_rows(subsamples) -> np.ndarray:
    """Each subsample sorted descending; column ``k`` is rank ``k + 1``."""
    return np.sort(_as_set(subsamples).subsamples, axis=1)[:, ::-1]


def histogram_rows(subsamples, rule=BinningRule.mann_wald(), edges: str = PER_SUBSAMPLE) -> np.ndarray:
    """Bin counts of each subsample, shape ``(Q, N_h)``.

    ``edges="per-subsample"`` partitions each subsample's own ``[min, max]``
    into ``N_h`` equal bins, so column ``m`` is "the m-th bin" of every
    subsample. ``edges="shared"`` uses one partition of the pooled range.
    """
    data = _as_set(subsamples).subsamples
    rule = BinningRule.parse(rule)
    n_bins = rule.n_bins_for(data.shape[1])
    if n_bins < 2:
        raise TooFewPoints(f"histogram rows need at least 2 bins, rule gives {n_bins}")
    if edges == PER_SUBSAMPLE:
        bounds = equal_width_edges(data.min(axis=1), data.max(axis=1), n_bins)
    elif edges == SHARED:
        lo, hi = data.min(), data.max()
        if hi == lo:
            raise DegenerateRange("pooled range is zero")
        bounds = equal_width_edges(lo, hi, n_bins)
    else:
        raise ValueError(f"unknown edge mode {edges!r}; expected one of {EDGE_MODES}")
    return bin_counts(data, bounds)


def epsilon_sra(subsamples) -> float:
    return deviation_factor(sra_rows(subsamples))


def epsilon_hist(subsamples, rule=BinningRule.mann_wald(), edges: str = PER_SUBSAMPLE) -> float:
    return deviation_factor(histogram_rows(subsamples, rule, edges))


def feasible_grid(n_samples: int, q: int, n_grid) -> list[int]:
    """Grid points ``N`` with ``q * N <= n_samples``."""
    return [int(n) for n in n_grid if q * int(n) <= n_samples]


def stability_curve(
    sample,
    q: int = DEFAULT_Q,
    n_grid=DEFAULT_GRID,
    rule=BinningRule.mann_wald(),
    edges: str = PER_SUBSAMPLE,
    *,
    split: str = "contiguous",
    seed=None,
) -> StabilityCurve:
    """Deviation factors of both representations over a grid of subsample lengths.

    ``split`` and ``seed`` are passed to :func:`split_subsamples`; with a
    random split every grid point draws its blocks from the same seed.

    Raises
    ------
    InsufficientData
        ``q * max(n_grid)`` exceeds the record length.
    """
    x = check_intervals(sample, copy=False)
    q = check_positive_int("q", q)
    grid = np.array([check_positive_int("N", n) for n in n_grid], dtype=np.int64)
    if grid.size == 0:
        raise ValueError("empty N grid")
    if q * grid.max() > x.size:
        raise InsufficientData(int(q * grid.max()), x.size)
    rule = BinningRule.parse(rule)
    eps_s = np.empty(grid.size)
    eps_h = np.empty(grid.size)
    for i, n in enumerate(grid):
        subs = split_subsamples(x, q, int(n), mode=split, seed=seed)
        eps_s[i] = epsilon_sra(subs)
        eps_h[i] = epsilon_hist(subs, rule, edges)
    return StabilityCurve(grid, eps_s, eps_h, q, rule, edges)

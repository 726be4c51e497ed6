"""Interval samples, their ranked sequence (SRA) and its rank-based ECDF.

The SRA of a sample is the sample sorted in descending order. Position ``n``
(1-based) in that sequence carries the plotting position

    F(s_n, N) = (N + 1 - n) / N

so the largest interval gets F = 1 and the smallest F = 1/N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .exceptions import EmptyInput, SRAError
from .validation import check_intervals


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class IntervalSample:
    """Raw record of inter-count intervals, in record order.

    Parameters
    ----------
    values : array_like
        Interval lengths. Must be finite and strictly positive.
    unit : str
        Unit tag of ``values``. Everything produced by :mod:`srakit.records`
        is already converted to seconds.
    source : str
        Free-form provenance (file name, simulator config, ...).
    """

    values: np.ndarray
    unit: str = "s"
    source: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(check_intervals(self.values)))

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if not isinstance(other, IntervalSample):
            return NotImplemented
        return self.unit == other.unit and np.array_equal(self.values, other.values)

    __hash__ = None

    @property
    def n(self) -> int:
        return self.values.size

    def mean(self) -> float:
        return float(np.mean(self.values))


@dataclass(frozen=True, eq=False)
class RankedSequence:
    """Descending-sorted intervals ``s_1 >= s_2 >= ... >= s_N``.

    ``order[i]`` is the index in the source sample that landed at position
    ``i``; ties keep their original relative order.
    """

    values: np.ndarray
    order: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        vals = np.array(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise EmptyInput("ranked sequence is empty")
        if np.any(vals[1:] > vals[:-1]):
            raise SRAError("ranked sequence must be non-increasing")
        order = self.order
        if order is None:
            order = np.arange(vals.size)
        object.__setattr__(self, "values", _frozen(vals))
        object.__setattr__(self, "order", _frozen(np.asarray(order, dtype=np.intp)))

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values)

    def __eq__(self, other):
        if not isinstance(other, RankedSequence):
            return NotImplemented
        return np.array_equal(self.values, other.values)

    __hash__ = None

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def ranks(self) -> np.ndarray:
        """1-based positional ranks ``1..N``."""
        return np.arange(1, self.values.size + 1)


class EcdfPoint(NamedTuple):
    value: float
    rank: int
    cdf: float


def build_sra(sample) -> RankedSequence:
    """Rank a sample in descending order.

    Accepts an :class:`IntervalSample`, a :class:`RankedSequence` (which is
    returned re-ranked, i.e. unchanged) or any 1-D array-like of positive
    intervals. The sort is stable, so equal values keep their input order
    and receive consecutive positional ranks.

    >>> build_sra([1.0, 3.0, 2.0]).values.tolist()
    [3.0, 2.0, 1.0]
    """
    x = check_intervals(sample, copy=False)
    # reversing an ascending sort would flip the order of ties
    order = np.argsort(-x, kind="stable")
    return RankedSequence(x[order], order)


def ecdf_values(sra: RankedSequence) -> np.ndarray:
    """Plotting positions ``(N + 1 - n) / N`` for ranks ``n = 1..N``."""
    n_total = len(sra)
    if n_total == 0:
        raise EmptyInput("ranked sequence is empty")
    ranks = np.arange(1, n_total + 1)
    return (n_total + 1 - ranks) / n_total


def ecdf(sra: RankedSequence, *, exact: bool = False) -> list[EcdfPoint]:
    """One :class:`EcdfPoint` per rank.

    With ``exact=True`` the ``cdf`` field is a :class:`fractions.Fraction`
    instead of a float.
    """
    if not isinstance(sra, RankedSequence):
        sra = build_sra(sra)
    n_total = len(sra)
    if exact:
        cdfs = [Fraction(n_total + 1 - n, n_total) for n in range(1, n_total + 1)]
    else:
        cdfs = ecdf_values(sra).tolist()
    return [
        EcdfPoint(float(v), n, c)
        for n, (v, c) in enumerate(zip(sra.values, cdfs), start=1)
    ]


def normalize_to_mean(sample) -> IntervalSample:
    """Divide every interval by the sample mean (result has mean 1)."""
    if not isinstance(sample, IntervalSample):
        sample = IntervalSample(sample)
    scaled = sample.values / np.mean(sample.values)
    return IntervalSample(scaled, unit="1", source=sample.source)

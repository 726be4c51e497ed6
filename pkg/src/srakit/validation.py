"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import numbers

import numpy as np

from .exceptions import EmptyInput, InvalidInterval, TooFewPoints


def check_intervals(values, *, min_size: int = 1, copy: bool = True) -> np.ndarray:
    """Coerce ``values`` to a 1-D float64 array of finite positive intervals.

    Accepts lists, arrays, ``IntervalSample``/``RankedSequence`` objects and
    column vectors of shape ``(n, 1)`` (the sklearn ``X`` layout).

    Raises
    ------
    EmptyInput
        No values at all.
    TooFewPoints
        Fewer than ``min_size`` values.
    InvalidInterval
        A value is NaN, infinite, zero or negative.
    """
    values = getattr(values, "values", values)
    arr = np.array(values, dtype=np.float64) if copy else np.asarray(values, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D sequence of intervals, got shape {arr.shape}")
    if arr.size == 0:
        raise EmptyInput("sample is empty")
    if arr.size < min_size:
        raise TooFewPoints(f"need at least {min_size} values, got {arr.size}")
    bad = ~(np.isfinite(arr) & (arr > 0))
    if bad.any():
        idx = int(np.flatnonzero(bad)[0])
        raise InvalidInterval(idx, float(arr[idx]))
    return arr


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    """Return ``value`` as ``int``; reject bools, non-integral floats and values below ``minimum``."""
    if isinstance(value, bool) or not isinstance(value, (numbers.Integral, float, np.floating)):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if isinstance(value, (float, np.floating)):
        if not float(value).is_integer():
            raise ValueError(f"{name} must be integral, got {value}")
    value = int(value)
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_rows(rows) -> np.ndarray:
    """2-D float array with at least two rows and two columns."""
    arr = np.asarray(rows, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"expected Q rows of equal length, got array of shape {arr.shape}")
    q, length = arr.shape
    if q < 2 or length < 2:
        raise TooFewPoints(f"need Q >= 2 rows of length >= 2, got Q={q}, L={length}")
    return arr

"""Text interval/timestamp records.

One number per line, UTF-8, LF or CRLF line endings, ``#`` starts a comment
line, blank lines are ignored. Values are converted to seconds on read.

Unit conversion is done by shifting the decimal exponent (``decimal``), never
by float multiplication, so ``read_record(write_record(x, unit), unit)``
returns ``x`` bit for bit in every unit.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from .exceptions import EmptyInput, InvalidInterval, IoError, NonMonotonicTimestamps, ParseError
from .ranked import IntervalSample

INTERVALS = "intervals"
TIMESTAMPS = "timestamps"
KINDS = (INTERVALS, TIMESTAMPS)

# power of ten that turns seconds into the unit
UNIT_EXPONENTS = {"s": 0, "ms": 3, "us": 6, "ns": 9}

_HEADER_UNIT = re.compile(r"\bunit=(\w+)")


@dataclass(frozen=True)
class RecordFormat:
    kind: str = INTERVALS
    unit: str = "s"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown record kind {self.kind!r}; expected one of {KINDS}")
        if self.unit not in UNIT_EXPONENTS:
            raise ValueError(f"unknown unit {self.unit!r}; expected one of {tuple(UNIT_EXPONENTS)}")

    @property
    def exponent(self) -> int:
        return UNIT_EXPONENTS[self.unit]


def _read_lines(path):
    try:
        with open(path, encoding="utf-8", newline=None) as fh:
            return fh.read().splitlines()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}") from exc


def _parse(lines):
    """``[(line_number, Decimal)]`` plus the unit tag of the first header comment, if any."""
    values = []
    header_unit = None
    for lineno, raw in enumerate(lines, start=1):
        text = raw.strip()
        if not text:
            continue
        if text.startswith("#"):
            m = _HEADER_UNIT.search(text)
            if m and header_unit is None:
                header_unit = m.group(1)
            continue
        try:
            val = Decimal(text)
        except InvalidOperation:
            raise ParseError(lineno, text) from None
        values.append((lineno, val))
    return values, header_unit


def _to_seconds(d: Decimal, exponent: int) -> float:
    return float(d.scaleb(-exponent)) if exponent else float(d)


def read_record(path, fmt: RecordFormat | str | None = None, unit: str | None = None) -> IntervalSample:
    """Read a record file into an :class:`IntervalSample` in seconds.

    Parameters
    ----------
    path : path-like
    fmt : RecordFormat or str, optional
        Record format, or just its kind (``"intervals"``/``"timestamps"``).
        Defaults to intervals.
    unit : str, optional
        Overrides the unit of ``fmt``. When neither gives a unit, a
        ``unit=...`` tag in a header comment is used, else seconds.

    Raises
    ------
    ParseError
        A non-comment line is not a number (carries the 1-based line number).
    NonMonotonicTimestamps
        Timestamp ``i`` is not larger than timestamp ``i - 1`` (0-based ``i``).
    InvalidInterval
        An interval is zero, negative or not finite (0-based interval index).
    """
    explicit_unit = unit
    if isinstance(fmt, RecordFormat):
        kind = fmt.kind
        explicit_unit = unit or fmt.unit
    else:
        kind = fmt or INTERVALS
    values, header_unit = _parse(_read_lines(path))
    fmt = RecordFormat(kind, explicit_unit or header_unit or "s")
    if not values:
        raise EmptyInput(f"{path}: no values")

    for i, (lineno, d) in enumerate(values):
        if not d.is_finite():
            if kind == TIMESTAMPS:
                raise ParseError(lineno, str(d))
            raise InvalidInterval(i, str(d))

    nums = [d for _, d in values]
    if fmt.kind == TIMESTAMPS:
        diffs = []
        for i in range(1, len(nums)):
            step = nums[i] - nums[i - 1]
            if step <= 0:
                raise NonMonotonicTimestamps(i)
            diffs.append(step)
        if not diffs:
            raise EmptyInput(f"{path}: need at least two timestamps")
        nums = diffs

    out = np.empty(len(nums))
    for i, d in enumerate(nums):
        sec = _to_seconds(d, fmt.exponent)
        if not sec > 0:
            raise InvalidInterval(i, sec)
        out[i] = sec
    return IntervalSample(out, unit="s", source=str(path))


def format_value(x: float, unit: str = "s") -> str:
    """Shortest round-trip text for ``x`` seconds expressed in ``unit``."""
    d = Decimal(repr(float(x))).scaleb(UNIT_EXPONENTS[unit])
    if -7 <= d.adjusted() < 17:
        text = format(d, "f")
        if "." in text:
            text = text.rstrip("0").rstrip(".")
        return text
    return format(d.normalize(), "E")


def write_record(sample, path, unit: str = "s") -> None:
    """Write intervals (seconds) one per line in ``unit``, after a header comment."""
    if unit not in UNIT_EXPONENTS:
        raise ValueError(f"unknown unit {unit!r}; expected one of {tuple(UNIT_EXPONENTS)}")
    values = np.asarray(getattr(sample, "values", sample), dtype=np.float64).ravel()
    if values.size:
        bad = ~(np.isfinite(values) & (values > 0))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise InvalidInterval(i, float(values[i]))
    lines = [f"# srakit intervals unit={unit} n={values.size}"]
    lines.extend(format_value(v, unit) for v in values.tolist())
    try:
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc

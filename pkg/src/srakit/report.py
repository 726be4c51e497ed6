"""Assemble SRA-vs-histogram comparison reports and write them as CSV/JSON."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .binning import BinningRule, Histogram, build_histogram
from .exceptions import InsufficientData
from .poisson import MLE, FitComparison, PoissonFit, compare_fits, model_sra
from .ranked import build_sra, ecdf_values
from .stability import DEFAULT_GRID, DEFAULT_Q, PER_SUBSAMPLE, StabilityCurve, feasible_grid, stability_curve
from .validation import check_intervals

SCHEMA = "sra-kit/1"
REFERENCE_N = 1000


def _num(x):
    """JSON-safe number: NaN and infinities become null."""
    if x is None:
        return None
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    return x if math.isfinite(x) else None


def curve_to_dict(curve: StabilityCurve) -> dict:
    return {
        "q": int(curve.q_count),
        "binning": str(curve.binning),
        "edges": curve.edges,
        "n_grid": [int(n) for n in curve.n_grid],
        "eps_sra": [_num(v) for v in curve.eps_sra],
        "eps_hist": [_num(v) for v in curve.eps_hist],
    }


def fit_to_dict(fit: PoissonFit, scale: float = 1.0) -> dict:
    """Fit summary; ``rate`` and ``dead_time`` are reported in the input unit."""
    return {
        "method": fit.method,
        "rate": _num(fit.model.rate / scale),
        "dead_time": _num(fit.model.dead_time * scale),
        "rate_normalized": _num(fit.model.rate) if scale != 1.0 else None,
        "r_squared": _num(fit.r_squared),
        "residual_fraction": _num(fit.residual_fraction),
        "n_used": int(fit.n_used),
    }


def comparison_to_dict(cmp: FitComparison) -> dict:
    return {
        "fit": fit_to_dict(cmp.fit, cmp.scale),
        "normalized_by": _num(cmp.scale),
        "binning": str(cmp.histogram.rule),
        "n_bins": int(cmp.histogram.n_bins),
        "r2_sra": _num(cmp.r2_sra),
        "residual_sra": _num(cmp.residual_sra),
        "r2_hist": _num(cmp.r2_hist),
        "residual_hist": _num(cmp.residual_hist),
        "residual_ratio": _num(cmp.residual_ratio),
    }


def epsilon_summary(curve: StabilityCurve, reference_n: int = REFERENCE_N) -> dict:
    """Values at ``reference_n`` (null when it is not on the grid) and their ratio."""
    try:
        eps_s, eps_h = curve.at(reference_n)
    except KeyError:
        eps_s = eps_h = None
    ratio = eps_h / eps_s if eps_s else None
    return {
        f"eps_sra_at_{reference_n}": _num(eps_s),
        f"eps_hist_at_{reference_n}": _num(eps_h),
        "eps_ratio": _num(ratio),
    }


def histogram_table(hist: Histogram, scale: float = 1.0) -> list[dict]:
    """Rows for a histogram CSV.

    ``z_left``/``z_right`` are the edges in the coordinate
    ``N (x - x_min) / (x_max - x_min)``; ``density_normalized`` is the density
    of the mean-normalized intervals (``density * scale``).
    """
    lo, hi = hist.edges[0], hist.edges[-1]
    z = hist.n_source * (hist.edges - lo) / (hi - lo)
    rows = []
    for m in range(hist.n_bins):
        rows.append({
            "bin": m + 1,
            "left": hist.edges[m],
            "right": hist.edges[m + 1],
            "center": 0.5 * (hist.edges[m] + hist.edges[m + 1]),
            "z_left": z[m],
            "z_right": z[m + 1],
            "count": int(hist.counts[m]),
            "density": hist.densities[m],
            "density_normalized": hist.densities[m] * scale,
        })
    return rows


def sra_table(sample, cmp: FitComparison | None = None) -> list[dict]:
    """Rank, value, plotting position and (rank >= 2) model curve."""
    sra = build_sra(sample)
    cdf = ecdf_values(sra)
    n_total = len(sra)
    model_vals = None
    if cmp is not None and n_total >= 2:
        model = cmp.fit.model
        # back to the input unit
        model_vals = cmp.scale * model_sra(model, n_total, np.arange(2, n_total + 1))
    rows = []
    for i, (v, c) in enumerate(zip(sra.values, cdf)):
        row = {"rank": i + 1, "value": v, "cdf": c}
        if model_vals is not None:
            row["model"] = model_vals[i - 1] if i >= 1 else None
        rows.append(row)
    return rows


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def to_csv(rows: list[dict], columns=None) -> str:
    columns = columns or (list(rows[0]) if rows else [])
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row.get(c)) for c in columns])
    return buf.getvalue()


def curve_csv(curve: StabilityCurve) -> str:
    rows = [{"N": n, "eps_sra": s, "eps_hist": h} for n, s, h in curve.rows()]
    return to_csv(rows, ["N", "eps_sra", "eps_hist"])


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


class Stopwatch:
    """Wall-clock milliseconds per named stage."""

    def __init__(self):
        self.timings: dict[str, float] = {}

    @contextmanager
    def stage(self, name):
        t0 = time.perf_counter()
        try:
            yield
        finally:
            self.timings[name] = (time.perf_counter() - t0) * 1e3


@dataclass
class ComparisonReport:
    config: dict
    curve: StabilityCurve
    comparison: FitComparison
    fit_sample: np.ndarray
    histograms: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    reference_n: int = REFERENCE_N

    @property
    def eps_at_reference(self):
        try:
            return self.curve.at(self.reference_n)
        except KeyError:
            return None

    def dominance(self) -> bool:
        """SRA deviation strictly below histogram deviation at the reference N
        (at the largest grid point when the reference N is not on the grid)."""
        ref = self.eps_at_reference
        if ref is None:
            ref = float(self.curve.eps_sra[-1]), float(self.curve.eps_hist[-1])
        return ref[0] < ref[1]

    def to_dict(self, include_timings: bool = False) -> dict:
        out = {"schema": SCHEMA, "config": self.config, "eps_curve": curve_to_dict(self.curve)}
        out.update(epsilon_summary(self.curve, self.reference_n))
        cmp = comparison_to_dict(self.comparison)
        out["fit_sra"] = cmp["fit"]
        out["fit"] = cmp
        out["fit_hist_r2"] = cmp["r2_hist"]
        out["residual_ratio"] = cmp["residual_ratio"]
        out["histograms"] = {
            name: {"rule": str(h.rule), "n_bins": int(h.n_bins), "n_source": int(h.n_source)}
            for name, h in self.histograms.items()
        }
        out["dominance"] = self.dominance()
        if include_timings:
            out["timings_ms"] = {k: _num(v) for k, v in self.timings.items()}
        return out

    def files(self, include_timings: bool = False) -> dict[str, str]:
        """File name -> text for every output of the report."""
        files = {
            "report.json": to_json(self.to_dict(include_timings)),
            "stability.csv": curve_csv(self.curve),
            "sra_fit.csv": to_csv(sra_table(self.fit_sample, self.comparison)),
        }
        for name, hist in self.histograms.items():
            files[f"hist_{name}.csv"] = to_csv(histogram_table(hist, self.comparison.scale))
        return files


def build_report(
    sample,
    *,
    q: int = DEFAULT_Q,
    n_grid=DEFAULT_GRID,
    rule=BinningRule.mann_wald(),
    edges: str = PER_SUBSAMPLE,
    method: str = MLE,
    dead_time: float = 0.0,
    fit_n: int = REFERENCE_N,
    config: dict | None = None,
) -> ComparisonReport:
    """Run the stability curve, the fit comparison and the histogram exports.

    The fit and histograms use the first ``fit_n`` intervals (all of them if
    the record is shorter), normalized to their mean.
    """
    x = check_intervals(sample, copy=False)
    rule = BinningRule.parse(rule)
    watch = Stopwatch()
    grid = feasible_grid(x.size, q, n_grid)
    if not grid:
        raise InsufficientData(q * min(int(n) for n in n_grid), x.size)
    with watch.stage("stability"):
        curve = stability_curve(x, q, grid, rule, edges)
    first = x[: min(fit_n, x.size)]
    with watch.stage("fit"):
        cmp = compare_fits(first, method=method, dead_time=dead_time, rule=rule)
    hists = {}
    with watch.stage("histograms"):
        for r in (BinningRule.sturges(), BinningRule.mann_wald()):
            hists[str(r)] = build_histogram(first, r)
    return ComparisonReport(
        config=dict(config or {}),
        curve=curve,
        comparison=cmp,
        fit_sample=first,
        histograms=hists,
        timings=watch.timings,
    )


def write_files(files: dict[str, str], out_dir) -> list[Path]:
    """Write all files or none: anything already written is removed on failure."""
    out_dir = Path(out_dir)
    written = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, text in files.items():
            path = out_dir / name
            path.write_text(text, encoding="utf-8")
            written.append(path)
    except BaseException:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    return written

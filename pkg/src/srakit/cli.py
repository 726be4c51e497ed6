"""Command line entry point: ``srakit {simulate,stability,fit,report}``.

Exit codes: 0 success, 1 analysis or I/O failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .binning import BinningRule
from .exceptions import InsufficientData, SRAError
from .poisson import METHODS, MLE, PoissonModel, compare_fits
from .records import KINDS, UNIT_EXPONENTS, read_record, write_record
from .report import (
    SCHEMA,
    build_report,
    comparison_to_dict,
    curve_csv,
    curve_to_dict,
    epsilon_summary,
    to_json,
    write_files,
)
from .simulate import DetectorConfig, default_paper_config, simulate_intervals
from .stability import DEFAULT_Q, EDGE_MODES, PER_SUBSAMPLE, feasible_grid, stability_curve

log = logging.getLogger("srakit")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


def positive_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def non_negative_int(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def positive_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be finite and > 0, got {text}")
    return value


def non_negative_float(text):
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value >= 0 or value == float("inf"):
        raise argparse.ArgumentTypeError(f"must be finite and >= 0, got {text}")
    return value


def grid_spec(text):
    """``start:stop:step`` (stop inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (int(p) for p in text.split(":"))
            if step < 1 or start < 1 or stop < start:
                raise ValueError
            grid = list(range(start, stop + 1, step))
        else:
            grid = [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"bad grid {text!r}; use start:stop:step or a comma list"
        ) from None
    if not grid or min(grid) < 1:
        raise argparse.ArgumentTypeError(f"grid must contain positive integers: {text!r}")
    return grid


def binning_spec(text):
    try:
        return BinningRule.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _add_input(p, required=True):
    p.add_argument("--input", "-i", type=Path, required=required, help="interval or timestamp file")
    p.add_argument("--format", choices=KINDS, default="intervals", help="record kind (default: intervals)")
    p.add_argument(
        "--unit",
        choices=tuple(UNIT_EXPONENTS),
        default=None,
        help="unit of the input values (default: header tag, else s)",
    )


def _add_sim(p):
    cfg = default_paper_config()
    p.add_argument("--rate", type=positive_float, default=cfg.dark_rate, help="dark count rate, 1/s")
    p.add_argument(
        "--dead-time",
        type=non_negative_float,
        default=None,
        help=f"dead time, s (default {cfg.dead_time} when simulating, 0 for --input)",
    )
    p.add_argument("--n", type=positive_int, default=cfg.n_events, help="number of intervals")
    p.add_argument("--efficiency", type=float, default=cfg.efficiency, help="metadata only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="srakit",
        description="Ranked-sequence (SRA) vs histogram analysis of detector dark-count intervals.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="write a synthetic interval record")
    _add_sim(p)
    p.add_argument("--seed", type=non_negative_int, default=0)
    p.add_argument("--out", "-o", type=Path, required=True, help="output file")
    p.add_argument("--unit", choices=tuple(UNIT_EXPONENTS), default="s", help="unit written to the file")

    p = sub.add_parser("stability", help="deviation factor vs subsample length")
    _add_input(p)
    p.add_argument("--q", type=positive_int, default=DEFAULT_Q, help="number of subsamples (default 100)")
    p.add_argument("--grid", type=grid_spec, default=grid_spec("20:1000:20"), help="N grid (default 20:1000:20)")
    p.add_argument("--binning", type=binning_spec, default=BinningRule.mann_wald())
    p.add_argument("--edges", choices=EDGE_MODES, default=PER_SUBSAMPLE)
    p.add_argument("--out-dir", type=Path, default=Path("."))
    p.add_argument("--split", choices=("contiguous", "random"), default="contiguous")
    p.add_argument("--seed", type=non_negative_int, default=0, help="block selection seed for --split random")

    p = sub.add_parser("fit", help="fit a Poisson model and compare R^2 of SRA and histogram")
    _add_input(p)
    p.add_argument("--method", choices=METHODS, default=MLE)
    p.add_argument("--dead-time", type=non_negative_float, default=0.0, help="known dead time, s")
    p.add_argument("--rate", type=positive_float, default=None, help="fix the rate (1/s) instead of fitting")
    p.add_argument("--normalize", choices=("mean", "none"), default="mean")
    p.add_argument("--binning", type=binning_spec, default=BinningRule.mann_wald())
    p.add_argument("--first", type=positive_int, default=None, help="use only the first N intervals")
    p.add_argument("--out-dir", type=Path, default=None, help="also write fit.json here")
    p.add_argument("--seed", type=non_negative_int, default=None, help="accepted for symmetry; unused")

    p = sub.add_parser("report", help="full SRA vs histogram comparison")
    _add_input(p, required=False)
    p.add_argument("--simulate", action="store_true", help="analyse a fresh synthetic record")
    _add_sim(p)
    p.add_argument("--seed", type=non_negative_int, default=0)
    p.add_argument("--q", type=positive_int, default=DEFAULT_Q)
    p.add_argument("--grid", type=grid_spec, default=grid_spec("20:1000:20"))
    p.add_argument("--binning", type=binning_spec, default=BinningRule.mann_wald())
    p.add_argument("--edges", choices=EDGE_MODES, default=PER_SUBSAMPLE)
    p.add_argument("--method", choices=METHODS, default=MLE)
    p.add_argument("--fit-n", type=positive_int, default=1000, help="intervals used for the fit (default 1000)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings (output no longer byte-stable)")
    p.add_argument("--out-dir", type=Path, default=Path("report"))
    return parser


def _load(args):
    return read_record(args.input, args.format, unit=args.unit)


def _sim_dead_time(args):
    return default_paper_config().dead_time if args.dead_time is None else args.dead_time


def cmd_simulate(args) -> int:
    config = DetectorConfig(
        dark_rate=args.rate,
        dead_time=_sim_dead_time(args),
        efficiency=args.efficiency,
        n_events=args.n,
        seed=args.seed,
    )
    sample = simulate_intervals(config)
    write_record(sample, args.out, unit=args.unit)
    print(f"wrote {len(sample)} intervals to {args.out}")
    return EXIT_OK


def cmd_stability(args) -> int:
    sample = _load(args)
    grid = feasible_grid(len(sample), args.q, args.grid)
    if not grid:
        raise InsufficientData(args.q * min(args.grid), len(sample))
    skipped = len(args.grid) - len(grid)
    if skipped:
        log.warning("skipping %d grid points that need more than %d intervals", skipped, len(sample))
    curve = stability_curve(
        sample, args.q, grid, args.binning, args.edges, split=args.split, seed=args.seed
    )
    payload = {
        "schema": SCHEMA,
        "config": {
            "input": str(args.input),
            "format": args.format,
            "n_intervals": len(sample),
            "split": args.split,
            "seed": args.seed if args.split == "random" else None,
        },
        "eps_curve": curve_to_dict(curve),
    }
    payload.update(epsilon_summary(curve))
    write_files({"stability.csv": curve_csv(curve), "stability.json": to_json(payload)}, args.out_dir)
    print(f"{len(grid)} grid points written to {args.out_dir}")
    return EXIT_OK


def cmd_fit(args) -> int:
    sample = _load(args)
    values = sample.values[: args.first] if args.first else sample.values
    model = PoissonModel(args.rate, args.dead_time) if args.rate else None
    cmp = compare_fits(
        values,
        method=args.method,
        dead_time=args.dead_time,
        rule=args.binning,
        normalize=args.normalize == "mean",
        model=model,
    )
    body = comparison_to_dict(cmp)
    payload = {
        "schema": SCHEMA,
        "config": {"input": str(args.input), "n_intervals": int(values.size), "normalize": args.normalize},
        "rate": body["fit"]["rate"],
        **body,
    }
    text = to_json(payload)
    if args.out_dir is not None:
        write_files({"fit.json": text}, args.out_dir)
    sys.stdout.write(text)
    return EXIT_OK


def cmd_report(args) -> int:
    if args.simulate == (args.input is not None):
        raise _UsageError("report needs exactly one of --input or --simulate")
    if args.simulate:
        config = DetectorConfig(
            dark_rate=args.rate,
            dead_time=_sim_dead_time(args),
            efficiency=args.efficiency,
            n_events=args.n,
            seed=args.seed,
        )
        sample = simulate_intervals(config)
        dead_time = config.dead_time
        echo = {"source": "simulate", **config.to_dict()}
    else:
        sample = _load(args)
        dead_time = args.dead_time or 0.0
        echo = {"source": str(args.input), "format": args.format, "dead_time": dead_time}
    echo.update({
        "q": args.q,
        "binning": str(args.binning),
        "edges": args.edges,
        "method": args.method,
        "fit_n": args.fit_n,
        "n_intervals": len(sample),
    })
    report = build_report(
        sample,
        q=args.q,
        n_grid=args.grid,
        rule=args.binning,
        edges=args.edges,
        method=args.method,
        dead_time=dead_time,
        fit_n=args.fit_n,
        config=echo,
    )
    write_files(report.files(include_timings=args.timings), args.out_dir)
    summary = report.to_dict()
    print(
        f"eps_sra={summary['eps_sra_at_1000']} eps_hist={summary['eps_hist_at_1000']} "
        f"eps_ratio={summary['eps_ratio']} residual_ratio={summary['residual_ratio']}"
    )
    return EXIT_OK if report.dominance() else EXIT_FAILURE


class _UsageError(Exception):
    pass


COMMANDS = {
    "simulate": cmd_simulate,
    "stability": cmd_stability,
    "fit": cmd_fit,
    "report": cmd_report,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except _UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"srakit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SRAError, OSError) as exc:
        print(f"srakit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())

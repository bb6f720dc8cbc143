"""Command-line interface.

Subcommands: ``ingest`` (parse and aggregate only), ``fit`` (through model
selection), ``diagnose`` (adds residual tests), ``forecast`` (adds holdout
forecasts), ``run`` (the full pipeline with figures) and ``simulate``
(synthetic dataset generator in the ingestion schema).

Exit codes: 0 success, 2 parse/schema or configuration problems, 3 data
integrity, 4 estimation failure, 5 no admissible model.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import DEFAULT_CATEGORIES, build_config, parse_schema, read_config_file
from .errors import (
    AllCandidatesFailed,
    DegenerateSeries,
    HorizonZero,
    InconsistentInitials,
    InvalidDf,
    InvalidLevel,
    MisalignedCalendar,
    MissingMonth,
    NegativeCount,
    NoAdmissibleCandidate,
    NonPositiveValue,
    NonStationaryCoefficients,
    NonStationaryRegion,
    NumericalBreakdown,
    OutOfDomain,
    ParseError,
    SampleSizeOutOfRange,
    SarimacastError,
    SeriesTooShort,
    ShapeMismatch,
)
from .ingest import ingest
from .model import CoefficientSet, ModelOrder
from .pipeline import run_pipeline, simulate_dataset, write_ingest_artifacts
from .series import MonthStamp

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_DATA = 3
EXIT_ESTIMATION = 4
EXIT_NO_MODEL = 5

_EXIT_BY_TYPE = (
    ((ParseError, InvalidLevel, HorizonZero, ValueError), EXIT_PARSE),
    (
        (
            MissingMonth,
            NegativeCount,
            NonPositiveValue,
            SeriesTooShort,
            MisalignedCalendar,
            InconsistentInitials,
            DegenerateSeries,
            SampleSizeOutOfRange,
            OutOfDomain,
        ),
        EXIT_DATA,
    ),
    (
        (
            AllCandidatesFailed,
            NonStationaryRegion,
            NonStationaryCoefficients,
            NumericalBreakdown,
            ShapeMismatch,
            InvalidDf,
        ),
        EXIT_ESTIMATION,
    ),
    ((NoAdmissibleCandidate,), EXIT_NO_MODEL),
)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", type=Path, help="delimited dataset file")
    parser.add_argument("--config", type=Path, help="key = value config file; flags win")
    parser.add_argument("--schema", help="column mapping, e.g. year=YR,count=Total")
    parser.add_argument("--categories", help="comma-separated category names")
    parser.add_argument("--from", dest="period_from", help="first month, YYYY-MM")
    parser.add_argument("--to", dest="period_to", help="last month, YYYY-MM")
    parser.add_argument("--holdout", type=int, help="months held out for evaluation")
    parser.add_argument("--level", type=float, help="prediction-interval level in (0,1)")
    parser.add_argument("--max-p", dest="max_p", type=int, help="largest non-seasonal AR order")
    parser.add_argument("--max-q", dest="max_q", type=int, help="largest non-seasonal MA order")
    parser.add_argument("--max-P", dest="max_P", type=int, help="largest seasonal AR order")
    parser.add_argument("--max-Q", dest="max_Q", type=int, help="largest seasonal MA order")
    parser.add_argument(
        "--no-log",
        dest="no_log",
        action="store_const",
        const=True,
        default=None,
        help="model raw counts instead of logs",
    )
    parser.add_argument(
        "--constant",
        choices=("on", "off"),
        default=None,
        help="constant term for undifferenced candidates (default on)",
    )
    parser.add_argument("--seed", type=int, help="seed recorded in the run summary")
    parser.add_argument("--out", type=Path, help="output directory")
    parser.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="category workers (default: one per category up to CPU count)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sarimacast",
        description="Seasonal ARIMA forecasting pipeline for monthly count series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("ingest", "parse and aggregate the dataset, write per-category series"),
        ("fit", "identify and fit the best model per category"),
        ("diagnose", "fit plus residual diagnostics"),
        ("forecast", "fit, diagnose and forecast the holdout months"),
        ("run", "full pipeline: tables, figures and run summary"),
    ):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)

    sim = sub.add_parser("simulate", help="write a synthetic dataset in the input schema")
    sim.add_argument("--out", type=Path, required=True, help="output CSV path")
    sim.add_argument("--categories", default=",".join(DEFAULT_CATEGORIES))
    sim.add_argument("--n", type=int, default=180, help="months per category")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--start", default="2005-01", help="first month, YYYY-MM")
    sim.add_argument("--order", default="(0,0,0)(0,0,0)[12]", help="SARIMA order")
    sim.add_argument("--phi", default="", help="comma-separated AR coefficients")
    sim.add_argument("--theta", default="", help="comma-separated MA coefficients")
    sim.add_argument("--sphi", default="", help="comma-separated seasonal AR coefficients")
    sim.add_argument("--stheta", default="", help="comma-separated seasonal MA coefficients")
    sim.add_argument("--sigma2", type=float, default=0.01, help="innovation variance (log scale)")
    sim.add_argument("--base", type=float, default=7.5, help="log-scale level of the counts")
    return parser


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def _config_from_args(args: argparse.Namespace):
    file_values = read_config_file(args.config) if args.config else None
    flags = {
        "input": args.input,
        "schema": parse_schema(args.schema) if args.schema else None,
        "categories": (
            tuple(c.strip() for c in args.categories.split(",") if c.strip())
            if args.categories
            else None
        ),
        "period_from": MonthStamp.parse(args.period_from) if args.period_from else None,
        "period_to": MonthStamp.parse(args.period_to) if args.period_to else None,
        "holdout": args.holdout,
        "level": args.level,
        "max_p": args.max_p,
        "max_q": args.max_q,
        "max_P": args.max_P,
        "max_Q": args.max_Q,
        "apply_log": (not args.no_log) if args.no_log is not None else None,
        "include_constant": (args.constant == "on") if args.constant else None,
        "seed": args.seed,
        "out_dir": args.out,
    }
    return build_config(file_values, **flags)


def _run_stage(args: argparse.Namespace, stage: str) -> int:
    config = _config_from_args(args)
    if config.input is None:
        print("error: --input (or a config-file input) is required", file=sys.stderr)
        return EXIT_PARSE
    summary = run_pipeline(config, stage=stage, jobs=args.jobs)
    for name, entry in summary["categories"].items():
        line = f"{name}: selected {entry['selected']['order']} (AIC {entry['selected']['aic']:.2f})"
        if "evaluation" in entry:
            line += (
                f", max relative error {entry['evaluation']['max_relative_error']:.3f},"
                f" coverage {entry['evaluation']['coverage']:.2f}"
            )
        print(line)
    print(f"wrote {len(summary['artifacts'])} artifacts to {config.out_dir}")
    return EXIT_OK


def _run_ingest(args: argparse.Namespace) -> int:
    config = _config_from_args(args)
    if config.input is None:
        print("error: --input (or a config-file input) is required", file=sys.stderr)
        return EXIT_PARSE
    series = ingest(config.input, config)
    summary = write_ingest_artifacts(series, config.out_dir)
    for name, entry in summary["categories"].items():
        print(f"{name}: {entry['length']} months from {entry['start']} to {entry['end']}")
    for year, total in summary["annual_totals"].items():
        print(f"total {year}: {total}")
    return EXIT_OK


def _run_simulate(args: argparse.Namespace) -> int:
    order = ModelOrder.parse(args.order)
    coeffs = CoefficientSet(
        phi=_floats(args.phi),
        theta=_floats(args.theta),
        sphi=_floats(args.sphi),
        stheta=_floats(args.stheta),
        sigma2=args.sigma2,
    )
    categories = tuple(c.strip() for c in args.categories.split(",") if c.strip())
    simulate_dataset(
        path=args.out,
        categories=categories,
        order=order,
        coeffs=coeffs,
        n=args.n,
        seed=args.seed,
        start=MonthStamp.parse(args.start),
        base_log_level=args.base,
    )
    print(f"wrote {args.n} months x {len(categories)} categories to {args.out}")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _run_simulate(args)
        if args.command == "ingest":
            return _run_ingest(args)
        return _run_stage(args, args.command)
    except SarimacastError as err:
        scope = getattr(err, "category", None)
        prefix = f"{scope}: " if scope else ""
        print(f"error: {prefix}{err}", file=sys.stderr)
        for types, code in _EXIT_BY_TYPE:
            if isinstance(err, types):
                return code
        return EXIT_ESTIMATION
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

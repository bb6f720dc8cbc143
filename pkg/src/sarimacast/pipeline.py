"""End-to-end orchestration: ingest, model, diagnose, forecast, emit.

Stages are cumulative: ``fit`` runs through model selection, ``diagnose``
adds residual testing, ``forecast`` adds the holdout forecast and its
evaluation, and ``run`` produces every table and figure.  All artifacts are
deterministic functions of (input, config), so identical runs re-create
byte-identical machine-readable outputs.
"""

from __future__ import annotations

import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import figures, report
from .config import PipelineConfig
from .diagnostics import DiagnosticsReport, default_portmanteau_lags, diagnose_residuals
from .errors import SarimacastError
from .fitting import FittedModel
from .forecasting import EvaluationReport, ForecastResult, evaluate, forecast
from .ingest import annual_totals, ingest
from .model import CoefficientSet, ModelOrder
from .selection import CandidateRanking, choose_differencing_with_trail, grid_search, selection_decision
from .series import (
    MonthStamp,
    TimeSeries,
    TransformSpec,
    apply_transform,
    log_transform,
    train_test_split,
)
from .simulate import simulate

STAGES = ("fit", "diagnose", "forecast", "run")


@dataclass(frozen=True, eq=False)
class CategoryOutcome:
    """Everything the pipeline computed for one category."""

    name: str
    series: TimeSeries
    train: TimeSeries
    test: TimeSeries
    spec: TransformSpec
    differencing_trail: tuple[str, ...]
    ranking: CandidateRanking
    selection_trail: tuple[str, ...]
    model: FittedModel
    diagnostics: DiagnosticsReport | None
    forecast_result: ForecastResult | None
    evaluation: EvaluationReport | None


def _attach_category(err: SarimacastError, name: str) -> SarimacastError:
    err.category = name
    return err


def analyze_category(
    name: str, series: TimeSeries, config: PipelineConfig, stage: str = "run"
) -> CategoryOutcome:
    """Split, transform, search, select and (per stage) diagnose/forecast."""
    try:
        train, test = train_test_split(series, config.holdout)
        work = log_transform(train) if config.apply_log else train
        (d, D), trail = choose_differencing_with_trail(work, config.bounds)
        spec = TransformSpec(apply_log=config.apply_log, d=d, D=D, s=config.bounds.s)
        ranking = grid_search(train, config.bounds, spec, config.include_constant)
        winner, sel_trail = selection_decision(ranking)
        model = winner.model
        assert model is not None

        diagnostics = None
        forecast_result = None
        evaluation = None
        if stage in ("diagnose", "forecast", "run"):
            diagnostics = diagnose_residuals(
                model.residuals.values, fitted_params=model.n_params - 1
            )
        if stage in ("forecast", "run"):
            diffed = apply_transform(train, spec)
            forecast_result = forecast(model, spec, diffed, config.holdout, config.level)
            evaluation = evaluate(forecast_result, test)
        return CategoryOutcome(
            name=name,
            series=series,
            train=train,
            test=test,
            spec=spec,
            differencing_trail=tuple(trail),
            ranking=ranking,
            selection_trail=tuple(sel_trail),
            model=model,
            diagnostics=diagnostics,
            forecast_result=forecast_result,
            evaluation=evaluation,
        )
    except SarimacastError as err:
        raise _attach_category(err, name)


def _slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "_", name.lower()).strip("_") or "category"


def _category_summary(outcome: CategoryOutcome, config: PipelineConfig) -> dict:
    entry = {
        "series": {
            "start": str(outcome.series.start),
            "end": str(outcome.series.end),
            "length": len(outcome.series),
            "train_length": len(outcome.train),
            "test_length": len(outcome.test),
        },
        "transform": {
            "apply_log": outcome.spec.apply_log,
            "d": outcome.spec.d,
            "D": outcome.spec.D,
            "s": outcome.spec.s,
        },
        "differencing_trail": list(outcome.differencing_trail),
        "ranking": report.ranking_dict(outcome.ranking),
        "selected": outcome.model.to_card(),
        "selection_trail": list(outcome.selection_trail),
    }
    if outcome.diagnostics is not None:
        entry["diagnostics"] = report.diagnostics_dict(outcome.diagnostics)
    if outcome.forecast_result is not None:
        entry["forecast"] = report.forecast_dict(outcome.forecast_result)
    if outcome.evaluation is not None:
        entry["evaluation"] = report.evaluation_dict(outcome.evaluation)
    return entry


def _write_category_artifacts(
    outcome: CategoryOutcome, config: PipelineConfig, stage: str, out_dir: Path
) -> list[str]:
    cat_dir = out_dir / _slug(outcome.name)
    cat_dir.mkdir(parents=True, exist_ok=True)
    written = []

    header, rows = report.ranking_table(outcome.ranking)
    report.write_delimited(cat_dir / "ranking.csv", header, rows)
    written.append(str(cat_dir / "ranking.csv"))

    header, rows = report.coefficient_table(outcome.model)
    report.write_delimited(cat_dir / "coefficients.csv", header, rows)
    written.append(str(cat_dir / "coefficients.csv"))

    diffed = apply_transform(outcome.train, outcome.spec)
    max_lag = default_portmanteau_lags(len(diffed.core))
    header, rows = report.acf_pacf_table(diffed.core.values, max_lag)
    report.write_delimited(cat_dir / "acf_pacf.csv", header, rows)
    written.append(str(cat_dir / "acf_pacf.csv"))

    if outcome.diagnostics is not None:
        header, rows = report.diagnostics_table(outcome.diagnostics)
        report.write_delimited(cat_dir / "diagnostics.csv", header, rows)
        written.append(str(cat_dir / "diagnostics.csv"))
        fig = figures.residual_figure(outcome.name, outcome.model.residuals, outcome.diagnostics)
        figures.save_svg(fig, cat_dir / "residual_diagnostics.svg")
        written.append(str(cat_dir / "residual_diagnostics.svg"))

    if outcome.forecast_result is not None:
        header, rows = report.forecast_table(outcome.forecast_result, outcome.evaluation)
        report.write_delimited(cat_dir / "forecast.csv", header, rows)
        written.append(str(cat_dir / "forecast.csv"))
        fig = figures.forecast_figure(
            outcome.name, outcome.train, outcome.forecast_result, outcome.test
        )
        figures.save_svg(fig, cat_dir / "forecast.svg")
        written.append(str(cat_dir / "forecast.svg"))
    return written


def _analyze_all(
    config: PipelineConfig,
    stage: str,
    series_by_category: dict[str, TimeSeries],
    jobs: int | None,
) -> list[CategoryOutcome]:
    """Per-category analyses, concurrently when more than one worker helps.

    Categories share nothing, so results are identical under any worker
    count; the outcome list keeps the configured category order.
    """
    names = list(config.categories)
    if jobs is None:
        jobs = min(len(names), os.cpu_count() or 1)
    if jobs <= 1 or len(names) <= 1:
        return [analyze_category(n, series_by_category[n], config, stage) for n in names]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        futures = [
            pool.submit(analyze_category, n, series_by_category[n], config, stage)
            for n in names
        ]
        return [f.result() for f in futures]


def run_pipeline(
    config: PipelineConfig,
    stage: str = "run",
    series_by_category: dict[str, TimeSeries] | None = None,
    jobs: int | None = None,
) -> dict:
    """Run the requested stage for every category and write all artifacts.

    ``series_by_category`` bypasses file ingestion (used by tests and by
    callers that already hold series); otherwise ``config.input`` is read.
    ``jobs`` caps the category worker pool (default: one worker per
    category up to the CPU count; results do not depend on it).
    Returns the run summary dict, which is also written to summary.json.
    """
    if stage not in STAGES:
        raise ValueError(f"stage must be one of {STAGES}, got {stage!r}")
    if series_by_category is None:
        if config.input is None:
            raise ValueError("config.input is required when no series are supplied")
        series_by_category = ingest(config.input, config)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    summary: dict = {
        "config": config.to_dict(),
        "seed": config.seed,
        "stage": stage,
        "categories": {},
        "artifacts": [],
    }
    for name in config.categories:
        if name not in series_by_category:
            raise SarimacastError(f"no series for requested category {name!r}")

    outcomes = _analyze_all(config, stage, series_by_category, jobs)
    for outcome in outcomes:
        summary["categories"][outcome.name] = _category_summary(outcome, config)
        summary["artifacts"].extend(
            _write_category_artifacts(outcome, config, stage, out_dir)
        )

    if stage == "run":
        fig = figures.series_figure({o.name: o.series for o in outcomes})
        figures.save_svg(fig, out_dir / "series.svg")
        summary["artifacts"].append(str(out_dir / "series.svg"))

    summary["annual_totals"] = annual_totals(series_by_category)
    summary["artifacts"].append(str(out_dir / "summary.json"))
    summary["artifacts"] = sorted(summary["artifacts"])
    report.write_summary(out_dir / "summary.json", summary)
    return summary


def write_ingest_artifacts(
    series_by_category: dict[str, TimeSeries], out_dir: Path
) -> dict:
    """The ``ingest`` stage: one month,count file per category plus totals."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    artifacts = []
    for name in sorted(series_by_category):
        ts = series_by_category[name]
        rows = [[str(ts.start.advance(i)), int(ts.values[i])] for i in range(len(ts))]
        path = out_dir / f"{_slug(name)}_series.csv"
        report.write_delimited(path, ["month", "count"], rows)
        artifacts.append(str(path))
    summary = {
        "categories": {
            name: {
                "start": str(ts.start),
                "end": str(ts.end),
                "length": len(ts),
                "total": int(ts.values.sum()),
            }
            for name, ts in series_by_category.items()
        },
        "annual_totals": annual_totals(series_by_category),
        "artifacts": sorted(artifacts + [str(out_dir / "ingest.json")]),
    }
    report.write_summary(out_dir / "ingest.json", summary)
    return summary


def simulate_dataset(
    path: Path,
    categories: tuple[str, ...],
    order: ModelOrder,
    coeffs: CoefficientSet,
    n: int,
    seed: int,
    start: MonthStamp,
    base_log_level: float,
) -> None:
    """Write a synthetic dataset in the ingestion schema.

    Each category gets an independent draw (seed offset by its position);
    counts are exp(base + simulated log-scale value) rounded to integers
    with a floor of 1 so the log transform stays valid downstream.
    """
    import csv

    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["Year", "Month", "Category", "Count"])
        for i, cat in enumerate(categories):
            ts = simulate(order, coeffs, n, seed + i, start=start)
            counts = np.maximum(1, np.round(np.exp(base_log_level + ts.values))).astype(int)
            for j, count in enumerate(counts):
                stamp = start.advance(j)
                writer.writerow([stamp.year, stamp.month, cat, int(count)])

"""Delimited table emission and the machine-readable run summary.

Every table is written as comma-delimited text with a header row, and the
same content lands in the JSON run summary so golden-file tests can pin it.
All serialization is deterministic: keys are sorted and floats use their
shortest round-trip representation.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from .diagnostics import DiagnosticsReport, sample_acf, sample_pacf
from .fitting import FittedModel
from .forecasting import EvaluationReport, ForecastResult
from .selection import CandidateRanking


def write_delimited(path: Path, header: list[str], rows: list[list]) -> None:
    with Path(path).open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return value


def ranking_table(ranking: CandidateRanking) -> tuple[list[str], list[list]]:
    header = [
        "order", "aic", "loglik", "converged", "roots_ok", "significant",
        "redundant", "error",
    ]
    rows = []
    for c in ranking.candidates:
        rows.append(
            [
                str(c.order),
                _cell(float(c.aic)) if np.isfinite(c.aic) else "",
                _cell(float(c.model.loglik)) if c.model is not None else "",
                int(c.converged),
                int(c.roots_ok),
                int(c.significant),
                int(c.redundant),
                c.error or "",
            ]
        )
    return header, rows


def coefficient_table(model: FittedModel) -> tuple[list[str], list[list]]:
    header = ["name", "estimate", "stderr", "t", "p"]
    rows = []
    for row in model.to_card()["coefficients"]:
        rows.append(
            [
                row["name"],
                _cell(row["estimate"]),
                _cell(row["stderr"]),
                _cell(row["t"]),
                _cell(row["p"]),
            ]
        )
    rows.append(["sigma2", _cell(model.coefficients.sigma2), "", "", ""])
    return header, rows


def diagnostics_table(report: DiagnosticsReport) -> tuple[list[str], list[list]]:
    header = ["test", "statistic", "df_or_n", "p_value"]
    rows = [
        [o.test_name.value, _cell(o.statistic), o.df_or_n, _cell(o.p_value)]
        for o in report.outcomes()
    ]
    return header, rows


def acf_pacf_table(values, max_lag: int) -> tuple[list[str], list[list]]:
    acf = sample_acf(values, max_lag)
    pacf = sample_pacf(values, max_lag)
    header = ["lag", "acf", "pacf"]
    rows = [[k, _cell(float(acf.rho[k])), _cell(float(pacf[k - 1]))] for k in range(1, max_lag + 1)]
    return header, rows


def forecast_table(
    result: ForecastResult, evaluation: EvaluationReport | None
) -> tuple[list[str], list[list]]:
    header = [
        "month",
        "actual",
        "forecast",
        "lower",
        "upper",
        "relative_error",
        "inside_interval",
    ]
    rows = []
    for i, month in enumerate(result.months()):
        if evaluation is not None and i < len(evaluation.steps):
            step = evaluation.steps[i]
            actual = _cell(step.actual)
            rel = _cell(step.relative_error)
            inside = int(step.inside_interval)
        else:
            actual, rel, inside = "", "", ""
        rows.append(
            [
                str(month),
                actual,
                _cell(float(result.point[i])),
                _cell(float(result.lower[i])),
                _cell(float(result.upper[i])),
                rel,
                inside,
            ]
        )
    return header, rows


def evaluation_dict(evaluation: EvaluationReport) -> dict:
    return {
        "max_relative_error": evaluation.max_relative_error,
        "mape": evaluation.mape,
        "coverage": evaluation.coverage,
        "steps": [
            {
                "month": str(s.month),
                "actual": s.actual,
                "forecast": s.forecast,
                "lower": s.lower,
                "upper": s.upper,
                "relative_error": s.relative_error,
                "inside_interval": s.inside_interval,
            }
            for s in evaluation.steps
        ],
    }


def diagnostics_dict(report: DiagnosticsReport) -> dict:
    return {
        "lags": report.lags,
        "fitted_params": report.fitted_params,
        "tests": {
            o.test_name.value: {
                "statistic": o.statistic,
                "df_or_n": o.df_or_n,
                "p_value": o.p_value,
            }
            for o in report.outcomes()
        },
    }


def ranking_dict(ranking: CandidateRanking) -> list[dict]:
    out = []
    for c in ranking.candidates:
        out.append(
            {
                "order": str(c.order),
                "aic": float(c.aic) if np.isfinite(c.aic) else None,
                "loglik": float(c.model.loglik) if c.model is not None else None,
                "converged": c.converged,
                "roots_ok": c.roots_ok,
                "significant": c.significant,
                "redundant": c.redundant,
                "error": c.error,
            }
        )
    return out


def forecast_dict(result: ForecastResult) -> dict:
    return {
        "start": str(result.start),
        "horizon": result.horizon,
        "level": result.level,
        "mean_corrected": result.mean_corrected,
        "months": [str(m) for m in result.months()],
        "point": [float(v) for v in result.point],
        "lower": [float(v) for v in result.lower],
        "upper": [float(v) for v in result.upper],
        "log_scale_point": [float(v) for v in result.log_scale_point],
        "log_scale_se": [float(v) for v in result.log_scale_se],
    }


def write_summary(path: Path, summary: dict) -> None:
    Path(path).write_text(json.dumps(summary, sort_keys=True, indent=2) + "\n")

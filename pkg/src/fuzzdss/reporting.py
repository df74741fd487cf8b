"""Batch evaluation, intervention frequency tables, and surface-grid exports."""
from __future__ import annotations

import io
import json
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from .core import (
    InferenceResult,
    Model,
    ModelConsistencyError,
    OutOfUniverseError,
    infer,
)
from .store import ReferralRecord


@dataclass(frozen=True)
class FrequencyReport:
    counts: tuple[tuple[str, int], ...]  # band label -> count, band order
    no_rule_fired_count: int
    total: int

    def count_map(self) -> dict[str, int]:
        return dict(self.counts)


def frequency_report(
    results: Sequence[InferenceResult], band_labels: Sequence[str] = ()
) -> FrequencyReport:
    """Count ok results per category; no_rule_fired results count separately.

    band_labels fixes the label order (and zero-count entries); labels seen
    only in results are appended in first-seen order.
    """
    counts: dict[str, int] = {label: 0 for label in band_labels}
    no_fire = 0
    for res in results:
        if res.status == "no_rule_fired":
            no_fire += 1
        else:
            counts[res.category] = counts.get(res.category, 0) + 1
    return FrequencyReport(
        counts=tuple(counts.items()),
        no_rule_fired_count=no_fire,
        total=len(results),
    )


def frequency_report_text(report: FrequencyReport) -> str:
    width = max([len("Intervention")] + [len(l) for l, _ in report.counts])
    lines = [f"{'Intervention':<{width}}  Frequency"]
    for label, n in report.counts:
        lines.append(f"{label:<{width}}  {n}")
    if report.no_rule_fired_count:
        lines.append(f"{'(no rule fired)':<{width}}  {report.no_rule_fired_count}")
    lines.append(f"{'Total':<{width}}  {report.total}")
    return "\n".join(lines) + "\n"


def frequency_report_json(report: FrequencyReport) -> dict:
    return {
        "counts": report.count_map(),
        "no_rule_fired_count": report.no_rule_fired_count,
        "total": report.total,
    }


@dataclass(frozen=True)
class SurfaceGrid:
    x_variable: str
    y_variable: str
    fixed: tuple[tuple[str, float], ...]
    x_points: tuple[float, ...]
    y_points: tuple[float, ...]
    values: tuple[tuple[Optional[float], ...], ...]  # [i][j] -> x_points[i], y_points[j]
    categories: tuple[tuple[Optional[str], ...], ...]


def surface_grid(
    model: Model,
    x_var: str,
    y_var: str,
    fixed: Mapping[str, float],
    resolution: int = 50,
) -> SurfaceGrid:
    """Evaluate the model on a uniform x/y grid with the rest held fixed.

    Dead-zone cells come back as None in both values and categories.
    """
    if resolution < 2:
        raise ValueError(f"resolution must be at least 2, got {resolution}")
    if x_var == y_var:
        raise ValueError("x and y variables must differ")
    vx = model.input(x_var)
    vy = model.input(y_var)
    remaining = {v.name for v in model.inputs} - {x_var, y_var}
    if set(fixed) != remaining:
        raise ValueError(
            "fixed values must cover exactly the remaining inputs: "
            + (", ".join(sorted(remaining)) or "(none)")
        )
    for name, value in fixed.items():
        var = model.input(name)
        if not (var.universe_min <= value <= var.universe_max):
            raise OutOfUniverseError(name, value, var.universe_min, var.universe_max)

    def axis(var):
        lo, hi = var.universe_min, var.universe_max
        return tuple(lo + (hi - lo) * i / (resolution - 1) for i in range(resolution))

    x_points = axis(vx)
    y_points = axis(vy)
    values = []
    categories = []
    for x in x_points:
        row_v: list[Optional[float]] = []
        row_c: list[Optional[str]] = []
        for y in y_points:
            inputs = dict(fixed)
            inputs[x_var] = x
            inputs[y_var] = y
            res = infer(model, inputs)
            row_v.append(res.crisp_value)
            row_c.append(res.category)
        values.append(tuple(row_v))
        categories.append(tuple(row_c))
    return SurfaceGrid(
        x_variable=x_var,
        y_variable=y_var,
        fixed=tuple(sorted(fixed.items())),
        x_points=x_points,
        y_points=y_points,
        values=tuple(values),
        categories=tuple(categories),
    )


def surface_grid_csv(grid: SurfaceGrid) -> str:
    """`x,y,value,category` rows; empty fields for dead-zone cells."""
    buf = io.StringIO()
    buf.write("x,y,value,category\n")
    for i, x in enumerate(grid.x_points):
        for j, y in enumerate(grid.y_points):
            value = grid.values[i][j]
            category = grid.categories[i][j]
            v = "" if value is None else repr(value)
            c = "" if category is None else f'"{category}"'
            buf.write(f"{x:g},{y:g},{v},{c}\n")
    return buf.getvalue()


def surface_grid_json(grid: SurfaceGrid) -> dict:
    return {
        "x_variable": grid.x_variable,
        "y_variable": grid.y_variable,
        "fixed": dict(grid.fixed),
        "x_points": list(grid.x_points),
        "y_points": list(grid.y_points),
        "values": [list(row) for row in grid.values],
        "categories": [list(row) for row in grid.categories],
    }


@dataclass(frozen=True)
class RecordError:
    record: ReferralRecord
    message: str


BatchItem = tuple[ReferralRecord, Union[InferenceResult, RecordError]]


def batch_infer(model: Model, records: Sequence[ReferralRecord]) -> list[BatchItem]:
    """One result per record, order preserving; binding/range failures become
    per-record error markers instead of aborting the batch."""
    out: list[BatchItem] = []
    needed = set(model.input_names())
    for rec in records:
        counts = rec.count_map()
        missing = needed - set(counts)
        if missing:
            out.append(
                (rec, RecordError(rec, "missing count(s): " + ", ".join(sorted(missing))))
            )
            continue
        try:
            res = infer(model, {name: counts[name] for name in needed})
        except (OutOfUniverseError, ModelConsistencyError) as e:
            out.append((rec, RecordError(rec, str(e))))
            continue
        out.append((rec, res))
    return out


def batch_results(items: Sequence[BatchItem]) -> list[InferenceResult]:
    return [r for _, r in items if isinstance(r, InferenceResult)]


def inference_result_json(model: Model, res: InferenceResult) -> dict:
    return {
        "crisp_value": res.crisp_value,
        "category": res.category,
        "status": res.status,
        "fired_rules": [
            {"index": i, "rule_text": model.rule_text(i), "strength": s}
            for i, s in res.fired_rules
        ],
        "uncovered_combinations": [
            [{"variable": v, "term": t} for v, t in combo]
            for combo in res.uncovered_combinations
        ],
    }

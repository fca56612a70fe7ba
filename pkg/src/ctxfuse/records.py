"""Line-delimited record IO and run reporting.

Evaluation datasets, run records, and reports all travel as UTF-8 JSONL,
one record per line, with the field names fixed by the schemas below.
Unknown extra fields are ignored for forward compatibility. Reports are a
pure function of their input records: re-running on the same input yields
byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .metrics import macro_mean, round1

ANSWER_TYPES = ("binary", "multichoice", "span")

# Column order used in reports.
CATEGORIES = ("NaiveConcat", "RationaleOnly", "IteratorOnly")


class ValidationError(ValueError):
    """Raised for malformed records or violated invariants."""


@dataclass(frozen=True)
class Fragment:
    """A titled paragraph fragment of one or more sentences."""

    title: str
    sentences: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.title:
            raise ValidationError("fragment title must be non-empty")
        if not self.sentences:
            raise ValidationError("fragment needs at least one sentence")

    def to_dict(self) -> dict[str, Any]:
        return {"title": self.title, "sentences": list(self.sentences)}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Fragment":
        return cls(title=data.get("title", ""), sentences=tuple(data.get("sentences", ())))


@dataclass(frozen=True)
class EvalSample:
    """One evaluation question with golds and optional context components."""

    id: str
    dataset: str
    answer_type: str
    question: str
    golds: tuple[str, ...]
    options: tuple[str, ...] | None = None
    rationale: str | None = None
    fragments: tuple[Fragment, ...] | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValidationError("field 'id' must be non-empty")
        if self.answer_type not in ANSWER_TYPES:
            raise ValidationError(
                f"field 'answer_type' must be one of {ANSWER_TYPES}, got {self.answer_type!r}"
            )
        if not self.question:
            raise ValidationError("field 'question' must be non-empty")
        if not self.golds:
            raise ValidationError("field 'golds' must be non-empty")
        if self.answer_type == "multichoice":
            if self.options is None or not 2 <= len(self.options) <= 5:
                raise ValidationError(
                    "field 'options' must hold 2-5 entries for multichoice samples"
                )
        elif self.options is not None:
            raise ValidationError(
                "field 'options' is only allowed on multichoice samples"
            )

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "id": self.id,
            "dataset": self.dataset,
            "answer_type": self.answer_type,
            "question": self.question,
            "golds": list(self.golds),
        }
        if self.options is not None:
            data["options"] = list(self.options)
        if self.rationale is not None:
            data["rationale"] = self.rationale
        if self.fragments is not None:
            data["fragments"] = [f.to_dict() for f in self.fragments]
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "EvalSample":
        fragments = data.get("fragments")
        options = data.get("options")
        return cls(
            id=str(data.get("id", "")),
            dataset=str(data.get("dataset", "")),
            answer_type=data.get("answer_type", ""),
            question=data.get("question", ""),
            golds=tuple(data.get("golds", ())),
            options=tuple(options) if options is not None else None,
            rationale=data.get("rationale"),
            fragments=tuple(Fragment.from_dict(f) for f in fragments)
            if fragments is not None
            else None,
        )


def load_eval_dataset(path: str | Path, expected_dataset: str) -> list[EvalSample]:
    """Parse one JSONL dataset file, preserving order and validating invariants."""
    path = Path(path)
    samples: list[EvalSample] = []
    seen_ids: set[str] = set()
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{line_no}: malformed record: {exc}") from exc
            try:
                sample = EvalSample.from_dict(data)
            except ValidationError as exc:
                raise ValidationError(f"{path}:{line_no}: {exc}") from exc
            if sample.dataset != expected_dataset:
                raise ValidationError(
                    f"{path}:{line_no}: field 'dataset' is {sample.dataset!r}, "
                    f"expected {expected_dataset!r}"
                )
            if sample.id in seen_ids:
                raise ValidationError(
                    f"{path}:{line_no}: duplicate id {sample.id!r} in dataset {expected_dataset!r}"
                )
            seen_ids.add(sample.id)
            samples.append(sample)
    return samples


def write_jsonl(path: str | Path, records: Iterable[dict[str, Any]]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as handle:
        for record in records:
            handle.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def write_eval_dataset(samples: Sequence[EvalSample], path: str | Path) -> None:
    write_jsonl(path, (s.to_dict() for s in samples))


@dataclass(frozen=True)
class RunRecord:
    """Per-sample outcome of one evaluation run."""

    sample_id: str
    dataset: str
    strategy: str
    category: str
    prediction: str
    metric_value: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.metric_value <= 100.0:
            raise ValidationError(
                f"metric_value must be within [0, 100], got {self.metric_value}"
            )
        if self.category not in CATEGORIES:
            raise ValidationError(f"unknown category {self.category!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "sample_id": self.sample_id,
            "dataset": self.dataset,
            "strategy": self.strategy,
            "category": self.category,
            "prediction": self.prediction,
            "metric_value": self.metric_value,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunRecord":
        return cls(
            sample_id=str(data.get("sample_id", "")),
            dataset=str(data.get("dataset", "")),
            strategy=str(data.get("strategy", "")),
            category=data.get("category", ""),
            prediction=data.get("prediction", ""),
            metric_value=float(data.get("metric_value", 0.0)),
        )


def load_run_records(path: str | Path) -> list[RunRecord]:
    path = Path(path)
    records: list[RunRecord] = []
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                records.append(RunRecord.from_dict(json.loads(line)))
            except (json.JSONDecodeError, ValidationError, ValueError) as exc:
                raise ValidationError(f"{path}:{line_no}: malformed run record: {exc}") from exc
    return records


def write_run_records(records: Sequence[RunRecord], path: str | Path) -> None:
    write_jsonl(path, (r.to_dict() for r in records))


def summary_mean(values: Iterable[float]) -> float:
    """Unweighted mean across per-dataset report values, rounded to 1dp."""
    return round1(macro_mean(list(values)))


@dataclass(frozen=True)
class ReportRow:
    dataset: str
    count: int
    metric_mean: float
    category_pct: dict[str, float]


@dataclass(frozen=True)
class Report:
    rows: tuple[ReportRow, ...]
    mean_metric: float
    mean_category_pct: dict[str, float]


def build_report(records: Sequence[RunRecord]) -> Report:
    """Aggregate run records into per-dataset rows plus an overall Mean row."""
    if not records:
        raise ValidationError("cannot build a report from zero records")
    by_dataset: dict[str, list[RunRecord]] = {}
    for record in records:
        by_dataset.setdefault(record.dataset, []).append(record)
    rows = []
    for dataset in sorted(by_dataset):
        group = by_dataset[dataset]
        counts = {c: 0 for c in CATEGORIES}
        for record in group:
            counts[record.category] += 1
        pct = {c: round1(100.0 * counts[c] / len(group)) for c in CATEGORIES}
        metric = round1(macro_mean([r.metric_value for r in group]))
        rows.append(
            ReportRow(dataset=dataset, count=len(group), metric_mean=metric, category_pct=pct)
        )
    mean_metric = summary_mean(row.metric_mean for row in rows)
    mean_pct = {c: summary_mean(row.category_pct[c] for row in rows) for c in CATEGORIES}
    return Report(rows=tuple(rows), mean_metric=mean_metric, mean_category_pct=mean_pct)


def render_report_table(report: Report) -> str:
    """Fixed-width plain-text table, one row per dataset plus the Mean row."""
    header = f"{'dataset':<12}{'n':>8}{'metric':>10}" + "".join(
        f"{c:>15}" for c in CATEGORIES
    )
    lines = [header]
    for row in report.rows:
        lines.append(
            f"{row.dataset:<12}{row.count:>8}{row.metric_mean:>10.1f}"
            + "".join(f"{row.category_pct[c]:>15.1f}" for c in CATEGORIES)
        )
    lines.append(
        f"{'Mean':<12}{'':>8}{report.mean_metric:>10.1f}"
        + "".join(f"{report.mean_category_pct[c]:>15.1f}" for c in CATEGORIES)
    )
    return "\n".join(lines) + "\n"


def report_summary_records(report: Report) -> list[dict[str, Any]]:
    records: list[dict[str, Any]] = []
    for row in report.rows:
        records.append(
            {
                "dataset": row.dataset,
                "n": row.count,
                "metric_mean": row.metric_mean,
                "category_pct": row.category_pct,
            }
        )
    records.append(
        {
            "dataset": "Mean",
            "metric_mean": report.mean_metric,
            "category_pct": report.mean_category_pct,
        }
    )
    return records


def write_run_report(
    records: Sequence[RunRecord],
    summary_path: str | Path,
    table_path: str | Path,
) -> Report:
    """Write the machine summary and human table for a set of run records."""
    report = build_report(records)
    write_jsonl(summary_path, report_summary_records(report))
    table_path = Path(table_path)
    table_path.parent.mkdir(parents=True, exist_ok=True)
    table_path.write_text(render_report_table(report), encoding="utf-8")
    return report

"""Context combination strategies over ranker scores.

Implements the four combination methods (NaiveConcatenation, MaxScore,
RationaleDefault, EitherOrBoth), the threshold sweep across a strategy
ladder, and the selection of the generally-best strategy by unweighted
macro-average. Threshold comparisons are strict (score > t), so t=0.9
stays selective even for a score of exactly 0.9.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .metrics import macro_mean
from .records import ValidationError


class Category(str, Enum):
    """Context category a strategy resolves to for one sample."""

    RATIONALE_ONLY = "RationaleOnly"
    ITERATOR_ONLY = "IteratorOnly"
    # Covers both the both-selected case and the EitherOrBoth fallback.
    NAIVE_CONCAT = "NaiveConcat"


METHODS = ("NaiveConcatenation", "MaxScore", "RationaleDefault", "EitherOrBoth")
_THRESHOLD_METHODS = ("RationaleDefault", "EitherOrBoth")

# The published endpoints 5e-4 and 0.9 plus interior values; configurable.
DEFAULT_THRESHOLDS = (0.0005, 0.01, 0.05, 0.14, 0.25, 0.5, 0.75, 0.9)


@dataclass(frozen=True)
class ScoredComponents:
    """Ranker scores for the rationale and retrieved context of one question.

    A score of None marks an absent component; it is treated as 0 and can
    never be selected alone.
    """

    rationale_score: float | None = None
    iterator_score: float | None = None

    def __post_init__(self) -> None:
        if self.rationale_score is None and self.iterator_score is None:
            raise ValidationError("at least one component score must be present")
        for name, score in (
            ("rationale_score", self.rationale_score),
            ("iterator_score", self.iterator_score),
        ):
            if score is not None and not 0.0 <= score <= 1.0:
                raise ValidationError(f"{name} must be within [0, 1], got {score}")


@dataclass(frozen=True)
class StrategyConfig:
    """A combination method plus its threshold where the method uses one."""

    method: str
    threshold: float | None = None

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValidationError(f"unknown combination method {self.method!r}")
        if self.method in _THRESHOLD_METHODS:
            if self.threshold is None:
                raise ValidationError(f"{self.method} requires a threshold")
            if not 0.0 <= self.threshold < 1.0:
                raise ValidationError(
                    f"threshold must be within [0, 1), got {self.threshold}"
                )
        elif self.threshold is not None:
            raise ValidationError(f"{self.method} does not take a threshold")

    @property
    def label(self) -> str:
        if self.threshold is None:
            return self.method
        return f"{self.method}({self.threshold:g})"

    @classmethod
    def parse(cls, label: str) -> "StrategyConfig":
        label = label.strip()
        if "(" in label:
            if not label.endswith(")"):
                raise ValidationError(f"malformed strategy label {label!r}")
            method, raw = label[:-1].split("(", 1)
            try:
                threshold = float(raw)
            except ValueError as exc:
                raise ValidationError(f"malformed threshold in {label!r}") from exc
            return cls(method=method, threshold=threshold)
        return cls(method=label)


def default_ladder(
    thresholds: Sequence[float] = DEFAULT_THRESHOLDS,
) -> list[StrategyConfig]:
    """NaiveConcatenation, MaxScore, then both thresholded methods per rung."""
    ladder = [StrategyConfig("NaiveConcatenation"), StrategyConfig("MaxScore")]
    ladder.extend(StrategyConfig("RationaleDefault", t) for t in thresholds)
    ladder.extend(StrategyConfig("EitherOrBoth", t) for t in thresholds)
    return ladder


def combine(scores: ScoredComponents, config: StrategyConfig) -> Category:
    """Resolve one sample's context category under a strategy."""
    has_rationale = scores.rationale_score is not None
    has_iterator = scores.iterator_score is not None
    s_r = scores.rationale_score or 0.0
    s_i = scores.iterator_score or 0.0

    if config.method == "NaiveConcatenation":
        return Category.NAIVE_CONCAT

    if config.method == "MaxScore":
        if not has_rationale:
            return Category.ITERATOR_ONLY
        if not has_iterator:
            return Category.RATIONALE_ONLY
        return Category.ITERATOR_ONLY if s_i > s_r else Category.RATIONALE_ONLY

    t = config.threshold
    assert t is not None
    if config.method == "RationaleDefault":
        if s_i > t:
            return Category.ITERATOR_ONLY
        return Category.RATIONALE_ONLY if has_rationale else Category.ITERATOR_ONLY

    # EitherOrBoth: absent components score 0 and cannot clear t >= 0.
    pick_rationale = s_r > t
    pick_iterator = s_i > t
    if pick_rationale and pick_iterator:
        return Category.NAIVE_CONCAT
    if pick_rationale:
        return Category.RATIONALE_ONLY
    if pick_iterator:
        return Category.ITERATOR_ONLY
    if has_rationale and has_iterator:
        return Category.NAIVE_CONCAT
    return Category.RATIONALE_ONLY if has_rationale else Category.ITERATOR_ONLY


@dataclass(frozen=True)
class SweepSample:
    """One evaluation sample with its precomputed per-category outcomes."""

    sample_id: str
    dataset: str
    scores: ScoredComponents
    outcomes: Mapping[Category, float]


@dataclass(frozen=True)
class SweepTable:
    """Per-(strategy, dataset) mean metric for a ladder of strategies."""

    configs: tuple[StrategyConfig, ...]
    datasets: tuple[str, ...]
    values: Mapping[tuple[StrategyConfig, str], float]

    def value(self, config: StrategyConfig, dataset: str) -> float:
        return self.values[(config, dataset)]

    def macro(self, config: StrategyConfig) -> float:
        return macro_mean([self.values[(config, d)] for d in self.datasets])


def sweep(samples: Sequence[SweepSample], ladder: Sequence[StrategyConfig]) -> SweepTable:
    """Apply every ladder strategy to every sample and mean per dataset."""
    if not samples:
        raise ValidationError("sweep requires at least one sample")
    if not ladder:
        raise ValidationError("sweep requires at least one strategy")
    datasets = tuple(sorted({s.dataset for s in samples}))
    values: dict[tuple[StrategyConfig, str], float] = {}
    for config in ladder:
        per_dataset: dict[str, list[float]] = {d: [] for d in datasets}
        for sample in samples:
            category = combine(sample.scores, config)
            if category not in sample.outcomes:
                raise ValidationError(
                    f"sample {sample.sample_id!r} has no outcome for category "
                    f"{category.value} selected by {config.label}"
                )
            per_dataset[sample.dataset].append(sample.outcomes[category])
        for dataset in datasets:
            values[(config, dataset)] = macro_mean(per_dataset[dataset])
    return SweepTable(configs=tuple(ladder), datasets=datasets, values=values)


def select_generally_best(table: SweepTable) -> StrategyConfig:
    """Strategy with the highest unweighted mean across datasets.

    Ties break toward the earlier ladder entry.
    """
    if not table.configs:
        raise ValidationError("cannot select from an empty table")
    best = table.configs[0]
    best_score = table.macro(best)
    for config in table.configs[1:]:
        score = table.macro(config)
        if score > best_score:
            best, best_score = config, score
    return best


def select_best_per_dataset(table: SweepTable) -> dict[str, StrategyConfig]:
    """Per-dataset argmax with the same tie rule.

    Oracle-only reporting: picking per dataset assumes the question type is
    known, which does not hold for an arbitrary unseen question.
    """
    if not table.configs or not table.datasets:
        raise ValidationError("cannot select from an empty table")
    winners: dict[str, StrategyConfig] = {}
    for dataset in table.datasets:
        best = table.configs[0]
        best_score = table.value(best, dataset)
        for config in table.configs[1:]:
            score = table.value(config, dataset)
            if score > best_score:
                best, best_score = config, score
        winners[dataset] = best
    return winners

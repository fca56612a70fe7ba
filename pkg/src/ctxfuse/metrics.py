"""Answer extraction and scoring.

Covers chain-of-thought answer extraction, the numeracy-aware token-bag F1
used for span datasets, binary and multiple-choice accuracy, and the
unweighted macro average that aggregates per-dataset results into a single
Mean score. Internal metric values live in [0, 1]; reporting multiplies by
100 and rounds half-up to one decimal.
"""

from __future__ import annotations

import math
import re
import string
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Iterable, Mapping, Sequence

ANSWER_MARKER = "So the answer is"

_ARTICLE_RE = re.compile(r"\b(a|an|the)\b")
_TOKEN_SPLIT_RE = re.compile(r"[ -]")
_PUNCT = frozenset(string.punctuation)


def extract_answer(generation: str) -> tuple[str, str]:
    """Split a raw generation into (rationale, answer).

    The generation is truncated at its first newline. If the answer marker
    occurs, the rationale is the text before it and the answer the text
    after it with a trailing period stripped; otherwise the whole truncated
    text serves as both rationale and answer. Marker matching is
    case-insensitive on the first occurrence.
    """
    line = generation.split("\n", 1)[0].strip()
    if not line:
        return "", ""
    match = re.search(re.escape(ANSWER_MARKER), line, flags=re.IGNORECASE)
    if match is None:
        return line, line
    rationale = line[: match.start()].strip()
    answer = line[match.end() :].strip()
    if answer.endswith("."):
        answer = answer[:-1].strip()
    return rationale, answer


@dataclass(frozen=True)
class NormalizedBag:
    """Normalized token bag plus the canonical number strings found in it."""

    tokens: frozenset[str]
    numbers: frozenset[str]


def _parse_number(token: str) -> float | None:
    try:
        return float(token)
    except ValueError:
        return None


def _canonical_number(value: float) -> str:
    if math.isfinite(value) and value == int(value):
        return str(int(value))
    return repr(value)


def _normalize_token(token: str) -> str:
    value = _parse_number(token)
    if value is None:
        token = "".join(ch for ch in token if ch not in _PUNCT)
        value = _parse_number(token)
    if value is not None:
        return _canonical_number(value)
    return _ARTICLE_RE.sub(" ", token).strip()


def normalize_answer(text: str) -> NormalizedBag:
    """Lowercase, strip punctuation, drop articles, canonicalize numbers."""
    tokens: set[str] = set()
    for raw in _TOKEN_SPLIT_RE.split(text.lower()):
        normalized = _normalize_token(raw)
        for part in normalized.split():
            tokens.add(part)
    numbers = frozenset(t for t in tokens if _parse_number(t) is not None)
    return NormalizedBag(tokens=frozenset(tokens), numbers=numbers)


def _bag_f1(prediction: NormalizedBag, gold: NormalizedBag) -> float:
    # Mismatched numbers zero the pair: the gold's numbers must intersect
    # the prediction's whenever the gold contains any.
    if gold.numbers and not (gold.numbers & prediction.numbers):
        return 0.0
    intersection = len(gold.tokens & prediction.tokens)
    precision = 1.0 if not prediction.tokens else intersection / len(prediction.tokens)
    recall = 1.0 if not gold.tokens else intersection / len(gold.tokens)
    if precision == 0.0 and recall == 0.0:
        return 0.0
    return (2 * precision * recall) / (precision + recall)


def numeracy_f1(prediction: str, golds: Sequence[str]) -> float:
    """Numeracy-aware bag F1 against each gold; the best gold wins."""
    if not golds:
        raise ValueError("numeracy_f1 requires at least one gold answer")
    predicted = normalize_answer(prediction)
    return max(_bag_f1(predicted, normalize_answer(g)) for g in golds)


def score_binary(prediction: str, gold: str) -> int:
    """Accuracy for yes/no answers.

    Full credit for a normalized exact match, or when exactly one of
    yes/no appears among the prediction's tokens and matches the gold.
    """
    gold_tokens = normalize_answer(gold).tokens
    if gold_tokens not in ({"yes"}, {"no"}):
        raise ValueError(f"binary gold must normalize to yes or no, got {gold!r}")
    gold_norm = next(iter(gold_tokens))
    tokens = normalize_answer(prediction).tokens
    if tokens == gold_tokens:
        return 1
    mentioned = tokens & {"yes", "no"}
    if mentioned == {gold_norm}:
        return 1
    return 0


def score_multichoice(prediction: str, options: Sequence[str], gold_index: int) -> int:
    """Accuracy after mapping a free-text prediction onto an option.

    Exact normalized match first; otherwise the option with the highest
    numeracy F1 against the prediction, earliest option on ties.
    """
    if not 2 <= len(options) <= 5:
        raise ValueError(f"expected 2-5 options, got {len(options)}")
    if not 0 <= gold_index < len(options):
        raise ValueError(f"gold_index {gold_index} out of range")
    predicted = normalize_answer(prediction)
    mapped = None
    for i, option in enumerate(options):
        if normalize_answer(option).tokens == predicted.tokens:
            mapped = i
            break
    if mapped is None:
        best = -1.0
        mapped = 0
        for i, option in enumerate(options):
            f1 = numeracy_f1(prediction, [option])
            if f1 > best:
                best = f1
                mapped = i
    return 1 if mapped == gold_index else 0


def macro_mean(per_dataset_scores: Mapping[str, float] | Iterable[float]) -> float:
    """Unweighted arithmetic mean across datasets."""
    values = (
        list(per_dataset_scores.values())
        if isinstance(per_dataset_scores, Mapping)
        else list(per_dataset_scores)
    )
    if not values:
        raise ValueError("macro_mean requires at least one dataset score")
    # fsum is exactly rounded, so the mean is permutation-invariant.
    return math.fsum(values) / len(values)


def round1(value: float) -> float:
    """Round to one decimal place, halves away from zero."""
    return float(Decimal(repr(value)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP))

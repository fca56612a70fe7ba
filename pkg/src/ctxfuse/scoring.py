"""Ranker scoring interface and the score-based evaluation protocols.

Two scorer backends share one contract, score(question, context) -> [0, 1]:
a deterministic lexical mock (stemmed content-token overlap) and a remote
HTTP client speaking the model service's /score endpoint. On top sit the
development-set accuracy check, multiple-choice argmax selection, and the
five-way relevance probe.
"""

from __future__ import annotations

import json
import urllib.error
import urllib.request
from dataclasses import dataclass, field
from typing import Protocol, Sequence

from .records import ValidationError
from .stemming import stem, word_tokens

# Fixed function-word list for the mock scorer; kept small and documented
# so mock scores are reproducible everywhere.
STOPWORDS = frozenset(
    """
    a an the and or but if while is are was were be been being am do does did
    have has had having what which who whom whose where when why how that this
    these those i you he she it we they me him her us them my your his its our
    their of in on at to for from by with about as into over after before
    between out against during without under around among not no nor so than
    too very can will just
    """.split()
)


class ScorerError(RuntimeError):
    """Transport or contract failure while obtaining remote scores."""


class Scorer(Protocol):
    def score(self, question: str, context: str) -> float: ...

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]: ...


@dataclass(frozen=True)
class MockLexicalScorer:
    """Deterministic stand-in scorer: stemmed content-token overlap.

    score(q, c) = |stems(q) ∩ stems(c)| / |stems(q)| over content tokens,
    clamped to [0, 1]. A question with no content tokens scores 0.
    """

    stopwords: frozenset[str] = field(default=STOPWORDS)

    def score(self, question: str, context: str) -> float:
        if not question or not context:
            raise ValidationError("question and context must be non-empty")
        question_stems = self._stems(question)
        if not question_stems:
            return 0.0
        overlap = len(question_stems & self._stems(context))
        return min(1.0, max(0.0, overlap / len(question_stems)))

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        return [self.score(q, c) for q, c in pairs]

    def _stems(self, text: str) -> set[str]:
        return {
            stem(token) for token in word_tokens(text) if token not in self.stopwords
        }


@dataclass(frozen=True)
class RemoteScorer:
    """HTTP client for the model service's POST /score contract."""

    endpoint: str
    timeout: float = 30.0

    def score(self, question: str, context: str) -> float:
        if not question or not context:
            raise ValidationError("question and context must be non-empty")
        body = self._post({"question": question, "context": context})
        return self._validate_score(body.get("score"))

    def score_batch(self, pairs: Sequence[tuple[str, str]]) -> list[float]:
        if not pairs:
            return []
        body = self._post(
            {"pairs": [{"question": q, "context": c} for q, c in pairs]}
        )
        scores = body.get("scores")
        if not isinstance(scores, list) or len(scores) != len(pairs):
            raise ScorerError(
                f"score endpoint returned {0 if scores is None else len(scores)} "
                f"scores for {len(pairs)} pairs"
            )
        return [self._validate_score(s) for s in scores]

    def _post(self, payload: dict) -> dict:
        url = self.endpoint.rstrip("/") + "/score"
        request = urllib.request.Request(
            url,
            data=json.dumps(payload).encode("utf-8"),
            headers={"Content-Type": "application/json"},
            method="POST",
        )
        try:
            with urllib.request.urlopen(request, timeout=self.timeout) as response:
                return json.loads(response.read().decode("utf-8"))
        except urllib.error.HTTPError as exc:
            raise ScorerError(f"score endpoint returned HTTP {exc.code}") from exc
        except (urllib.error.URLError, TimeoutError, json.JSONDecodeError) as exc:
            raise ScorerError(f"score endpoint unreachable: {exc}") from exc

    @staticmethod
    def _validate_score(value: object) -> float:
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ScorerError(f"score endpoint returned a non-number: {value!r}")
        if not 0.0 <= float(value) <= 1.0:
            raise ScorerError(f"score {value} outside [0, 1]")
        return float(value)


def make_scorer(spec: str) -> Scorer:
    """Build a scorer from a CLI spec: "mock" or a service base URL."""
    if spec == "mock":
        return MockLexicalScorer()
    if spec.startswith(("http://", "https://")):
        return RemoteScorer(endpoint=spec)
    raise ValidationError(f"scorer must be 'mock' or an http(s) URL, got {spec!r}")


def rr_dev_accuracy(
    pairs: Sequence[tuple[float, int]], t: float = 0.5
) -> tuple[float, float, float]:
    """Accuracy of thresholded scores against binary labels, in percent.

    A pair is predicted positive iff its score is strictly above t. Returns
    (positive accuracy, negative accuracy, micro accuracy); both label
    classes must be present.
    """
    positives = [(s, y) for s, y in pairs if y == 1]
    negatives = [(s, y) for s, y in pairs if y == 0]
    if not positives or not negatives:
        raise ValidationError("rr_dev_accuracy needs both label classes")
    pos_correct = sum(1 for s, _ in positives if s > t)
    neg_correct = sum(1 for s, _ in negatives if s <= t)
    pos_acc = 100.0 * pos_correct / len(positives)
    neg_acc = 100.0 * neg_correct / len(negatives)
    micro = 100.0 * (pos_correct + neg_correct) / (len(positives) + len(negatives))
    return pos_acc, neg_acc, micro


def mc1_select(scorer: Scorer, question: str, options: Sequence[str]) -> int:
    """Index of the highest-scoring option, each scored independently.

    Ties resolve to the lowest index.
    """
    if not 2 <= len(options) <= 5:
        raise ValidationError(f"expected 2-5 options, got {len(options)}")
    scores = scorer.score_batch([(question, option) for option in options])
    best = 0
    for i, score in enumerate(scores):
        if score > scores[best]:
            best = i
    return best


def relevance_5way_accuracy(
    scorer: Scorer, probe: Sequence[tuple[str, Sequence[str], int]]
) -> float:
    """Fraction of five-option probes whose gold option scores highest."""
    if not probe:
        raise ValidationError("probe must be non-empty")
    correct = 0
    for question, options, gold_index in probe:
        if len(options) != 5:
            raise ValidationError(
                f"probe sample for {question!r} must have exactly 5 options"
            )
        if not 0 <= gold_index < 5:
            raise ValidationError(f"gold index {gold_index} out of range")
        if mc1_select(scorer, question, options) == gold_index:
            correct += 1
    return correct / len(probe)

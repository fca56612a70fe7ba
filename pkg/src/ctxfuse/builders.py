"""Ranker training-data synthesis.

Builds positive and negative retrieval-style contexts from gold-annotated
paragraphs, rationale-style contexts with titles woven into the prose,
the leak filter for generated negatives, shared-normalization pairing, and
the five-way relevance probe set. Every builder is deterministic under a
fixed seed; per-question work uses independently derived seeds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .contexts import ContextBudget, format_retrieved_context
from .records import Fragment, ValidationError
from .stemming import contains_stem_sequence

CONSTRUCTIONS = ("facts", "iterator_like", "rationale_like", "llm_greedy", "llm_sampled")


@dataclass(frozen=True)
class GoldParagraph:
    """A paragraph with sentence-level gold annotations.

    An empty gold_indices set marks a distractor paragraph.
    """

    title: str
    sentences: tuple[str, ...]
    gold_indices: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        if not self.title:
            raise ValidationError("paragraph title must be non-empty")
        if not self.sentences:
            raise ValidationError("paragraph needs at least one sentence")
        if any(i < 0 or i >= len(self.sentences) for i in self.gold_indices):
            raise ValidationError("gold_indices out of range")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "GoldParagraph":
        return cls(
            title=data.get("title", ""),
            sentences=tuple(data.get("sentences", ())),
            gold_indices=frozenset(data.get("gold_indices", ())),
        )


@dataclass(frozen=True)
class RRExample:
    """One (question, context, label) ranker training record."""

    question: str
    context: str
    label: float
    construction: str
    source_dataset: str

    def __post_init__(self) -> None:
        if self.label not in (0.0, 1.0):
            raise ValidationError(f"label must be 0.0 or 1.0, got {self.label}")
        if self.construction not in CONSTRUCTIONS:
            raise ValidationError(f"unknown construction {self.construction!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "question": self.question,
            "context": self.context,
            "label": self.label,
            "construction": self.construction,
            "source_dataset": self.source_dataset,
        }


@dataclass(frozen=True)
class SharedNormPair:
    """A positive and a negative context for the same question."""

    question: str
    positive: RRExample
    negative: RRExample

    def __post_init__(self) -> None:
        if self.positive.label != 1.0 or self.negative.label != 0.0:
            raise ValidationError("pair needs one positive and one negative")
        if self.positive.question != self.question or self.negative.question != self.question:
            raise ValidationError("pair members must share the question")

    def to_dict(self) -> dict[str, Any]:
        return {
            "question": self.question,
            "positive": self.positive.to_dict(),
            "negative": self.negative.to_dict(),
        }


@dataclass(frozen=True)
class PairingResult:
    pairs: tuple[SharedNormPair, ...]
    skipped_questions: int


@dataclass(frozen=True)
class McSample:
    """A multiple-choice probe sample."""

    question: str
    options: tuple[str, ...]
    gold_index: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "question": self.question,
            "options": list(self.options),
            "gold_index": self.gold_index,
        }


def _window(indices: Iterable[int], size: int) -> set[int]:
    return {
        j for g in indices for j in (g - 1, g, g + 1) if 0 <= j < size
    }


def build_positive_iterator_like(
    paras: Sequence[GoldParagraph], budget: ContextBudget | None = None
) -> str:
    """Retrieval-style positive: every gold sentence plus its neighbours.

    Each gold sentence contributes its immediate predecessor and successor
    where they exist; overlapping windows merge. Distractor paragraphs do
    not contribute.
    """
    fragments: list[Fragment] = []
    for para in paras:
        if not para.gold_indices:
            continue
        selected = sorted(_window(para.gold_indices, len(para.sentences)))
        fragments.append(
            Fragment(para.title, tuple(para.sentences[j] for j in selected))
        )
    if not fragments:
        raise ValidationError("no paragraph carries gold sentences")
    return format_retrieved_context(fragments, budget)


def build_negative_iterator_like(
    paras: Sequence[GoldParagraph],
    budget: ContextBudget | None = None,
    seed: int = 0,
    policy: str | None = None,
) -> str:
    """Retrieval-style negative omitting some or all gold sentences.

    The omission policy is a seeded coin flip between omit-some and
    omit-all unless forced; omitted gold sentences never appear in the
    output. Requires non-gold sentences or distractor paragraphs so that a
    non-empty context remains.
    """
    has_non_gold = any(
        len(para.gold_indices) < len(para.sentences) for para in paras
    )
    if not has_non_gold:
        raise ValidationError(
            "cannot build a negative: every sentence is gold and no distractors exist"
        )
    rng = random.Random(seed)
    golds = [
        (pi, si)
        for pi, para in enumerate(paras)
        for si in sorted(para.gold_indices)
    ]
    if policy is None:
        policy = rng.choice(("omit_all", "omit_some"))
    elif policy not in ("omit_all", "omit_some"):
        raise ValidationError(f"unknown omission policy {policy!r}")
    omitted: set[tuple[int, int]] = set()
    if golds:
        if policy == "omit_all":
            omitted = set(golds)
        else:
            k = rng.randint(1, max(1, len(golds) - 1))
            omitted = set(rng.sample(golds, k))

    fragments: list[Fragment] = []
    for pi, para in enumerate(paras):
        gold_here = set(para.gold_indices)
        kept = [si for si in sorted(gold_here) if (pi, si) not in omitted]
        if gold_here:
            if kept:
                selected = _window(kept, len(para.sentences))
                selected -= {si for si in gold_here if (pi, si) in omitted}
            else:
                # All gold omitted: replace with the non-gold sentences.
                selected = set(range(len(para.sentences))) - gold_here
        else:
            selected = set(range(len(para.sentences)))
        ordered = sorted(selected)
        if ordered:
            fragments.append(
                Fragment(para.title, tuple(para.sentences[j] for j in ordered))
            )
    text = format_retrieved_context(fragments, budget)
    if not text:
        raise ValidationError("negative context came out empty under the budget")
    return text


def build_rationale_like(paras: Sequence[GoldParagraph], positive: bool) -> str:
    """Rationale-style context: bare gold (or non-gold) sentences, no
    neighbours, with each paragraph's title woven into its first sentence
    as "In <Title>, <sentence>" instead of prefixed.
    """
    chunks: list[str] = []
    for para in paras:
        if positive:
            indices = sorted(para.gold_indices)
        else:
            indices = sorted(set(range(len(para.sentences))) - set(para.gold_indices))
        if not indices:
            continue
        sentences = [para.sentences[j] for j in indices]
        woven = f"In {para.title}, {sentences[0]}"
        chunks.append(" ".join([woven] + sentences[1:]))
    if not chunks:
        polarity = "gold" if positive else "non-gold"
        raise ValidationError(f"no {polarity} sentences available")
    return " ".join(chunks)


def filter_leaked_negatives(
    samples: Sequence[tuple[str, str, bool]],
) -> list[tuple[str, str, bool]]:
    """Drop generated negatives that leak the answer.

    A negative leaks when its stemmed text contains the stemmed answer as a
    contiguous token subsequence. Samples with yes/no labels are always
    retained.
    """
    retained = []
    for rationale, answer, is_binary in samples:
        if is_binary or not contains_stem_sequence(rationale, answer):
            retained.append((rationale, answer, is_binary))
    return retained


def pair_shared_norm(
    examples: Sequence[RRExample], seed: int = 0, passes: int = 1
) -> PairingResult:
    """Pair each question's positives with sampled negatives.

    Per pass every positive appears at most once; negatives are drawn
    without replacement until the question's pool is exhausted, then
    reshuffled. Questions with a single polarity are skipped and counted.
    """
    by_question: dict[str, tuple[list[RRExample], list[RRExample]]] = {}
    order: list[str] = []
    for example in examples:
        if example.question not in by_question:
            by_question[example.question] = ([], [])
            order.append(example.question)
        positives, negatives = by_question[example.question]
        (positives if example.label == 1.0 else negatives).append(example)

    pairs: list[SharedNormPair] = []
    skipped = 0
    for question in order:
        positives, negatives = by_question[question]
        if not positives or not negatives:
            skipped += 1
            continue
        rng = random.Random(f"{seed}:{question}")
        pool: list[RRExample] = []
        for _ in range(passes):
            for positive in positives:
                if not pool:
                    pool = list(negatives)
                    rng.shuffle(pool)
                pairs.append(
                    SharedNormPair(
                        question=question, positive=positive, negative=pool.pop()
                    )
                )
    return PairingResult(pairs=tuple(pairs), skipped_questions=skipped)


def build_sqa_5way(
    samples: Sequence[tuple[str, str]], seed: int = 0
) -> list[McSample]:
    """Five-way relevance probes from (question, gold rationale) pairs.

    Each question's options are its own gold rationale plus four rationales
    drawn without replacement from other questions; the gold position is
    uniformly randomized. Needs at least five samples.
    """
    if len(samples) < 5:
        raise ValidationError(f"need at least 5 samples, got {len(samples)}")
    probes: list[McSample] = []
    for idx, (question, gold) in enumerate(samples):
        rng = random.Random(f"{seed}:{idx}")
        pool = [r for j, (_, r) in enumerate(samples) if j != idx and r != gold]
        if len(pool) < 4:
            raise ValidationError(
                f"not enough distinct distractor rationales for question {question!r}"
            )
        distractors = rng.sample(pool, 4)
        gold_index = rng.randrange(5)
        options = distractors[:gold_index] + [gold] + distractors[gold_index:]
        probes.append(
            McSample(question=question, options=tuple(options), gold_index=gold_index)
        )
    return probes

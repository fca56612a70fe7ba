"""Brute-force restatement of the four combination rules.

Written as a direct transcription of the rule definitions, independent of
ctxfuse.fusion's implementation, for oracle-equivalence checks.
"""

from __future__ import annotations

from ctxfuse.fusion import Category, ScoredComponents, StrategyConfig


def brute_force_combine(scores: ScoredComponents, config: StrategyConfig) -> Category:
    r_present = scores.rationale_score is not None
    i_present = scores.iterator_score is not None
    r = scores.rationale_score if r_present else 0.0
    i = scores.iterator_score if i_present else 0.0
    only_present = (
        Category.RATIONALE_ONLY if r_present else Category.ITERATOR_ONLY
    )

    if config.method == "NaiveConcatenation":
        # Scores are ignored; always the concatenation.
        return Category.NAIVE_CONCAT

    if config.method == "MaxScore":
        # The single component the ranker scores highest; an absent
        # component can never be selected alone; rationale on ties.
        if not (r_present and i_present):
            return only_present
        if r > i:
            return Category.RATIONALE_ONLY
        if i > r:
            return Category.ITERATOR_ONLY
        return Category.RATIONALE_ONLY

    if config.method == "RationaleDefault":
        # The rationale unless the retrieved component clears the
        # threshold, in which case it is exclusively selected.
        if i > config.threshold:
            return Category.ITERATOR_ONLY
        if not r_present:
            return Category.ITERATOR_ONLY
        return Category.RATIONALE_ONLY

    if config.method == "EitherOrBoth":
        # Either or both components that clear the threshold; otherwise
        # fall back to the concatenation, degraded to the present
        # component when the other is absent.
        over_r = r > config.threshold
        over_i = i > config.threshold
        if over_r and over_i:
            return Category.NAIVE_CONCAT
        if over_r and not over_i:
            return Category.RATIONALE_ONLY
        if over_i and not over_r:
            return Category.ITERATOR_ONLY
        if r_present and i_present:
            return Category.NAIVE_CONCAT
        return only_present

    raise AssertionError(f"unknown method {config.method}")

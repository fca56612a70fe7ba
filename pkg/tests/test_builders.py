import pytest

from ctxfuse.builders import (
    GoldParagraph,
    RRExample,
    build_negative_iterator_like,
    build_positive_iterator_like,
    build_rationale_like,
    build_sqa_5way,
    filter_leaked_negatives,
    pair_shared_norm,
)
from ctxfuse.contexts import ContextBudget
from ctxfuse.records import ValidationError

BUDGET = ContextBudget()


def para(title, sentences, gold=()):
    return GoldParagraph(title=title, sentences=tuple(sentences), gold_indices=frozenset(gold))


def rr(question, context, label, construction="iterator_like", dataset="d"):
    return RRExample(question, context, label, construction, dataset)


class TestPositiveIteratorLike:
    def test_gold_with_neighbours(self):
        out = build_positive_iterator_like([para("T", ["s0", "s1", "s2"], gold={1})], BUDGET)
        assert out == "T: s0 s1 s2"

    def test_single_sentence_paragraph(self):
        out = build_positive_iterator_like([para("T", ["s0"], gold={0})], BUDGET)
        assert out == "T: s0"

    def test_overlapping_windows_merge(self):
        out = build_positive_iterator_like(
            [para("T", ["s0", "s1", "s2", "s3"], gold={0, 2})], BUDGET
        )
        assert out == "T: s0 s1 s2 s3"

    def test_distractor_paragraphs_skipped(self):
        out = build_positive_iterator_like(
            [para("D", ["x0"]), para("T", ["s0"], gold={0})], BUDGET
        )
        assert out == "T: s0"

    def test_no_gold_anywhere_rejected(self):
        with pytest.raises(ValidationError):
            build_positive_iterator_like([para("D", ["x0"])], BUDGET)

    def test_all_gold_sentences_present(self):
        paras = [
            para("A", ["a0", "a1", "a2", "a3"], gold={0, 3}),
            para("B", ["b0", "b1"], gold={1}),
        ]
        out = build_positive_iterator_like(paras, BUDGET)
        for sentence in ("a0", "a3", "b1"):
            assert sentence in out


class TestNegativeIteratorLike:
    def test_omit_all_keeps_non_gold(self):
        out = build_negative_iterator_like(
            [para("T", ["s0", "s1", "s2"], gold={1})], BUDGET, seed=3, policy="omit_all"
        )
        assert out == "T: s0 s2"
        assert "s1" not in out

    def test_distractors_only_is_vacuously_negative(self):
        out = build_negative_iterator_like(
            [para("D1", ["x0", "x1"]), para("D2", ["y0"])], BUDGET, seed=0
        )
        assert out == "D1: x0 x1 D2: y0"

    def test_same_seed_same_output(self):
        paras = [para("T", ["s0", "s1", "s2", "s3"], gold={1, 3}), para("D", ["x0"])]
        first = build_negative_iterator_like(paras, BUDGET, seed=11)
        second = build_negative_iterator_like(paras, BUDGET, seed=11)
        assert first == second

    def test_omits_at_least_one_gold(self):
        paras = [para("T", ["s0", "s1", "s2", "s3"], gold={1, 3})]
        for seed in range(20):
            out = build_negative_iterator_like(paras, BUDGET, seed=seed)
            assert "s1" not in out or "s3" not in out

    def test_everything_gold_no_distractors_rejected(self):
        with pytest.raises(ValidationError):
            build_negative_iterator_like([para("T", ["s0"], gold={0})], BUDGET, seed=0)

    def test_unknown_policy_rejected(self):
        with pytest.raises(ValidationError):
            build_negative_iterator_like(
                [para("T", ["s0", "s1"], gold={0})], BUDGET, seed=0, policy="bogus"
            )


class TestRationaleLike:
    def test_title_woven_into_sentence(self):
        out = build_rationale_like([para("Aschenbrödel", ["s0"], gold={0})], positive=True)
        assert out == "In Aschenbrödel, s0"

    def test_two_paragraphs_joined_in_order(self):
        paras = [para("A", ["a0"], gold={0}), para("B", ["b0"], gold={0})]
        assert build_rationale_like(paras, positive=True) == "In A, a0 In B, b0"

    def test_no_neighbour_sentences(self):
        out = build_rationale_like([para("T", ["s0", "s1", "s2"], gold={1})], positive=True)
        assert out == "In T, s1"

    def test_negative_polarity_takes_non_gold(self):
        out = build_rationale_like([para("T", ["s0", "s1", "s2"], gold={1})], positive=False)
        assert out == "In T, s0 s2"

    def test_positive_without_gold_rejected(self):
        with pytest.raises(ValidationError):
            build_rationale_like([para("T", ["s0"])], positive=True)

    def test_negative_without_non_gold_rejected(self):
        with pytest.raises(ValidationError):
            build_rationale_like([para("T", ["s0"], gold={0})], positive=False)


class TestLeakFilter:
    def test_stem_containment_drops(self):
        samples = [("Iron replaced bronze tools.", "bronze tools", False)]
        assert filter_leaked_negatives(samples) == []

    def test_binary_always_retained(self):
        samples = [("yes this text says yes", "yes", True)]
        assert filter_leaked_negatives(samples) == samples

    def test_no_containment_retained(self):
        samples = [("about 1989 magazines", "1954", False)]
        assert filter_leaked_negatives(samples) == samples

    def test_inflection_still_caught(self):
        samples = [("bronzed tools rusted away", "bronze tool", False)]
        assert filter_leaked_negatives(samples) == []

    def test_non_contiguous_not_dropped(self):
        samples = [("bronze is unlike iron tools", "bronze tools", False)]
        assert filter_leaked_negatives(samples) == samples


class TestPairSharedNorm:
    def test_negatives_alternate_across_passes(self):
        examples = [
            rr("q", "pos", 1.0),
            rr("q", "negA", 0.0),
            rr("q", "negB", 0.0),
        ]
        result = pair_shared_norm(examples, seed=5, passes=2)
        assert len(result.pairs) == 2
        used = [p.negative.context for p in result.pairs]
        assert sorted(used) == ["negA", "negB"]

    def test_one_pair_per_positive_per_pass(self):
        examples = [rr("q", "pos", 1.0), rr("q", "neg", 0.0)]
        result = pair_shared_norm(examples, seed=1, passes=3)
        assert len(result.pairs) == 3
        assert all(p.positive.context == "pos" for p in result.pairs)

    def test_single_polarity_skipped_with_count(self):
        examples = [rr("q", "negA", 0.0)]
        result = pair_shared_norm(examples, seed=1)
        assert result.pairs == ()
        assert result.skipped_questions == 1

    def test_deterministic(self):
        examples = [
            rr("q1", "p1", 1.0),
            rr("q1", "n1", 0.0),
            rr("q1", "n2", 0.0),
            rr("q2", "p2", 1.0),
            rr("q2", "n3", 0.0),
        ]
        first = pair_shared_norm(examples, seed=42, passes=2)
        second = pair_shared_norm(examples, seed=42, passes=2)
        assert first == second

    def test_pairs_share_question_and_polarity(self):
        examples = [
            rr("q1", "p1", 1.0),
            rr("q1", "n1", 0.0),
            rr("q2", "p2", 1.0),
            rr("q2", "n2", 0.0),
        ]
        result = pair_shared_norm(examples, seed=0)
        assert len(result.pairs) == 2
        for pair in result.pairs:
            assert pair.positive.label == 1.0
            assert pair.negative.label == 0.0
            assert pair.positive.question == pair.question == pair.negative.question


class TestSqa5Way:
    def _samples(self, n=8):
        return [(f"question {i}", f"rationale {i}") for i in range(n)]

    def test_shape(self):
        probes = build_sqa_5way(self._samples(5), seed=0)
        assert len(probes) == 5
        for probe in probes:
            assert len(probe.options) == 5
            assert len(set(probe.options)) == 5

    def test_gold_at_stated_index(self):
        for probe, (_, gold) in zip(build_sqa_5way(self._samples(), seed=2), self._samples()):
            assert probe.options[probe.gold_index] == gold

    def test_own_rationale_never_a_distractor(self):
        for probe, (_, gold) in zip(build_sqa_5way(self._samples(), seed=3), self._samples()):
            distractors = [o for i, o in enumerate(probe.options) if i != probe.gold_index]
            assert gold not in distractors

    def test_too_few_samples_rejected(self):
        with pytest.raises(ValidationError):
            build_sqa_5way(self._samples(4), seed=0)

    def test_deterministic(self):
        assert build_sqa_5way(self._samples(), seed=9) == build_sqa_5way(self._samples(), seed=9)

    def test_duplicate_rationales_excluded_from_pool(self):
        samples = [(f"q{i}", "shared rationale") for i in range(5)] + [
            (f"q{i}", f"unique {i}") for i in range(5, 10)
        ]
        probes = build_sqa_5way(samples, seed=1)
        for probe, (_, gold) in zip(probes, samples):
            distractors = [o for i, o in enumerate(probe.options) if i != probe.gold_index]
            assert gold not in distractors

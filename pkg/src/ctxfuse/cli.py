"""Command-line orchestration.

Subcommands: eval (one strategy end to end), sweep (strategy ladder plus
selection), build-rr-data (ranker training-data synthesis), report
(re-render a report from run records), probe (MC1 / five-way relevance),
and prompt (render a shipped template). Every run writes a manifest with
its config, seed, and input digests; outputs are byte-identical across
repeated runs and across --jobs settings.

Exit codes: 0 success, 2 validation failure, 3 remote-service failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Sequence

from .builders import (
    GoldParagraph,
    RRExample,
    build_negative_iterator_like,
    build_positive_iterator_like,
    build_rationale_like,
    build_sqa_5way,
    filter_leaked_negatives,
    pair_shared_norm,
)
from .contexts import ContextBudget, build_model_input, format_combined_context, format_retrieved_context
from .fusion import (
    Category,
    ScoredComponents,
    StrategyConfig,
    SweepSample,
    combine,
    default_ladder,
    select_best_per_dataset,
    select_generally_best,
    sweep,
)
from .metrics import extract_answer, normalize_answer, numeracy_f1, round1, score_binary, score_multichoice
from .prompts import build_negative_gen_prompt
from .records import (
    EvalSample,
    RunRecord,
    ValidationError,
    load_eval_dataset,
    load_run_records,
    write_jsonl,
    write_run_records,
    write_run_report,
)
from .scoring import Scorer, ScorerError, make_scorer, mc1_select, relevance_5way_accuracy
from .templates import NEGATIVE_GEN_EXEMPLARS, default_template
from .prompts import build_cot_prompt, to_answer_only

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_REMOTE = 3


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with path.open("rb") as handle:
        for chunk in iter(lambda: handle.read(65536), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(
    out_dir: Path, command: str, config: dict[str, Any], inputs: Sequence[Path]
) -> None:
    manifest = {
        "command": command,
        "config": config,
        "inputs": {str(p): _sha256(p) for p in sorted(inputs)},
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _parse_data_specs(specs: Sequence[str]) -> list[tuple[str, Path]]:
    parsed = []
    for spec in specs:
        if "=" not in spec:
            raise ValidationError(
                f"--dataset expects name=path, got {spec!r}"
            )
        name, _, path = spec.partition("=")
        if not name or not path:
            raise ValidationError(f"--dataset expects name=path, got {spec!r}")
        parsed.append((name, Path(path)))
    return parsed


def _load_datasets(specs: Sequence[str]) -> list[EvalSample]:
    samples: list[EvalSample] = []
    for name, path in _parse_data_specs(specs):
        samples.extend(load_eval_dataset(path, expected_dataset=name))
    samples.sort(key=lambda s: (s.dataset, s.id))
    return samples


def _load_predictions(path: Path) -> dict[tuple[str, str], dict[str, str]]:
    """Recorded generations keyed by (dataset, id), one text per category."""
    predictions: dict[tuple[str, str], dict[str, str]] = {}
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{line_no}: malformed record: {exc}") from exc
            key = (str(data.get("dataset", "")), str(data.get("id", "")))
            generations = data.get("generations", {})
            if not isinstance(generations, dict):
                raise ValidationError(f"{path}:{line_no}: field 'generations' must be a map")
            predictions[key] = {str(k): str(v) for k, v in generations.items()}
    return predictions


def _strategy_from_args(args: argparse.Namespace) -> StrategyConfig:
    label = args.strategy.strip()
    method, threshold = label, None
    if "(" in label:
        if not label.endswith(")"):
            raise ValidationError(f"malformed strategy label {label!r}")
        method, raw = label[:-1].split("(", 1)
        try:
            threshold = float(raw)
        except ValueError as exc:
            raise ValidationError(f"malformed threshold in {label!r}") from exc
    if args.threshold is not None:
        if threshold is not None and threshold != args.threshold:
            raise ValidationError("--threshold conflicts with the threshold in --strategy")
        threshold = args.threshold
    return StrategyConfig(method=method, threshold=threshold)


def _parse_ladder(raw: str | None) -> list[StrategyConfig]:
    if raw is None:
        return default_ladder()
    return [StrategyConfig.parse(part) for part in raw.split(",") if part.strip()]


def _gold_option_index(sample: EvalSample) -> int:
    assert sample.options is not None
    for gold in sample.golds:
        gold_tokens = normalize_answer(gold).tokens
        for i, option in enumerate(sample.options):
            if normalize_answer(option).tokens == gold_tokens:
                return i
    raise ValidationError(
        f"sample {sample.id!r}: no option matches any gold answer"
    )


def _score_answer(sample: EvalSample, answer: str) -> float:
    if sample.answer_type == "binary":
        return float(score_binary(answer, sample.golds[0]))
    if sample.answer_type == "multichoice":
        assert sample.options is not None
        return float(
            score_multichoice(answer, sample.options, _gold_option_index(sample))
        )
    return numeracy_f1(answer, sample.golds)


def _component_scores(
    sample: EvalSample, scorer: Scorer, budget: ContextBudget
) -> tuple[ScoredComponents, str]:
    iterator_ctx = (
        format_retrieved_context(sample.fragments, budget) if sample.fragments else ""
    )
    rationale = sample.rationale or ""
    if not rationale and not iterator_ctx:
        raise ValidationError(
            f"sample {sample.id!r} has neither a rationale nor retrieved fragments"
        )
    s_r = scorer.score(sample.question, rationale) if rationale else None
    s_i = scorer.score(sample.question, iterator_ctx) if iterator_ctx else None
    return ScoredComponents(rationale_score=s_r, iterator_score=s_i), iterator_ctx


def _category_context(
    sample: EvalSample, category: Category, iterator_ctx: str, budget: ContextBudget
) -> str:
    rationale = sample.rationale or ""
    fragments = sample.fragments or ()
    if category is Category.RATIONALE_ONLY:
        return budget.truncate(rationale)
    if category is Category.ITERATOR_ONLY:
        return iterator_ctx
    return format_combined_context(rationale, fragments, budget)


def _map_jobs(func, items, jobs: int) -> list:
    if jobs <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, items))


def cmd_eval(args: argparse.Namespace) -> int:
    samples = _load_datasets(args.dataset)
    if not samples:
        raise ValidationError("no samples loaded")
    predictions = _load_predictions(Path(args.predictions))
    strategy = _strategy_from_args(args)
    scorer = make_scorer(args.scorer)
    budget = ContextBudget(max_tokens=args.budget)
    out_dir = Path(args.out)

    def stage(sample: EvalSample) -> tuple[EvalSample, ScoredComponents, str, Category]:
        scores, iterator_ctx = _component_scores(sample, scorer, budget)
        return sample, scores, iterator_ctx, combine(scores, strategy)

    staged = _map_jobs(stage, samples, args.jobs)

    missing = [
        f"{sample.dataset}/{sample.id}"
        for sample, _, _, category in staged
        if category.value not in predictions.get((sample.dataset, sample.id), {})
    ]
    if missing:
        raise ValidationError(
            "missing predictions for the selected category of: " + ", ".join(missing)
        )

    def finish(item: tuple[EvalSample, ScoredComponents, str, Category]) -> tuple[RunRecord, dict[str, Any]]:
        sample, scores, iterator_ctx, category = item
        context = _category_context(sample, category, iterator_ctx, budget)
        model_input = build_model_input(sample.question, sample.options, context)
        generation = predictions[(sample.dataset, sample.id)][category.value]
        _, answer = extract_answer(generation)
        metric = _score_answer(sample, answer)
        record = RunRecord(
            sample_id=sample.id,
            dataset=sample.dataset,
            strategy=strategy.label,
            category=category.value,
            prediction=answer,
            metric_value=100.0 * metric,
        )
        detail = {
            "id": sample.id,
            "dataset": sample.dataset,
            "rationale_score": scores.rationale_score,
            "iterator_score": scores.iterator_score,
            "category": category.value,
            "model_input": model_input,
            "prediction": answer,
            "metric_value": 100.0 * metric,
        }
        return record, detail

    results = _map_jobs(finish, staged, args.jobs)
    records = [record for record, _ in results]
    details = [detail for _, detail in results]

    write_run_records(records, out_dir / "records.jsonl")
    write_jsonl(out_dir / "samples.jsonl", details)
    write_run_report(records, out_dir / "summary.jsonl", out_dir / "report.txt")
    _write_manifest(
        out_dir,
        "eval",
        {
            "datasets": sorted(args.dataset),
            "predictions": args.predictions,
            "strategy": strategy.label,
            "scorer": args.scorer,
            "budget": args.budget,
            "seed": args.seed,
        },
        [path for _, path in _parse_data_specs(args.dataset)] + [Path(args.predictions)],
    )
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    samples = _load_datasets(args.dataset)
    if not samples:
        raise ValidationError("no samples loaded")
    predictions = _load_predictions(Path(args.predictions))
    ladder = _parse_ladder(args.ladder)
    scorer = make_scorer(args.scorer)
    budget = ContextBudget(max_tokens=args.budget)
    out_dir = Path(args.out)

    missing = []
    for sample in samples:
        generations = predictions.get((sample.dataset, sample.id), {})
        for category in Category:
            if category.value not in generations:
                missing.append(f"{sample.dataset}/{sample.id}:{category.value}")
    if missing:
        raise ValidationError(
            "sweep needs all three category predictions; missing: " + ", ".join(missing)
        )

    def stage(sample: EvalSample) -> SweepSample:
        scores, _ = _component_scores(sample, scorer, budget)
        generations = predictions[(sample.dataset, sample.id)]
        outcomes = {}
        for category in Category:
            _, answer = extract_answer(generations[category.value])
            outcomes[category] = 100.0 * _score_answer(sample, answer)
        return SweepSample(
            sample_id=sample.id, dataset=sample.dataset, scores=scores, outcomes=outcomes
        )

    sweep_samples = _map_jobs(stage, samples, args.jobs)
    table = sweep(sweep_samples, ladder)
    generally_best = select_generally_best(table)
    per_dataset = select_best_per_dataset(table)

    rows = [
        {
            "strategy": config.label,
            "dataset": dataset,
            "mean_metric": table.value(config, dataset),
        }
        for config in table.configs
        for dataset in table.datasets
    ]
    write_jsonl(out_dir / "sweep_table.jsonl", rows)
    selection = {
        "generally_best": generally_best.label,
        "generally_best_mean": round1(table.macro(generally_best)),
        "best_per_dataset": {d: config.label for d, config in sorted(per_dataset.items())},
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "selection.json").write_text(
        json.dumps(selection, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    lines = ["strategy" + "".join(f"\t{d}" for d in table.datasets) + "\tMean"]
    for config in table.configs:
        cells = "".join(f"\t{round1(table.value(config, d)):.1f}" for d in table.datasets)
        lines.append(f"{config.label}{cells}\t{round1(table.macro(config)):.1f}")
    (out_dir / "sweep_table.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    _write_manifest(
        out_dir,
        "sweep",
        {
            "datasets": sorted(args.dataset),
            "predictions": args.predictions,
            "ladder": [config.label for config in ladder],
            "scorer": args.scorer,
            "budget": args.budget,
            "seed": args.seed,
        },
        [path for _, path in _parse_data_specs(args.dataset)] + [Path(args.predictions)],
    )
    return EXIT_OK


def _load_builder_inputs(path: Path) -> list[dict[str, Any]]:
    records = []
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{line_no}: malformed record: {exc}") from exc
    if not records:
        raise ValidationError(f"{path}: no builder input records")
    return records


def _load_llm_negatives(path: Path) -> list[dict[str, Any]]:
    with path.open("r", encoding="utf-8") as handle:
        return [json.loads(line) for line in handle if line.strip()]


def cmd_build_rr_data(args: argparse.Namespace) -> int:
    inputs = _load_builder_inputs(Path(args.input))
    budget = ContextBudget(max_tokens=args.budget)
    out_dir = Path(args.out)
    examples: list[RRExample] = []
    counts: dict[str, dict[str, dict[str, int]]] = {}

    def bump(dataset: str, construction: str, label: float) -> None:
        polarity = "positive" if label == 1.0 else "negative"
        counts.setdefault(dataset, {}).setdefault(construction, {}).setdefault(polarity, 0)
        counts[dataset][construction][polarity] += 1

    def add(example: RRExample) -> None:
        examples.append(example)
        bump(example.source_dataset, example.construction, example.label)

    for idx, record in enumerate(inputs):
        question = record.get("question", "")
        dataset = record.get("dataset", "unknown")
        if not question:
            raise ValidationError(f"builder input {idx}: missing question")
        paras = tuple(
            GoldParagraph.from_dict(p) for p in record.get("paragraphs", ())
        )
        seed = f"{args.seed}:{idx}"
        for fact in record.get("facts", ()):
            add(RRExample(question, fact, 1.0, "facts", dataset))
        if any(p.gold_indices for p in paras):
            add(
                RRExample(
                    question,
                    build_positive_iterator_like(paras, budget),
                    1.0,
                    "iterator_like",
                    dataset,
                )
            )
            add(
                RRExample(
                    question,
                    build_rationale_like(paras, positive=True),
                    1.0,
                    "rationale_like",
                    dataset,
                )
            )
        if any(len(p.gold_indices) < len(p.sentences) for p in paras):
            add(
                RRExample(
                    question,
                    build_negative_iterator_like(paras, budget, seed=seed),
                    0.0,
                    "iterator_like",
                    dataset,
                )
            )
            add(
                RRExample(
                    question,
                    build_rationale_like(paras, positive=False),
                    0.0,
                    "rationale_like",
                    dataset,
                )
            )

    leak_dropped = 0
    if args.llm_negatives:
        raw = _load_llm_negatives(Path(args.llm_negatives))
        triples = [
            (r.get("text", ""), r.get("answer", ""), bool(r.get("is_binary", False)))
            for r in raw
        ]
        retained = filter_leaked_negatives(triples)
        retained_texts = {t[0] for t in retained}
        leak_dropped = len(triples) - len(retained)
        for record in raw:
            if record.get("text", "") not in retained_texts:
                continue
            construction = (
                "llm_greedy" if record.get("decoding", "greedy") == "greedy" else "llm_sampled"
            )
            add(
                RRExample(
                    record.get("question", ""),
                    record.get("text", ""),
                    0.0,
                    construction,
                    record.get("dataset", "unknown"),
                )
            )

    pairing = pair_shared_norm(examples, seed=args.seed, passes=args.passes)

    write_jsonl(out_dir / "rr_examples.jsonl", (e.to_dict() for e in examples))
    write_jsonl(out_dir / "pairs.jsonl", (p.to_dict() for p in pairing.pairs))

    probe_inputs = [
        (r.get("question", ""), r.get("gold_rationale", ""))
        for r in inputs
        if r.get("gold_rationale")
    ]
    probe_count = 0
    if len(probe_inputs) >= 5:
        probes = build_sqa_5way(probe_inputs, seed=args.seed)
        write_jsonl(out_dir / "probe.jsonl", (p.to_dict() for p in probes))
        probe_count = len(probes)

    summary = {
        "counts": counts,
        "examples": len(examples),
        "pairs": len(pairing.pairs),
        "pairing_skipped_questions": pairing.skipped_questions,
        "leak_filter_dropped": leak_dropped,
        "probe_samples": probe_count,
    }
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "counts.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    inputs_paths = [Path(args.input)]
    if args.llm_negatives:
        inputs_paths.append(Path(args.llm_negatives))
    _write_manifest(
        out_dir,
        "build-rr-data",
        {
            "input": args.input,
            "llm_negatives": args.llm_negatives,
            "seed": args.seed,
            "passes": args.passes,
            "budget": args.budget,
        },
        inputs_paths,
    )
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    records = load_run_records(Path(args.records))
    if not records:
        raise ValidationError("no run records found")
    out_dir = Path(args.out)
    write_run_report(records, out_dir / "summary.jsonl", out_dir / "report.txt")
    _write_manifest(out_dir, "report", {"records": args.records}, [Path(args.records)])
    return EXIT_OK


def cmd_probe(args: argparse.Namespace) -> int:
    path = Path(args.input)
    probes: list[tuple[str, list[str], int]] = []
    with path.open("r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path}:{line_no}: malformed record: {exc}") from exc
            probes.append(
                (
                    data.get("question", ""),
                    list(data.get("options", ())),
                    int(data.get("gold_index", -1)),
                )
            )
    if not probes:
        raise ValidationError("probe input is empty")
    scorer = make_scorer(args.scorer)
    if args.mode == "5way":
        accuracy = relevance_5way_accuracy(scorer, probes)
    else:
        correct = sum(
            1
            for question, options, gold_index in probes
            if mc1_select(scorer, question, options) == gold_index
        )
        accuracy = correct / len(probes)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = {
        "mode": args.mode,
        "n": len(probes),
        "accuracy": accuracy,
        "accuracy_pct": round1(100.0 * accuracy),
    }
    (out_dir / "probe_report.json").write_text(
        json.dumps(result, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _write_manifest(
        out_dir,
        "probe",
        {"input": args.input, "scorer": args.scorer, "mode": args.mode},
        [path],
    )
    print(json.dumps(result, sort_keys=True))
    return EXIT_OK


def cmd_prompt(args: argparse.Namespace) -> int:
    if args.prompt_family == "negative_generation":
        rendered = build_negative_gen_prompt(list(NEGATIVE_GEN_EXEMPLARS), args.question)
    else:
        template = default_template(args.prompt_family, args.dialect)
        if args.answer_only:
            template = to_answer_only(template)
        rendered = build_cot_prompt(template, args.question)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(rendered, encoding="utf-8")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ctxfuse",
        description="Score-driven fusion of rationales and retrieved contexts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--dataset", action="append", required=True, metavar="NAME=PATH",
                       help="dataset name and JSONL path; repeatable")
        p.add_argument("--predictions", required=True,
                       help="JSONL of recorded generations per category")
        p.add_argument("--scorer", default="mock", help="'mock' or a service base URL")
        p.add_argument("--budget", type=int, default=512, help="context token budget")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--jobs", type=int, default=1, help="parallel workers")

    p_eval = sub.add_parser("eval", help="evaluate one combination strategy")
    add_common(p_eval)
    p_eval.add_argument("--strategy", required=True, help="e.g. EitherOrBoth(0.9)")
    p_eval.add_argument("--threshold", type=float, default=None)
    p_eval.set_defaults(func=cmd_eval)

    p_sweep = sub.add_parser("sweep", help="sweep a strategy ladder and select")
    add_common(p_sweep)
    p_sweep.add_argument("--ladder", default=None,
                         help="comma-separated strategy labels (default: full ladder)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_build = sub.add_parser("build-rr-data", help="synthesize ranker training data")
    p_build.add_argument("--input", required=True, help="builder input JSONL")
    p_build.add_argument("--llm-negatives", default=None,
                         help="recorded LLM negative generations JSONL")
    p_build.add_argument("--seed", type=int, required=True)
    p_build.add_argument("--passes", type=int, default=1,
                         help="shared-normalization pairing passes")
    p_build.add_argument("--budget", type=int, default=512)
    p_build.add_argument("--out", required=True)
    p_build.set_defaults(func=cmd_build_rr_data)

    p_report = sub.add_parser("report", help="re-render a report from run records")
    p_report.add_argument("--records", required=True)
    p_report.add_argument("--out", required=True)
    p_report.set_defaults(func=cmd_report)

    p_probe = sub.add_parser("probe", help="score a multiple-choice probe set")
    p_probe.add_argument("--input", required=True, help="probe JSONL")
    p_probe.add_argument("--scorer", default="mock")
    p_probe.add_argument("--mode", choices=("mc1", "5way"), default="mc1")
    p_probe.add_argument("--out", required=True)
    p_probe.set_defaults(func=cmd_probe)

    p_prompt = sub.add_parser("prompt", help="render a shipped prompt template")
    p_prompt.add_argument("--prompt-family", required=True,
                          choices=("binary", "span_or_binary", "multichoice",
                                   "negative_generation"))
    p_prompt.add_argument("--dialect", choices=("assistant_style", "qa_style"),
                          default="assistant_style")
    p_prompt.add_argument("--answer-only", action="store_true")
    p_prompt.add_argument("--question", required=True)
    p_prompt.add_argument("--out", default=None)
    p_prompt.set_defaults(func=cmd_prompt)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ScorerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REMOTE
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())

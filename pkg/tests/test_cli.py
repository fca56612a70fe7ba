import json
from pathlib import Path


from ctxfuse.cli import main

from cli_fixtures import (
    write_builder_fixture,
    write_eval_fixture,
    write_llm_negatives_fixture,
    write_sweep_fixture,
)


def run_cli(*argv):
    return main([str(a) for a in argv])


def dir_bytes(path: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(path.iterdir()) if p.is_file()}


def eval_args(data_specs, predictions, out, strategy="NaiveConcatenation", jobs=1):
    args = ["eval"]
    for spec in data_specs:
        args += ["--dataset", spec]
    args += [
        "--predictions", predictions,
        "--strategy", strategy,
        "--scorer", "mock",
        "--out", out,
        "--jobs", jobs,
    ]
    return args


class TestEval:
    def test_mean_matches_hand_computation(self, tmp_path):
        data, predictions, expected_mean = write_eval_fixture(tmp_path)
        out = tmp_path / "out"
        assert run_cli(*eval_args(data, predictions, out)) == 0
        summary = [
            json.loads(line)
            for line in (out / "summary.jsonl").read_text().splitlines()
        ]
        mean_row = [r for r in summary if r["dataset"] == "Mean"][0]
        assert mean_row["metric_mean"] == expected_mean

    def test_reruns_byte_identical(self, tmp_path):
        data, predictions, _ = write_eval_fixture(tmp_path)
        out1, out2 = tmp_path / "r1", tmp_path / "r2"
        run_cli(*eval_args(data, predictions, out1))
        run_cli(*eval_args(data, predictions, out2))
        assert dir_bytes(out1) == dir_bytes(out2)

    def test_parallelism_does_not_change_output(self, tmp_path):
        data, predictions, _ = write_eval_fixture(tmp_path)
        out1, out8 = tmp_path / "j1", tmp_path / "j8"
        run_cli(*eval_args(data, predictions, out1, jobs=1))
        run_cli(*eval_args(data, predictions, out8, jobs=8))
        assert dir_bytes(out1) == dir_bytes(out8)

    def test_missing_prediction_lists_sample_ids(self, tmp_path, capsys):
        data, predictions, _ = write_eval_fixture(tmp_path)
        rows = [json.loads(l) for l in Path(predictions).read_text().splitlines()]
        del rows[0]["generations"]["NaiveConcat"]
        del rows[2]["generations"]["NaiveConcat"]
        Path(predictions).write_text("".join(json.dumps(r) + "\n" for r in rows))
        code = run_cli(*eval_args(data, predictions, tmp_path / "out"))
        assert code == 2
        err = capsys.readouterr().err
        assert "e0" in err and "e2" in err

    def test_strategy_and_threshold_flags_compose(self, tmp_path):
        data, predictions, _ = write_eval_fixture(tmp_path)
        out = tmp_path / "out"
        code = run_cli(
            *eval_args(data, predictions, out, strategy="RationaleDefault"),
            "--threshold", "0.75",
        )
        assert code == 0
        records = [json.loads(l) for l in (out / "records.jsonl").read_text().splitlines()]
        assert all(r["strategy"] == "RationaleDefault(0.75)" for r in records)

    def test_manifest_records_inputs_and_config(self, tmp_path):
        data, predictions, _ = write_eval_fixture(tmp_path)
        out = tmp_path / "out"
        run_cli(*eval_args(data, predictions, out))
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["command"] == "eval"
        assert manifest["config"]["strategy"] == "NaiveConcatenation"
        assert len(manifest["inputs"]) == 2
        assert all(len(digest) == 64 for digest in manifest["inputs"].values())

    def test_remote_failure_exit_code(self, tmp_path):
        data, predictions, _ = write_eval_fixture(tmp_path)
        args = eval_args(data, predictions, tmp_path / "out")
        idx = args.index("mock")
        args[idx] = "http://127.0.0.1:1"
        assert run_cli(*args) == 3


class TestSweep:
    def _run(self, tmp_path, jobs=1, out_name="sweep_out"):
        data, predictions = write_sweep_fixture(tmp_path)
        out = tmp_path / out_name
        args = ["sweep"]
        for spec in data:
            args += ["--dataset", spec]
        args += [
            "--predictions", predictions,
            "--scorer", "mock",
            "--out", out,
            "--jobs", jobs,
        ]
        assert run_cli(*args) == 0
        return out

    def test_engineered_winner_selected(self, tmp_path):
        out = self._run(tmp_path)
        selection = json.loads((out / "selection.json").read_text())
        assert selection["generally_best"] == "EitherOrBoth(0.9)"
        assert selection["generally_best_mean"] == 100.0

    def test_per_dataset_winners_reported_distinctly(self, tmp_path):
        out = self._run(tmp_path)
        selection = json.loads((out / "selection.json").read_text())
        assert selection["best_per_dataset"]["d1"] == "EitherOrBoth(0.9)"
        assert selection["best_per_dataset"]["d2"] == "MaxScore"

    def test_table_covers_full_ladder(self, tmp_path):
        out = self._run(tmp_path)
        rows = [json.loads(l) for l in (out / "sweep_table.jsonl").read_text().splitlines()]
        assert len(rows) == 18 * 2

    def test_single_config_ladder(self, tmp_path):
        data, predictions = write_sweep_fixture(tmp_path)
        out = tmp_path / "one"
        args = ["sweep", "--predictions", predictions, "--scorer", "mock",
                "--out", out, "--ladder", "MaxScore"]
        for spec in data:
            args += ["--dataset", spec]
        assert run_cli(*args) == 0
        selection = json.loads((out / "selection.json").read_text())
        assert selection["generally_best"] == "MaxScore"

    def test_parallelism_invariant(self, tmp_path):
        out1 = self._run(tmp_path, jobs=1, out_name="s1")
        out8 = self._run(tmp_path, jobs=8, out_name="s8")
        assert dir_bytes(out1) == dir_bytes(out8)

    def test_missing_category_prediction_fails(self, tmp_path):
        data, predictions = write_sweep_fixture(tmp_path)
        rows = [json.loads(l) for l in Path(predictions).read_text().splitlines()]
        del rows[0]["generations"]["IteratorOnly"]
        Path(predictions).write_text("".join(json.dumps(r) + "\n" for r in rows))
        args = ["sweep", "--predictions", predictions, "--scorer", "mock",
                "--out", tmp_path / "out"]
        for spec in data:
            args += ["--dataset", spec]
        assert run_cli(*args) == 2


class TestBuildRRData:
    def _run(self, tmp_path, seed=7, out_name="rr_out", with_llm=True):
        builder_input = write_builder_fixture(tmp_path)
        out = tmp_path / out_name
        args = ["build-rr-data", "--input", builder_input, "--seed", seed,
                "--passes", 2, "--out", out]
        if with_llm:
            args += ["--llm-negatives", write_llm_negatives_fixture(tmp_path)]
        assert run_cli(*args) == 0
        return out

    def test_outputs_non_empty(self, tmp_path):
        out = self._run(tmp_path)
        examples = [json.loads(l) for l in (out / "rr_examples.jsonl").read_text().splitlines()]
        assert any(e["label"] == 1.0 and e["construction"] == "iterator_like" for e in examples)
        assert any(e["label"] == 0.0 and e["construction"] == "iterator_like" for e in examples)
        assert any(e["construction"] == "rationale_like" for e in examples)
        assert any(e["construction"] == "facts" for e in examples)
        assert (out / "pairs.jsonl").read_text().strip()
        assert (out / "probe.jsonl").read_text().strip()

    def test_leak_filter_drop_count_reported(self, tmp_path):
        out = self._run(tmp_path)
        counts = json.loads((out / "counts.json").read_text())
        assert counts["leak_filter_dropped"] == 1
        examples = [json.loads(l) for l in (out / "rr_examples.jsonl").read_text().splitlines()]
        texts = [e["context"] for e in examples]
        assert "Iron replaced bronze everywhere." not in texts
        assert "yes ducks are marsupials" in texts  # binary retained

    def test_same_seed_identical_files(self, tmp_path):
        out1 = self._run(tmp_path, out_name="rr1")
        out2 = self._run(tmp_path, out_name="rr2")
        assert dir_bytes(out1) == dir_bytes(out2)

    def test_counts_cover_methods_and_polarity(self, tmp_path):
        out = self._run(tmp_path)
        counts = json.loads((out / "counts.json").read_text())
        factsrc = counts["counts"]["factsrc"]
        assert factsrc["iterator_like"]["positive"] >= 1
        assert factsrc["iterator_like"]["negative"] >= 1
        assert factsrc["llm_sampled"]["negative"] >= 1


class TestProbeAndReport:
    def test_probe_on_built_probe_set(self, tmp_path):
        rr_out = TestBuildRRData()._run(tmp_path, with_llm=False)
        out = tmp_path / "probe_out"
        code = run_cli("probe", "--input", rr_out / "probe.jsonl", "--scorer", "mock",
                       "--mode", "5way", "--out", out)
        assert code == 0
        result = json.loads((out / "probe_report.json").read_text())
        assert result["n"] == 5
        assert 0.0 <= result["accuracy"] <= 1.0

    def test_mc1_mode(self, tmp_path):
        probe_path = tmp_path / "probe.jsonl"
        rows = [
            {"question": "what shape is earth",
             "options": ["the earth is a sphere", "flat pizza topping"],
             "gold_index": 0},
        ]
        probe_path.write_text("".join(json.dumps(r) + "\n" for r in rows))
        out = tmp_path / "mc1_out"
        assert run_cli("probe", "--input", probe_path, "--scorer", "mock", "--out", out) == 0
        result = json.loads((out / "probe_report.json").read_text())
        assert result["accuracy"] == 1.0

    def test_report_rebuild_matches_eval_report(self, tmp_path):
        data, predictions, _ = write_eval_fixture(tmp_path)
        eval_out = tmp_path / "eval_out"
        run_cli(*eval_args(data, predictions, eval_out))
        report_out = tmp_path / "report_out"
        assert run_cli("report", "--records", eval_out / "records.jsonl",
                       "--out", report_out) == 0
        assert (report_out / "summary.jsonl").read_bytes() == (
            eval_out / "summary.jsonl"
        ).read_bytes()
        assert (report_out / "report.txt").read_bytes() == (
            eval_out / "report.txt"
        ).read_bytes()


class TestPrompt:
    def test_prompt_to_file(self, tmp_path):
        out = tmp_path / "prompt.txt"
        code = run_cli("prompt", "--prompt-family", "binary", "--dialect", "qa_style",
                       "--question", "Is water wet?", "--out", out)
        assert code == 0
        assert out.read_text(encoding="utf-8").endswith("Q: Is water wet? \nA: ")

    def test_negative_generation_family(self, tmp_path):
        out = tmp_path / "neg.txt"
        code = run_cli("prompt", "--prompt-family", "negative_generation",
                       "--question", "Ducks swim?", "--out", out)
        assert code == 0
        text = out.read_text(encoding="utf-8")
        assert text.startswith("Generate a false context. Examples: \n\n")
        assert text.endswith("Q: Ducks swim? \nFalse context: ")

    def test_answer_only_variant(self, tmp_path):
        out = tmp_path / "ao.txt"
        run_cli("prompt", "--prompt-family", "binary", "--answer-only",
                "--question", "X?", "--out", out)
        assert "So the answer is" not in out.read_text(encoding="utf-8")


class TestValidationExitCodes:
    def test_bad_data_spec(self, tmp_path, capsys):
        assert run_cli("eval", "--dataset", "nopath", "--predictions", "x",
                       "--strategy", "MaxScore", "--out", tmp_path) == 2

    def test_bad_strategy_label(self, tmp_path):
        data, predictions, _ = write_eval_fixture(tmp_path)
        args = eval_args(data, predictions, tmp_path / "out", strategy="Sideways(0.5)")
        assert run_cli(*args) == 2

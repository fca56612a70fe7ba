import json

import pytest

from ctxfuse.records import (
    EvalSample,
    Fragment,
    RunRecord,
    ValidationError,
    build_report,
    load_eval_dataset,
    load_run_records,
    render_report_table,
    summary_mean,
    write_eval_dataset,
    write_run_records,
    write_run_report,
)


def make_sample(i=0, dataset="sqa", **overrides):
    data = {
        "id": f"q{i}",
        "dataset": dataset,
        "answer_type": "span",
        "question": f"question {i}?",
        "golds": ("answer",),
    }
    data.update(overrides)
    return EvalSample(**data)


def write_lines(path, rows):
    path.write_text("".join(json.dumps(r) + "\n" for r in rows), encoding="utf-8")


class TestLoadEvalDataset:
    def test_valid_file_preserves_order(self, tmp_path):
        path = tmp_path / "sqa.jsonl"
        rows = [make_sample(i).to_dict() for i in range(3)]
        write_lines(path, rows)
        samples = load_eval_dataset(path, "sqa")
        assert [s.id for s in samples] == ["q0", "q1", "q2"]

    def test_multichoice_without_options_names_field(self, tmp_path):
        path = tmp_path / "csqa.jsonl"
        row = make_sample(0, dataset="csqa").to_dict()
        row["answer_type"] = "multichoice"
        write_lines(path, [row])
        with pytest.raises(ValidationError, match="options"):
            load_eval_dataset(path, "csqa")

    def test_duplicate_id_cites_the_id(self, tmp_path):
        path = tmp_path / "sqa.jsonl"
        row = make_sample(1).to_dict()
        write_lines(path, [row, row])
        with pytest.raises(ValidationError, match="q1"):
            load_eval_dataset(path, "sqa")

    def test_malformed_line_names_line_number(self, tmp_path):
        path = tmp_path / "sqa.jsonl"
        path.write_text(json.dumps(make_sample().to_dict()) + "\n{broken\n", encoding="utf-8")
        with pytest.raises(ValidationError, match=":2"):
            load_eval_dataset(path, "sqa")

    def test_wrong_dataset_rejected(self, tmp_path):
        path = tmp_path / "sqa.jsonl"
        write_lines(path, [make_sample().to_dict()])
        with pytest.raises(ValidationError, match="dataset"):
            load_eval_dataset(path, "musique")

    def test_unknown_fields_ignored(self, tmp_path):
        path = tmp_path / "sqa.jsonl"
        row = make_sample().to_dict()
        row["extra_upstream_field"] = {"nested": True}
        write_lines(path, [row])
        assert load_eval_dataset(path, "sqa")[0].id == "q0"

    def test_round_trip(self, tmp_path):
        samples = [
            make_sample(0, rationale="Because."),
            make_sample(
                1,
                fragments=(Fragment("T", ("S1.", "S2.")),),
            ),
            make_sample(
                2,
                answer_type="multichoice",
                options=("a", "b"),
                golds=("b",),
            ),
        ]
        path = tmp_path / "sqa.jsonl"
        write_eval_dataset(samples, path)
        assert load_eval_dataset(path, "sqa") == samples
        write_eval_dataset(load_eval_dataset(path, "sqa"), tmp_path / "again.jsonl")
        assert (tmp_path / "again.jsonl").read_bytes() == path.read_bytes()


class TestSampleValidation:
    def test_golds_required(self):
        with pytest.raises(ValidationError, match="golds"):
            make_sample(golds=())

    def test_options_forbidden_outside_multichoice(self):
        with pytest.raises(ValidationError, match="options"):
            make_sample(options=("a", "b"))

    def test_answer_type_checked(self):
        with pytest.raises(ValidationError, match="answer_type"):
            make_sample(answer_type="essay")

    def test_fragment_invariants(self):
        with pytest.raises(ValidationError):
            Fragment("", ("s",))
        with pytest.raises(ValidationError):
            Fragment("T", ())


def record(i, dataset, category, metric=50.0):
    return RunRecord(
        sample_id=f"s{i}",
        dataset=dataset,
        strategy="MaxScore",
        category=category,
        prediction="p",
        metric_value=metric,
    )


class TestRunReport:
    def test_single_category_row(self, tmp_path):
        records = [record(i, "d", "NaiveConcat") for i in range(10)]
        report = build_report(records)
        assert report.rows[0].category_pct == {
            "NaiveConcat": 100.0,
            "RationaleOnly": 0.0,
            "IteratorOnly": 0.0,
        }

    def test_hand_counted_split(self):
        records = [
            record(0, "d", "NaiveConcat"),
            record(1, "d", "NaiveConcat"),
            record(2, "d", "RationaleOnly"),
            record(3, "d", "IteratorOnly"),
        ]
        row = build_report(records).rows[0]
        assert row.category_pct == {
            "NaiveConcat": 50.0,
            "RationaleOnly": 25.0,
            "IteratorOnly": 25.0,
        }

    def test_published_share_mean(self):
        assert summary_mean([94.1, 79.3, 80.5, 62.6, 88.2]) == 80.9

    def test_percentages_sum_to_100(self):
        records = (
            [record(i, "d", "NaiveConcat") for i in range(3)]
            + [record(i + 3, "d", "RationaleOnly") for i in range(3)]
            + [record(i + 6, "d", "IteratorOnly") for i in range(3)]
        )
        row = build_report(records).rows[0]
        assert abs(sum(row.category_pct.values()) - 100.0) <= 0.1 + 1e-9

    def test_byte_identical_reruns(self, tmp_path):
        records = [record(i, "d", "NaiveConcat", metric=float(i)) for i in range(7)]
        write_run_report(records, tmp_path / "s1.jsonl", tmp_path / "t1.txt")
        write_run_report(records, tmp_path / "s2.jsonl", tmp_path / "t2.txt")
        assert (tmp_path / "s1.jsonl").read_bytes() == (tmp_path / "s2.jsonl").read_bytes()
        assert (tmp_path / "t1.txt").read_bytes() == (tmp_path / "t2.txt").read_bytes()

    def test_empty_input_rejected(self):
        with pytest.raises(ValidationError):
            build_report([])

    def test_table_contains_mean_row(self):
        records = [record(0, "a", "NaiveConcat", 40.0), record(1, "b", "RationaleOnly", 60.0)]
        table = render_report_table(build_report(records))
        assert table.splitlines()[-1].startswith("Mean")

    def test_metric_range_validated(self):
        with pytest.raises(ValidationError):
            record(0, "d", "NaiveConcat", metric=120.0)

    def test_category_validated(self):
        with pytest.raises(ValidationError):
            record(0, "d", "SomethingElse")

    def test_run_records_round_trip(self, tmp_path):
        records = [record(i, "d", "IteratorOnly", metric=float(i)) for i in range(4)]
        path = tmp_path / "records.jsonl"
        write_run_records(records, path)
        assert load_run_records(path) == records

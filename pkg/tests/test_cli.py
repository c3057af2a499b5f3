import json
import logging
from logging.handlers import RotatingFileHandler

import pandas as pd
import pytest

import cli.commands.sample_size as sample_size_command
from cli.app import run
from core.errors import NumericalError
from services.records import dump_records, load_records
from storage.files import FileReportStore, safe_name

ZERO_ROWS = [{"query_id": "q1", "score": 0.0}] * 40


def evaluate(path, out, *extra):
    return run(["evaluate", "--input", str(path), "--out", str(out), "--seed", "0", *extra])


def test_evaluate_writes_report_and_summary(write_jsonl, tmp_path, capsys):
    rows = ZERO_ROWS + [{"query_id": "q2", "score": s} for s in (0.2, 0.4, 0.9)]
    out = tmp_path / "out"
    assert evaluate(write_jsonl(rows), out, "--aggregate-field", "s_mean", "--threshold", "0.1") == 0

    stdout = capsys.readouterr().out.splitlines()
    assert stdout[0] == "queries: 2"
    assert stdout[1] == "s_mean > 0.1: 0.5000"
    assert stdout[2] == f"report: {out / 'report.json'}"

    document = json.loads((out / "report.json").read_text())
    assert document["schema"] == "probe-bounds/1"
    assert [q["query_id"] for q in document["queries"]] == ["q1", "q2"]
    assert document["queries"][0]["m_bin"]["epsilon"] is None
    assert document["queries"][1]["m_bin"] is None


def test_evaluate_is_byte_deterministic(write_jsonl, tmp_path):
    rows = [{"query_id": f"q{i % 3}", "score": (i * 37 % 101) / 100} for i in range(90)]
    path = write_jsonl(rows)
    assert evaluate(path, tmp_path / "a") == 0
    assert evaluate(path, tmp_path / "b", "--jobs", "2") == 0
    assert (tmp_path / "a" / "report.json").read_bytes() == (tmp_path / "b" / "report.json").read_bytes()


def test_reloaded_records_give_identical_report(write_jsonl, tmp_path):
    rows = [{"query_id": "q", "generation": f"answer {i}", "reference": "answer 3"} for i in range(6)]
    path = write_jsonl(rows)
    copy = tmp_path / "copy.jsonl"
    dump_records(load_records(path), copy)

    assert evaluate(path, tmp_path / "a", "--h", "rouge-l") == 0
    assert evaluate(copy, tmp_path / "b", "--h", "rouge-l") == 0
    assert FileReportStore(tmp_path / "a").load_report() == FileReportStore(tmp_path / "b").load_report()


def test_evaluate_plot_tables(write_jsonl, tmp_path):
    out = tmp_path / "out"
    assert evaluate(write_jsonl(ZERO_ROWS), out, "--plots") == 0

    histogram = pd.read_csv(out / "plots" / "q1_histogram.csv")
    assert histogram["count"].iloc[0] == 40
    assert histogram["count"].iloc[1:].sum() == 0

    cdf = pd.read_csv(out / "plots" / "q1_cdf.csv")
    assert cdf["x"].iloc[0] == 0.0
    assert cdf["ecdf"].iloc[0] == 1.0

    convergence = pd.read_csv(out / "plots" / "q1_convergence.csv")
    assert convergence["size"].tolist() == [16, 32, 40]
    assert (convergence["s_mean"] == 0.0).all()


def test_safe_name_keeps_clean_names_and_separates_rewritten_ones():
    assert safe_name("a_b") == "a_b"
    assert safe_name("a/b") != safe_name("a_b")
    assert safe_name("a/b") != safe_name("a:b")
    assert safe_name("a/b") == safe_name("a/b")
    assert safe_name("") not in ("", "_")


def test_plot_tables_of_colliding_query_ids_are_kept_apart(write_jsonl, tmp_path):
    rows = [{"query_id": query_id, "score": 0.5} for query_id in ("a/b", "a_b") for _ in range(4)]
    out = tmp_path / "out"
    assert evaluate(write_jsonl(rows), out, "--plots") == 0
    assert len(list((out / "plots").glob("*.csv"))) == 6
    assert (out / "plots" / "a_b_histogram.csv").exists()


@pytest.mark.parametrize(
    "rows",
    [
        ['{"query_id": "q", "score": 0.1}', '{"query_id": "q", "score": 2}'],
        ['not json'],
        [{"query_id": "q", "score": 0.1}, {"query_id": "q", "generation": "a", "reference": "b"}],
    ],
)
def test_bad_input_exits_with_ingestion_code(write_jsonl, tmp_path, rows):
    assert evaluate(write_jsonl(rows), tmp_path / "out") == 3
    assert not (tmp_path / "out" / "report.json").exists()


def test_missing_input_exits_with_ingestion_code(tmp_path):
    assert evaluate(tmp_path / "missing.jsonl", tmp_path / "out") == 3


@pytest.mark.parametrize(
    "extra",
    [("--alpha", "1.5"), ("--alpha", "0"), ("--partition-k", "0"), ("--rho", "-1"), ("--seed", "-3"), ("--bogus",)],
)
def test_usage_errors_exit_two(write_jsonl, tmp_path, extra):
    assert evaluate(write_jsonl(ZERO_ROWS), tmp_path / "out", *extra) == 2


def test_scorer_mismatch_exits_two(write_jsonl, tmp_path):
    assert evaluate(write_jsonl(ZERO_ROWS), tmp_path / "out", "--h", "keyword") == 2


def test_no_command_is_usage_error():
    assert run([]) == 2


def test_sample_size_command(capsys):
    assert run(["sample-size", "--epsilon", "0.05", "--sided", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "1060"
    assert lines[1].startswith("# two-sided, alpha=0.01")


def test_sample_size_rejects_bad_epsilon():
    assert run(["sample-size", "--epsilon", "0"]) == 2
    assert run(["sample-size", "--epsilon", "0.05", "--sided", "3"]) == 2


def test_numerical_failure_exits_four(monkeypatch):
    def fail(*args, **kwargs):
        raise NumericalError("did not converge", {"max_iter": 1})

    monkeypatch.setattr(sample_size_command, "sample_size_for", fail)
    assert run(["sample-size", "--epsilon", "0.05"]) == 4


def test_inspect_decoding(tmp_path, capsys):
    path = tmp_path / "probs.txt"
    path.write_text("# probe-matrix/1 vocab=2 steps=2\n0.9 0.1\n0.3 0.7\n")
    assert run(["inspect-decoding", "--matrix", str(path)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["steps"] == 2
    assert summary["vocab"] == 2
    assert summary["confidence"] == pytest.approx(0.8)
    assert summary["effective_temperature"] == 1.0

    assert run(["inspect-decoding", "--matrix", str(path), "--c-t", "0.75"]) == 0
    assert json.loads(capsys.readouterr().out)["effective_temperature"] == 0.0


def test_inspect_decoding_bad_matrix(tmp_path):
    path = tmp_path / "probs.txt"
    path.write_text("0.9 0.1\n")
    assert run(["inspect-decoding", "--matrix", str(path)]) == 3


def test_inspect_decoding_empty_matrix_is_ingestion_error(tmp_path):
    path = tmp_path / "probs.txt"
    path.write_text("# probe-matrix/1 vocab=2 steps=0\n")
    assert run(["inspect-decoding", "--matrix", str(path)]) == 3


def test_simulate_command(tmp_path, capsys):
    argv = ["simulate", "--dist", "point(0)", "--n", "20", "--trials", "5", "--partition-k", "10", "--out", str(tmp_path)]
    assert run(argv) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["schema"] == "probe-bounds/1"
    assert document["coverage"]["trials"] == 5
    assert all(count == 0 for count in document["coverage"]["violations"].values())
    assert json.loads((tmp_path / "coverage.json").read_text()) == document


def test_simulate_exact_rates(capsys):
    argv = ["simulate", "--dist", "bernoulli(0.6)", "--n", "6", "--trials", "10", "--metrics", "bin", "--exact"]
    assert run(argv) == 0
    document = json.loads(capsys.readouterr().out)
    assert document["exact_violation_rate"]["bin"] == pytest.approx(0.4 ** 6)


def test_simulate_bad_distribution():
    assert run(["simulate", "--dist", "gamma(1,1)", "--trials", "1"]) == 2


def test_log_file_receives_records(write_jsonl, tmp_path):
    log_file = tmp_path / "logs" / "run.log"
    try:
        assert run(["--log-file", str(log_file), "evaluate", "--input", str(write_jsonl(ZERO_ROWS)),
                    "--out", str(tmp_path / "out")]) == 0
        assert "Report saved" in log_file.read_text(encoding="utf-8")
    finally:
        root = logging.getLogger()
        for handler in list(root.handlers):
            if isinstance(handler, RotatingFileHandler):
                root.removeHandler(handler)
                handler.close()

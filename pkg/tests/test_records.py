import pytest

from core.errors import IngestionError
from services.records import EvaluationRecord, PayloadKind, dump_records, group_by_query, load_records


def test_load_all_payload_forms(write_jsonl):
    path = write_jsonl(
        [
            {"query_id": "q1", "score": 0.25},
            {"query_id": "q2", "generation": "a b", "reference": "a c"},
            {"query_id": "q3", "generation": "Hermione", "keywords": ["hermione"], "greedy": True},
        ]
    )
    records = load_records(path)
    assert [r.payload_kind for r in records] == [PayloadKind.SCORE, PayloadKind.REFERENCE, PayloadKind.KEYWORDS]
    assert records[2].greedy
    assert records[2].keywords == ("hermione",)
    assert [r.line_no for r in records] == [1, 2, 3]


def test_blank_lines_are_skipped_but_counted(write_jsonl):
    path = write_jsonl([{"query_id": "q", "score": 0.1}, "", {"query_id": "q", "score": 0.2}])
    assert [r.line_no for r in load_records(path)] == [1, 3]


@pytest.mark.parametrize(
    "bad",
    [
        '{"query_id": "q", "score": 1.5}',
        '{"query_id": "q", "score": "high"}',
        '{"query_id": "q", "score": true}',
        '{"query_id": "", "score": 0.1}',
        '{"query_id": "q"}',
        '{"query_id": "q", "score": 0.1, "generation": "x", "reference": "y"}',
        '{"query_id": "q", "generation": "x", "keywords": []}',
        '{"query_id": "q", "score": 0.1, "extra": 1}',
        '{"query_id": "q", "score": 0.1',
        '[1, 2]',
    ],
)
def test_ingestion_errors_name_the_line(write_jsonl, bad):
    path = write_jsonl([{"query_id": "q", "score": 0.1}, bad])
    with pytest.raises(IngestionError) as excinfo:
        load_records(path)
    assert excinfo.value.line_no == 2
    assert excinfo.value.exit_code == 3
    assert str(excinfo.value).startswith(f"{path}:2: ")


def test_missing_or_empty_file(tmp_path, write_jsonl):
    with pytest.raises(IngestionError):
        load_records(tmp_path / "nope.jsonl")
    with pytest.raises(IngestionError):
        load_records(write_jsonl([]))


def test_dump_and_reload_is_identity(tmp_path):
    records = [
        EvaluationRecord(query_id="b", score=0.5),
        EvaluationRecord(query_id="a", generation="x y", keywords=("x",), greedy=True),
        EvaluationRecord(query_id="a", generation="x y", reference="x z"),
    ]
    path = tmp_path / "out" / "records.jsonl"
    dump_records(records, path)
    assert load_records(path) == records


def test_group_by_query_sorts_keys_and_keeps_order():
    records = [
        EvaluationRecord(query_id="b", score=0.1),
        EvaluationRecord(query_id="a", score=0.2),
        EvaluationRecord(query_id="b", score=0.3),
    ]
    groups = group_by_query(records)
    assert list(groups) == ["a", "b"]
    assert [r.score for r in groups["b"]] == [0.1, 0.3]

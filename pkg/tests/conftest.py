import json

import pytest


@pytest.fixture
def write_jsonl(tmp_path):
    """Write a list of dicts as JSON lines and return the path."""

    def _write(rows, name="records.jsonl"):
        path = tmp_path / name
        with open(path, "w", encoding="utf-8") as f:
            for row in rows:
                f.write(row if isinstance(row, str) else json.dumps(row))
                f.write("\n")
        return path

    return _write

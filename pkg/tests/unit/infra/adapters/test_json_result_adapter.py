"""JSON Result Adapter 테스트."""

import json

import numpy as np
import pytest

from infra.adapters.json_result_adapter import JsonResultAdapter


@pytest.fixture
def adapter():
    return JsonResultAdapter()


def test_write_json_converts_numpy_and_nan(adapter, tmp_path):
    """numpy 값은 파이썬 값으로, NaN은 null로 저장."""
    # Arrange
    payload = {"k_hat": np.int64(2), "stats": np.array([1.5, 2.5]), "mu_hat": float("nan")}
    file_path = tmp_path / "result.json"

    # Act
    adapter.write_json(payload, str(file_path))

    # Assert
    text = file_path.read_text(encoding="utf-8")
    assert text.endswith("\n")
    assert json.loads(text) == {"k_hat": 2, "stats": [1.5, 2.5], "mu_hat": None}
    assert adapter.read_json(str(file_path))["k_hat"] == 2


def test_jsonl_round_trip(adapter, tmp_path):
    records = [{"rep": 0, "d_h": 1.0}, {"rep": 1, "d_h": None}]
    file_path = tmp_path / "reps.jsonl"

    adapter.write_jsonl(records, str(file_path))

    assert len(file_path.read_text(encoding="utf-8").splitlines()) == 2
    assert adapter.read_jsonl(str(file_path)) == records


def test_read_jsonl_reports_bad_line(adapter, tmp_path):
    file_path = tmp_path / "broken.jsonl"
    file_path.write_text('{"rep": 0}\nnot json\n', encoding="utf-8")

    with pytest.raises(ValueError, match=":2"):
        adapter.read_jsonl(str(file_path))


def test_read_missing_file(adapter, tmp_path):
    with pytest.raises(FileNotFoundError):
        adapter.read_json(str(tmp_path / "missing.json"))

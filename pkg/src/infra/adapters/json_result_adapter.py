"""JSON/JSONL 결과 문서 어댑터."""

import json
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List

import numpy as np

from core.ports.result_port import ResultPort
from infra.adapters.atomic_file import atomic_write


def _clean(value: Any) -> Any:
    """numpy 값을 파이썬 값으로, NaN/무한대를 null로 바꿉니다."""
    if isinstance(value, np.ndarray):
        value = value.tolist()
    elif isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


class JsonResultAdapter(ResultPort):
    """결과 JSON을 원자적으로 저장하고 읽는 어댑터."""

    def write_json(self, payload: Any, file_path: str) -> None:
        text = json.dumps(_clean(payload), ensure_ascii=False, indent=2)

        def _write(tmp: Path) -> None:
            with open(tmp, "w", encoding="utf-8", newline="\n") as f:
                f.write(text)
                f.write("\n")

        atomic_write(file_path, _write)

    def read_json(self, file_path: str) -> Any:
        if not Path(file_path).exists():
            raise FileNotFoundError(f"파일을 찾을 수 없습니다: {file_path}")
        with open(file_path, "r", encoding="utf-8") as f:
            return json.load(f)

    def write_jsonl(self, records: Iterable[Dict[str, Any]], file_path: str) -> None:
        lines = [json.dumps(_clean(r), ensure_ascii=False) for r in records]

        def _write(tmp: Path) -> None:
            with open(tmp, "w", encoding="utf-8", newline="\n") as f:
                for line in lines:
                    f.write(line + "\n")

        atomic_write(file_path, _write)

    def read_jsonl(self, file_path: str) -> List[Dict[str, Any]]:
        if not Path(file_path).exists():
            raise FileNotFoundError(f"파일을 찾을 수 없습니다: {file_path}")
        records = []
        with open(file_path, "r", encoding="utf-8") as f:
            for i, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as e:
                    raise ValueError(f"{file_path}:{i} JSON 형식 오류: {e}")
        return records

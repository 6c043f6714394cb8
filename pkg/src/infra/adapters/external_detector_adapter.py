"""외부 도구가 만든 반복별 변화점 목록을 탐지기로 감싸는 어댑터."""

import json
import logging
from pathlib import Path
from typing import Dict, List

from core.domain.models.errors import DetectorFailure
from core.domain.models.observation import Series
from core.ports.detector_port import DetectorPort, Replicate

logger = logging.getLogger(__name__)


class ExternalDetectorAdapter(DetectorPort):
    """비교 기준 방법의 결과 파일을 반복 번호로 조회합니다.

    지원 형식:
    - JSONL: 줄마다 `{"rep": i, "changepoints": [...]}`
    - 텍스트: i번째 줄(0부터)에 공백으로 구분한 변화점 (빈 줄은 변화점 없음)
    """

    name = "external"

    def __init__(self, file_path: str, name: str = "external"):
        path = Path(file_path)
        if not path.exists():
            raise FileNotFoundError(f"파일을 찾을 수 없습니다: {file_path}")
        self.name = name
        self.results = self._load(path)
        logger.info(f"외부 탐지 결과 로드: {file_path} ({len(self.results)}개 반복)")

    @staticmethod
    def _load(path: Path) -> Dict[int, List[int]]:
        results: Dict[int, List[int]] = {}
        with open(path, "r", encoding="utf-8") as f:
            lines = f.read().splitlines()
        for i, raw in enumerate(lines):
            line = raw.strip()
            if line.startswith("{"):
                try:
                    record = json.loads(line)
                    results[int(record["rep"])] = sorted(int(c) for c in record.get("changepoints", []))
                except (json.JSONDecodeError, KeyError, TypeError) as e:
                    raise ValueError(f"{path}:{i + 1} 외부 결과 형식 오류: {e}")
            else:
                try:
                    results[i] = sorted(int(float(tok)) for tok in line.replace(",", " ").split())
                except ValueError as e:
                    raise ValueError(f"{path}:{i + 1} 외부 결과 형식 오류: {e}")
        return results

    def detect(self, series: Series, replicate: Replicate) -> List[int]:
        if replicate.rep not in self.results:
            raise DetectorFailure(f"반복 {replicate.rep}의 외부 결과가 없습니다")
        return list(self.results[replicate.rep])

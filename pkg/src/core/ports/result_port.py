"""결과 문서(JSON/JSONL) 저장 포트 인터페이스."""

from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, List


class ResultPort(ABC):
    """탐지 결과, 정답, 신뢰구간, 반복별 감사 로그를 다루는 포트."""

    @abstractmethod
    def write_json(self, payload: Any, file_path: str) -> None:
        """JSON 문서를 원자적으로 저장합니다.

        Args:
            payload: 직렬화할 dict 또는 list
            file_path: 저장할 파일 경로
        """
        raise NotImplementedError

    @abstractmethod
    def read_json(self, file_path: str) -> Any:
        """JSON 문서를 읽습니다.

        Raises:
            FileNotFoundError: 파일이 없는 경우
        """
        raise NotImplementedError

    @abstractmethod
    def write_jsonl(self, records: Iterable[Dict[str, Any]], file_path: str) -> None:
        """한 줄에 레코드 하나씩 JSONL로 저장합니다."""
        raise NotImplementedError

    @abstractmethod
    def read_jsonl(self, file_path: str) -> List[Dict[str, Any]]:
        """JSONL 파일을 레코드 목록으로 읽습니다."""
        raise NotImplementedError

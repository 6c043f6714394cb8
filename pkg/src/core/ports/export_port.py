"""플롯/요약용 CSV 내보내기 포트 인터페이스."""

from abc import ABC, abstractmethod
from typing import Sequence


class ExportPort(ABC):
    """표 형태 데이터 내보내기 포트 (Presentation Layer)."""

    @abstractmethod
    def export_csv(
        self,
        rows: Sequence[Sequence],
        columns: Sequence[str],
        file_path: str
    ) -> None:
        """행 목록을 헤더가 있는 CSV 파일로 내보내기.

        Args:
            rows: 값 행 목록
            columns: 헤더 열 이름
            file_path: 저장할 파일 경로
        """
        raise NotImplementedError

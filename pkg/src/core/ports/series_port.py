"""관측 시계열 입출력 포트 인터페이스."""

from abc import ABC, abstractmethod

from core.domain.models.observation import Series


class SeriesPort(ABC):
    """`t,x1,...,xd,y` 형식 시계열 저장소 포트."""

    @abstractmethod
    def read_series(self, file_path: str) -> Series:
        """파일에서 시계열을 읽어 검증합니다.

        Args:
            file_path: 읽을 파일 경로

        Returns:
            1..n 연속 인덱스를 가진 Series

        Raises:
            FileNotFoundError: 파일이 없는 경우
            SeriesValidationError: 형식 또는 값 검증 실패
        """
        raise NotImplementedError

    @abstractmethod
    def write_series(self, series: Series, file_path: str) -> None:
        """시계열을 파일로 저장합니다.

        Args:
            series: 저장할 시계열
            file_path: 저장할 파일 경로
        """
        raise NotImplementedError

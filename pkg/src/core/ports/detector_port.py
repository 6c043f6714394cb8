"""벤치마크용 변화점 탐지기 포트 인터페이스."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List

from core.domain.models.observation import Series


@dataclass(frozen=True)
class Replicate:
    """벤치마크 반복 1회의 문맥."""
    rep: int
    seed: int
    truth: List[int]


class DetectorPort(ABC):
    """시계열에서 변화점 목록을 추정하는 탐지기."""

    name: str = "detector"

    @abstractmethod
    def detect(self, series: Series, replicate: Replicate) -> List[int]:
        """변화점을 추정합니다.

        Args:
            series: 생성된 시계열
            replicate: 반복 번호, 시드, 정답 (오라클/외부 결과 조회용)

        Returns:
            오름차순 변화점 인덱스 목록

        Raises:
            DetectorFailure: 탐지에 실패한 경우
        """
        raise NotImplementedError

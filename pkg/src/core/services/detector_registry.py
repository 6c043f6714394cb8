"""벤치마크에서 쓰는 탐지기 구현과 이름 기반 생성."""

import logging
from typing import List, Optional

from core.domain.models.config import DetectorConfig, LocalSearchConfig
from core.domain.models.errors import UnknownPreset
from core.domain.models.observation import Series
from core.ports.detector_port import DetectorPort, Replicate
from core.services.global_detection_service import GlobalDetectionService
from core.services.local_detection_service import LocalDetectionService

logger = logging.getLogger(__name__)


class FcpDetector(DetectorPort):
    """왼쪽 확장 구간 탐색 + 국소 재적합."""

    name = "fcp"

    def __init__(self, config: Optional[DetectorConfig] = None):
        self.config = config or DetectorConfig()

    def detect(self, series: Series, replicate: Replicate) -> List[int]:
        return GlobalDetectionService(self.config).detect_multi(series).changepoints


class RobustFcpDetector(FcpDetector):
    """전체 스캔 후 ⌊C·log n⌋ 후퇴하는 강건 변형."""

    name = "fcp-robust"

    def detect(self, series: Series, replicate: Replicate) -> List[int]:
        return GlobalDetectionService(self.config).detect_multi_robust(series).changepoints


class MsFcpDetector(DetectorPort):
    """다중 스케일 격자 위 국소 변화 탐지."""

    name = "ms-fcp"

    def __init__(self, config: Optional[DetectorConfig] = None, local_config: Optional[LocalSearchConfig] = None):
        self.config = config or DetectorConfig()
        self.local_config = local_config or LocalSearchConfig()

    def detect(self, series: Series, replicate: Replicate) -> List[int]:
        return LocalDetectionService(self.config, self.local_config).detect_multi_local(series).changepoints


class OracleDetector(DetectorPort):
    """정답을 그대로 돌려주는 기준 탐지기."""

    name = "oracle"

    def detect(self, series: Series, replicate: Replicate) -> List[int]:
        return list(replicate.truth)


class EmptyDetector(DetectorPort):
    """항상 변화점이 없다고 답하는 기준 탐지기."""

    name = "empty"

    def detect(self, series: Series, replicate: Replicate) -> List[int]:
        return []


def build_detector(
    method: str,
    config: Optional[DetectorConfig] = None,
    local_config: Optional[LocalSearchConfig] = None,
) -> DetectorPort:
    """이름으로 내장 탐지기를 만듭니다.

    Raises:
        UnknownPreset: 알 수 없는 방법 이름
    """
    key = method.strip().lower()
    if key == "fcp":
        return FcpDetector(config)
    if key == "fcp-robust":
        return RobustFcpDetector(config)
    if key == "ms-fcp":
        return MsFcpDetector(config, local_config)
    if key == "oracle":
        return OracleDetector()
    if key == "empty":
        return EmptyDetector()
    raise UnknownPreset(f"알 수 없는 탐지 방법입니다: {method}")

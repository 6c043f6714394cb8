"""탐지/추론 설정 모델 (pydantic 검증)."""

import math
from enum import Enum
from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field


class DetectorConfig(BaseModel):
    """변화점 탐지 설정.

    lambda가 None이면 log²(n) 자동 임계값을 사용합니다.
    """
    model_config = ConfigDict(frozen=True, populate_by_name=True, extra="forbid")

    lambda_: Optional[float] = Field(default=None, alias="lambda", gt=0)
    alpha_trim: float = Field(default=0.1, ge=0.0, lt=1.0)
    refit: bool = True
    robust_c: float = Field(default=1.0, gt=0)
    min_seg: int = Field(default=2, ge=2)
    frontier_quantile: float = Field(default=1.0, gt=0.0, le=1.0)

    def resolve_lambda(self, n: int) -> float:
        if self.lambda_ is not None:
            return float(self.lambda_)
        return math.log(n) ** 2


class LocalSearchConfig(BaseModel):
    """다중 스케일 격자 탐색 설정. an_side = x̲·A_n^{1/d}."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    an_side: float = Field(default=4.0, ge=1.0)

    def a_n(self, d: int, x_bar: float = 1.0) -> float:
        return (self.an_side / x_bar) ** d


class InferenceMode(str, Enum):
    """기하분포 모수 추정 방식."""
    IID = "iid"
    GENERAL = "general"


class InferenceConfig(BaseModel):
    """신뢰구간 설정. 대역폭이 None이면 n으로부터 기본값을 계산합니다."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    level: float = Field(default=0.9, gt=0.0, lt=1.0)
    mode: InferenceMode = InferenceMode.IID
    score_bandwidth: Optional[float] = Field(default=None, gt=0.0, le=1.0)
    input_bins: Optional[Tuple[int, ...]] = None
    window: Optional[int] = Field(default=None, ge=1)
    min_seg: int = Field(default=2, ge=2)
    # iid 모드 θ̂의 단측 Clopper-Pearson 하한 신뢰수준 (0이면 점추정치 그대로)
    theta_confidence: float = Field(default=0.99, ge=0.0, lt=1.0)

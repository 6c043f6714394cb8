"""트리밍된 의사 효율성 점수 모델."""

import logging
from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from core.domain.models.errors import DimensionMismatch, IndexOutOfRange
from core.domain.models.observation import Series, TrimBox

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ScoreSeries:
    """R̂_t = Y_t / f̂(X_t) (X_t > x0 이고 f̂(X_t) > 0일 때), 그 외 0."""
    r_hat: np.ndarray
    active: np.ndarray
    x0: TrimBox
    zero_frontier_count: int = 0

    @property
    def n(self) -> int:
        return int(self.r_hat.shape[0])

    @classmethod
    def compute(cls, series: Series, frontier, x0: TrimBox) -> "ScoreSeries":
        """프런티어 추정치로 전체 시계열의 점수를 계산합니다."""
        frontier_d = getattr(frontier, "d", series.d)
        if frontier_d != series.d or x0.d != series.d:
            raise DimensionMismatch(
                f"시계열({series.d}), 프런티어({frontier_d}), x0({x0.d})의 차원이 일치하지 않습니다"
            )
        active = x0.active_mask(series.inputs)
        fitted = frontier.evaluate_many(series.inputs)
        r_hat = np.zeros(series.n, dtype=float)
        usable = active & (fitted > 0)
        r_hat[usable] = series.outputs[usable] / fitted[usable]

        zero_count = int(np.count_nonzero(active & ~(fitted > 0)))
        if zero_count:
            logger.warning(f"프런티어 값이 0인 활성 관측치 {zero_count}개의 점수를 0으로 설정했습니다")
        r_hat.setflags(write=False)
        active.setflags(write=False)
        return cls(r_hat=r_hat, active=active, x0=x0, zero_frontier_count=zero_count)

    @classmethod
    def compute_segmented(cls, series: Series, frontiers: List, bounds: List[int], x0: TrimBox) -> "ScoreSeries":
        """구간별 프런티어로 점수를 계산합니다.

        Args:
            frontiers: 구간별 프런티어 추정치
            bounds: 각 구간의 마지막 인덱스 (오름차순, 마지막은 n)
        """
        if len(frontiers) != len(bounds) or not bounds or bounds[-1] != series.n:
            raise IndexOutOfRange("구간 경계는 프런티어 수와 같고 n으로 끝나야 합니다")
        r_hat = np.zeros(series.n, dtype=float)
        active = x0.active_mask(series.inputs)
        zero_count = 0
        start = 0
        for frontier, end in zip(frontiers, bounds):
            fitted = frontier.evaluate_many(series.inputs[start:end])
            seg_active = active[start:end]
            usable = seg_active & (fitted > 0)
            seg = np.zeros(end - start, dtype=float)
            seg[usable] = series.outputs[start:end][usable] / fitted[usable]
            r_hat[start:end] = seg
            zero_count += int(np.count_nonzero(seg_active & ~(fitted > 0)))
            start = end
        if zero_count:
            logger.warning(f"프런티어 값이 0인 활성 관측치 {zero_count}개의 점수를 0으로 설정했습니다")
        r_hat.setflags(write=False)
        active.setflags(write=False)
        return cls(r_hat=r_hat, active=active, x0=x0, zero_frontier_count=zero_count)

    def n_active(self, t1: int = 1, t2: Optional[int] = None) -> int:
        """[t1, t2] 구간의 활성 관측치 수 N(t1, t2, x0)."""
        t2 = self.n if t2 is None else t2
        if not 1 <= t1 <= t2 <= self.n:
            raise IndexOutOfRange(f"구간 [{t1}, {t2}]가 [1, {self.n}]를 벗어났습니다")
        return int(np.count_nonzero(self.active[t1 - 1:t2]))

    def to_rows(self) -> List[list]:
        """`t,r_hat,active` 행 목록."""
        return [[i + 1, float(self.r_hat[i]), bool(self.active[i])] for i in range(self.n)]


compute_scores = ScoreSeries.compute

"""국소 프런티어 변화점 탐지 서비스 (다중 스케일 격자 위 최대 통계량)."""

import logging
from dataclasses import dataclass
from typing import Any, List, Optional

import numpy as np

from core.domain.models.config import DetectorConfig, LocalSearchConfig
from core.domain.models.detection import DetectionResult, scan_window_cells
from core.domain.models.grid import MultiScaleGrid
from core.domain.models.observation import Series, TrimBox
from core.domain.models.scores import ScoreSeries
from core.services.global_detection_service import GlobalDetectionService, PrefixContext, WindowHit

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CellLayout:
    """한 번의 탐색 동안 쓰는 격자와 관측치별 셀 소속 행렬 (C, n)."""
    grid: MultiScaleGrid
    members: np.ndarray


class LocalDetectionService(GlobalDetectionService):
    """구간 통계량을 모든 격자 셀에 대한 최대값으로 바꾼 다중 변화점 탐지.

    재시작, 재적합 규칙은 전역 탐지와 같고, 변화점마다 최대값을 준 셀을 기록합니다.
    격자 상태는 호출마다 만들어 인자로 넘기므로 한 인스턴스를 여러 시계열에 재사용할 수 있습니다.
    """

    method_name = "ms-fcp"

    def __init__(self, config: Optional[DetectorConfig] = None, local_config: Optional[LocalSearchConfig] = None):
        super().__init__(config)
        self.local_config = local_config or LocalSearchConfig()

    def build_grid(self, series: Series, x0: TrimBox, a_n: Optional[float] = None) -> MultiScaleGrid:
        a_n = self.local_config.a_n(series.d) if a_n is None else a_n
        return MultiScaleGrid.build(series, x0, a_n)

    def _prepare(self, series: Series, m: int, x0: TrimBox, layout: Any = None) -> PrefixContext:
        if layout is None:
            return super()._prepare(series, m, x0)
        # 셀 소속이 트리밍을 대신하므로 점수는 원 비율 그대로 사용
        frontier = self._fit(series, m)
        scores = ScoreSeries.compute(series.window(1, m), frontier, TrimBox.zeros(series.d))
        members = layout.members[:, :m] & scores.active[None, :]
        return PrefixContext(m=m, frontier=frontier, scores=scores, members=members)

    def _scan(self, ctx: PrefixContext, t1: int, t2: int, tau_cap: int) -> Optional[WindowHit]:
        if ctx.members is None:
            return super()._scan(ctx, t1, t2, tau_cap)
        last = min(t2, tau_cap)
        if last < t1 or ctx.members.shape[0] == 0:
            return None
        values, degenerate = scan_window_cells(ctx.scores.r_hat, ctx.members, t1, last)
        # (값, 셀 번호, τ) 사전식: 최대값을 갖는 가장 작은 셀, 그 셀 안에서 가장 이른 τ
        cell = int(np.argmax(values.max(axis=1)))
        tau_off = int(np.argmax(values[cell]))
        return WindowHit(
            value=float(values[cell, tau_off]),
            tau=t1 + tau_off,
            degenerate=bool(degenerate[cell, tau_off]),
            cell=cell,
        )

    def _attach_cells(self, result: DetectionResult, cells: List[Optional[int]], layout: Any = None) -> None:
        if layout is not None:
            result.cells = [layout.grid.cells[c] for c in cells if c is not None]

    def detect_multi(self, series: Series, x0: Optional[TrimBox] = None) -> DetectionResult:
        return self.detect_multi_local(series, x0=x0)

    def detect_multi_local(
        self, series: Series, a_n: Optional[float] = None, x0: Optional[TrimBox] = None
    ) -> DetectionResult:
        """다중 스케일 격자 위에서 변화점을 탐지합니다.

        Args:
            series: 관측 시계열 (n >= 4)
            a_n: 스케일 상한 (None이면 an_side^d)
            x0: 셀에서 제외할 하측 상자 (None이면 alpha_trim 분위수)

        Returns:
            변화점별 최대 셀(cells)이 기록된 DetectionResult
        """
        self._check_length(series)
        x0 = self._trim_box(series, x0)
        grid = self.build_grid(series, x0, a_n)
        layout = CellLayout(grid=grid, members=grid.membership(series.inputs))
        logger.info(f"다중 스케일 격자 준비: 셀 {grid.size}개, a_n={grid.a_n:.3g}")
        if grid.size == 0:
            logger.warning("트리밍 후 남은 격자 셀이 없어 변화점을 찾을 수 없습니다")
        result = self._search(series, x0, layout)
        if result.cells is None:
            result.cells = []
        return result

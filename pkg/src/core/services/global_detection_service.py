"""전역 프런티어 변화점 탐지 서비스 (왼쪽 확장 구간 탐색 + 국소 재적합, 강건 변형)."""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.domain.models.config import DetectorConfig
from core.domain.models.detection import DetectionResult, SingleDetection, scan_window
from core.domain.models.errors import EmptyInput
from core.domain.models.frontier import fit_frontier
from core.domain.models.observation import Series, TrimBox
from core.domain.models.scores import ScoreSeries

logger = logging.getLogger(__name__)

MIN_DETECTION_LENGTH = 4


@dataclass(frozen=True)
class WindowHit:
    """한 구간 스캔의 최대값 위치."""
    value: float
    tau: int
    degenerate: bool = False
    cell: Optional[int] = None


@dataclass
class PrefixContext:
    """1..m 적합 프런티어로 계산한 점수와 부가 정보."""
    m: int
    frontier: Any
    scores: ScoreSeries
    members: Optional[np.ndarray] = None


def _plain(value: Any) -> Any:
    return value.item() if hasattr(value, "item") else value


class GlobalDetectionService:
    """FDH 프런티어 기반 준우도비 변화점 탐지 오케스트레이션.

    - detect_single: 전체 표본 단일 변화점
    - detect_multi: 왼쪽으로 확장하는 구간 탐색 후 국소 재적합
    - detect_multi_robust: 일시적 전반적 효율 하락에 강건한 변형
    """

    method_name = "fcp"

    def __init__(self, config: Optional[DetectorConfig] = None):
        self.config = config or DetectorConfig()

    # ------------------------------------------------------------------
    # 공통 단계
    # ------------------------------------------------------------------
    def _check_length(self, series: Series) -> None:
        if series.n < MIN_DETECTION_LENGTH:
            raise EmptyInput(f"탐지에는 최소 {MIN_DETECTION_LENGTH}개 관측치가 필요합니다: n={series.n}")

    def _trim_box(self, series: Series, x0: Optional[TrimBox]) -> TrimBox:
        return x0 if x0 is not None else TrimBox.from_quantile(series, self.config.alpha_trim)

    def _fit(self, series: Series, m: int):
        return fit_frontier(series.window(1, m), self.config.frontier_quantile)

    def _prepare(self, series: Series, m: int, x0: TrimBox, layout: Any = None) -> PrefixContext:
        """1..m에 프런티어를 적합하고 같은 구간의 점수를 계산합니다. 전역 탐지는 layout을 쓰지 않습니다."""
        frontier = self._fit(series, m)
        scores = ScoreSeries.compute(series.window(1, m), frontier, x0)
        return PrefixContext(m=m, frontier=frontier, scores=scores)

    def _scan(self, ctx: PrefixContext, t1: int, t2: int, tau_cap: int) -> Optional[WindowHit]:
        """[t1, t2] 스캔에서 τ <= tau_cap 범위의 최대값 (동률이면 가장 작은 τ)."""
        last = min(t2, tau_cap)
        if last < t1:
            return None
        scan = scan_window(ctx.scores.r_hat, ctx.scores.active, t1, last)
        i = scan.best_offset
        return WindowHit(value=float(scan.values[i]), tau=t1 + i, degenerate=bool(scan.degenerate[i]))

    def _result(self, series: Series, threshold: float, x0: TrimBox, **kwargs) -> DetectionResult:
        result = DetectionResult(n=series.n, threshold=threshold, x0=x0.to_list(), method=self.method_name, **kwargs)
        if series.labels is not None:
            result.changepoint_labels = [_plain(series.label_of(c)) for c in result.changepoints]
        return result

    @staticmethod
    def _merge_duplicates(
        points: List[int], stats: List[float], extras: Optional[List[Any]] = None
    ) -> Tuple[List[int], List[float], List[Any]]:
        """같은 위치로 모인 추정치를 하나로 합칩니다 (통계량이 큰 쪽 유지)."""
        extras = extras if extras is not None else [None] * len(points)
        merged: Dict[int, Tuple[float, Any]] = {}
        for p, s, e in zip(points, stats, extras):
            if p in merged:
                logger.warning(f"재적합 후 변화점 {p}가 중복되어 하나로 합칩니다")
                if s <= merged[p][0]:
                    continue
            merged[p] = (s, e)
        keys = sorted(merged)
        return keys, [merged[k][0] for k in keys], [merged[k][1] for k in keys]

    # ------------------------------------------------------------------
    # 단일 변화점
    # ------------------------------------------------------------------
    def detect_single(self, series: Series, x0: Optional[TrimBox] = None) -> SingleDetection:
        """전체 표본에 프런티어를 적합하고 L̂_τ의 최대 위치를 찾습니다."""
        self._check_length(series)
        n = series.n
        x0 = self._trim_box(series, x0)
        threshold = self.config.resolve_lambda(n)
        ctx = self._prepare(series, n, x0)
        hit = self._scan(ctx, 1, n, n - 1)
        detected = hit.value > threshold
        logger.info(f"단일 변화점 탐지: η̂={hit.tau}, L̂={hit.value:.3f}, λ={threshold:.3f}, 탐지={detected}")
        return SingleDetection(detected=detected, eta_hat=hit.tau, stat=hit.value, threshold=threshold)

    # ------------------------------------------------------------------
    # 다중 변화점
    # ------------------------------------------------------------------
    def detect_multi(self, series: Series, x0: Optional[TrimBox] = None) -> DetectionResult:
        """가장 짧은 왼쪽 확장 구간에서 임계값을 넘는 오른쪽 끝 변화점부터 차례로 찾습니다.

        Args:
            series: 관측 시계열 (n >= 4)
            x0: 트리밍 임계값 (None이면 alpha_trim 분위수)

        Returns:
            재적합된 변화점과 재시작 인덱스, 재적합 구간을 담은 DetectionResult
        """
        self._check_length(series)
        return self._search(series, self._trim_box(series, x0))

    def _search(self, series: Series, x0: TrimBox, layout: Any = None) -> DetectionResult:
        """왼쪽 확장 탐색과 재적합. layout은 하위 클래스의 _prepare로만 전달됩니다."""
        n = series.n
        threshold = self.config.resolve_lambda(n)
        floor_len = max(self.config.min_seg, 2)

        pilots: List[int] = []
        pilot_stats: List[float] = []
        pilot_cells: List[Optional[int]] = []
        restarts: List[int] = []
        contexts: Dict[int, PrefixContext] = {}
        flags: List[str] = []

        m = n
        logger.info(f"변화점 탐지 시작: method={self.method_name}, n={n}, λ={threshold:.3f}, x0={x0.to_list()}")
        while m >= floor_len:
            ctx = self._prepare(series, m, x0, layout)
            hit = None
            j = 0
            for j in range(1, m):
                hit = self._scan(ctx, m - j, m, n - 1)
                if hit is not None and hit.value > threshold:
                    break
                hit = None
            if hit is None:
                logger.debug(f"m={m}에서 임계값을 넘는 구간이 없어 탐색을 종료합니다")
                break

            contexts[m] = ctx
            pilots.append(hit.tau)
            pilot_stats.append(hit.value)
            pilot_cells.append(hit.cell)
            if hit.degenerate and "degenerate_statistic" not in flags:
                flags.append("degenerate_statistic")
            logger.info(f"예비 변화점 η̃={hit.tau} (구간 [{m - j}, {m}], L̂={hit.value:.3f}), 재시작 m={m - j}")
            m = m - j
            restarts.append(m)

        # 오름차순 정렬: k번째 예비 변화점은 1..ẽ_k 적합 프런티어로 탐지됨
        order = list(range(len(pilots)))[::-1]
        pilots_sorted = [pilots[i] for i in order]
        stats_sorted = [pilot_stats[i] for i in order]
        cells_sorted = [pilot_cells[i] for i in order]
        restarts_sorted = sorted(restarts)
        fit_ends = restarts_sorted[1:] + [n]

        if not self.config.refit or not pilots:
            points, stats, cells = self._merge_duplicates(pilots_sorted, stats_sorted, cells_sorted)
            result = self._result(
                series, threshold, x0,
                changepoints=points, stats=stats, restarts=restarts_sorted,
                pilots=pilots_sorted, flags=flags,
            )
            self._attach_cells(result, cells, layout)
            return result

        points, stats, windows, cells = self._refit(contexts, pilots_sorted, restarts_sorted, fit_ends, n)
        points, stats, extras = self._merge_duplicates(points, stats, list(zip(windows, cells)))
        result = self._result(
            series, threshold, x0,
            changepoints=points, stats=stats, restarts=restarts_sorted,
            refit_windows=[w for w, _ in extras], pilots=pilots_sorted, flags=flags,
        )
        self._attach_cells(result, [c for _, c in extras], layout)
        logger.info(f"탐지 완료: K̂={result.k_hat}, 변화점={result.changepoints}")
        return result

    def _refit(
        self,
        contexts: Dict[int, PrefixContext],
        pilots: List[int],
        restarts: List[int],
        fit_ends: List[int],
        n: int,
    ) -> Tuple[List[int], List[float], List[Tuple[int, int]], List[Optional[int]]]:
        """각 예비 변화점을 [s̃_k, ẽ_k]에서 탐지 당시 프런티어로 다시 찾습니다.

        m_1 = 1, m_k = r_k (k >= 2), s̃_k = ⌊(η̂_{k-1} + m_k)/2⌋, η̂_0 = 1, ẽ_k = 적합 끝.
        """
        points: List[int] = []
        stats: List[float] = []
        windows: List[Tuple[int, int]] = []
        cells: List[Optional[int]] = []
        prev = 1
        for k, (pilot, end) in enumerate(zip(pilots, fit_ends)):
            m_k = 1 if k == 0 else restarts[k]
            start = min((prev + m_k) // 2, n - 1)
            hit = self._scan(contexts[end], start, end, n - 1)
            logger.debug(f"재적합 k={k + 1}: 창 [{start}, {end}], η̃={pilot} -> η̂={hit.tau}")
            points.append(hit.tau)
            stats.append(hit.value)
            windows.append((start, end))
            cells.append(hit.cell)
            prev = hit.tau
        return points, stats, windows, cells

    def _attach_cells(self, result: DetectionResult, cells: List[Optional[int]], layout: Any = None) -> None:
        """전역 탐지는 셀 정보가 없습니다."""

    # ------------------------------------------------------------------
    # 강건 변형
    # ------------------------------------------------------------------
    def detect_multi_robust(self, series: Series, x0: Optional[TrimBox] = None) -> DetectionResult:
        """전체 스캔 L̂_{1,τ,m}에서 임계값을 넘는 가장 큰 τ를 변화점으로 삼고 ⌊C·log n⌋만큼 물러나 반복합니다."""
        self._check_length(series)
        n = series.n
        x0 = self._trim_box(series, x0)
        threshold = self.config.resolve_lambda(n)
        back_off = max(int(math.floor(self.config.robust_c * math.log(n))), 1)
        floor_len = max(self.config.min_seg, 2)

        points: List[int] = []
        stats: List[float] = []
        restarts: List[int] = []
        flags: List[str] = []
        m = n
        logger.info(f"강건 변화점 탐지 시작: n={n}, λ={threshold:.3f}, 후퇴 폭={back_off}")
        while m >= floor_len:
            ctx = self._prepare(series, m, x0)
            scan = scan_window(ctx.scores.r_hat, ctx.scores.active, 1, m)
            above = np.flatnonzero(scan.values > threshold)
            if above.size == 0:
                break
            idx = int(above[-1])
            eta = min(1 + idx, n - 1)
            points.append(eta)
            stats.append(float(scan.values[idx]))
            if scan.degenerate[idx] and "degenerate_statistic" not in flags:
                flags.append("degenerate_statistic")
            m = max(0, eta - back_off)
            restarts.append(m)
            logger.info(f"변화점 η̂={eta} (L̂={stats[-1]:.3f}), 재시작 m={m}")

        points, stats, _ = self._merge_duplicates(points[::-1], stats[::-1])
        result = self._result(
            series, threshold, x0,
            changepoints=points, stats=stats, restarts=sorted(restarts), pilots=list(points), flags=flags,
        )
        result.method = "fcp-robust"
        logger.info(f"강건 탐지 완료: K̂={result.k_hat}, 변화점={result.changepoints}")
        return result

"""변화점 위치 신뢰구간 서비스 (기하분포 확률적 지배 한계)."""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from core.domain.models.config import InferenceConfig, InferenceMode
from core.domain.models.detection import DetectionResult
from core.domain.models.errors import InsufficientData, NoActiveEvaluationPoints, SegmentTooShort
from core.domain.models.frontier import FrontierEstimate
from core.domain.models.inference import (
    MU_EPS,
    GeometricCI,
    MuEstimate,
    ThetaEstimate,
    default_input_bins,
    default_score_bins,
    default_window,
    theta_lower_bound,
)
from core.domain.models.observation import Series, TrimBox
from core.domain.models.scores import ScoreSeries

logger = logging.getLogger(__name__)

MIN_GENERAL_LENGTH = 20


def _window_counts(indicator: np.ndarray, window: int) -> np.ndarray:
    """(n, B) 지시 행렬의 길이 window 슬라이딩 합 (n - window + 1, B)."""
    cs = np.vstack([np.zeros((1, indicator.shape[1]), dtype=np.int64), np.cumsum(indicator, axis=0, dtype=np.int64)])
    return cs[window:] - cs[:-window]


class InferenceService:
    """단일 변화점 추정치에 대해 μ̂, θ̂을 추정하고 단측 신뢰구간을 만듭니다."""

    def __init__(self, config: Optional[InferenceConfig] = None):
        self.config = config or InferenceConfig()

    # ------------------------------------------------------------------
    # 점프 크기
    # ------------------------------------------------------------------
    def _split(self, series: Series, eta_hat: int) -> Tuple[Series, Series]:
        n = series.n
        min_seg = max(self.config.min_seg, 2)
        if not 2 <= eta_hat <= n - 2 or eta_hat < min_seg or n - eta_hat < min_seg:
            raise SegmentTooShort(f"η̂={eta_hat}로 나눈 구간이 너무 짧습니다 (n={n}, min_seg={min_seg})")
        return series.window(1, eta_hat), series.window(eta_hat + 1, n)

    def estimate_mu(self, series: Series, eta_hat: int, x0: TrimBox) -> MuEstimate:
        """μ̂ = max f̂1(X_t)/f̂2(X_t), X_t > x0 이고 f̂2(X_t) > 0 인 관측 투입에서.

        Raises:
            SegmentTooShort: η̂가 [2, n-2] 밖이거나 한쪽 구간이 min_seg 미만인 경우
            NoActiveEvaluationPoints: 한쪽 구간에 활성 관측치가 없거나 평가점이 없는 경우
        """
        left, right = self._split(series, eta_hat)
        if not x0.active_mask(left.inputs).any() or not x0.active_mask(right.inputs).any():
            raise NoActiveEvaluationPoints(f"η̂={eta_hat} 양쪽 구간 중 활성 관측치가 없는 구간이 있습니다")

        f1 = FrontierEstimate.fit(left)
        f2 = FrontierEstimate.fit(right)
        points = series.inputs[x0.active_mask(series.inputs)]
        denom = f2.evaluate_many(points)
        usable = denom > 0
        if not usable.any():
            raise NoActiveEvaluationPoints("f̂2 > 0 인 활성 평가점이 없습니다")

        ratio = f1.evaluate_many(points[usable]) / denom[usable]
        raw = float(ratio.max())
        mu_hat = min(max(raw, MU_EPS), 1.0 - MU_EPS)
        clamped = mu_hat != raw
        if clamped:
            logger.warning(f"μ̂={raw:.6g}을 [{MU_EPS}, {1 - MU_EPS}]로 제한했습니다")
        return MuEstimate(mu_hat=mu_hat, n_eval=int(usable.sum()), clamped=clamped)

    def segment_scores(self, series: Series, eta_hat: int, x0: TrimBox) -> ScoreSeries:
        """구간별 프런티어 (1..η̂, η̂+1..n)로 계산한 점수."""
        left, right = self._split(series, eta_hat)
        return ScoreSeries.compute_segmented(
            series, [FrontierEstimate.fit(left), FrontierEstimate.fit(right)], [eta_hat, series.n], x0
        )

    # ------------------------------------------------------------------
    # 기하분포 모수
    # ------------------------------------------------------------------
    def estimate_theta_iid(self, scores: ScoreSeries, mu_hat: float) -> ThetaEstimate:
        """θ̂ = (1/n)·#{R̂_t >= μ̂, X_t > x0}. 0이면 1/n으로 올리고 표시합니다."""
        n = scores.n
        hits = int(np.count_nonzero(scores.active & (scores.r_hat >= mu_hat)))
        theta = hits / n
        flags: List[str] = []
        if theta <= 0:
            logger.warning(f"θ̂가 0이어서 1/n={1 / n:.4g}로 올립니다")
            theta = 1.0 / n
            flags.append("theta_floored")
        return ThetaEstimate(theta_hat=theta, mode=InferenceMode.IID, flags=flags, components={"count": float(hits)})

    def estimate_theta_general(
        self, series: Series, scores: ScoreSeries, mu_hat: float, x0: TrimBox
    ) -> ThetaEstimate:
        """히스토그램 밀도 하한 Ĉ1R, Ĉ1X로 θ̂ = Ĉ1R·(1-μ̂)·Ĉ1X·mes(𝒳 \\ [0, x0])를 계산합니다.

        Raises:
            InsufficientData: n < 20
        """
        n = series.n
        if n < MIN_GENERAL_LENGTH:
            raise InsufficientData(f"일반 모드 추정에는 최소 {MIN_GENERAL_LENGTH}개 관측치가 필요합니다: n={n}")
        window = min(self.config.window or default_window(n), n)

        # 점수 밀도 하한: 창 길이 H_n으로 나눈 (활성 & 구간) 히스토그램
        h = self.config.score_bandwidth or 1.0 / default_score_bins(n)
        score_bins = max(int(math.ceil(1.0 / h - 1e-9)), 1)
        # 구간 ((j-1)h, jh]: R̂ = 0 은 어느 구간에도 속하지 않음
        binned = scores.active & (scores.r_hat > 0)
        idx = np.clip(np.ceil(scores.r_hat[binned] / h).astype(int), 1, score_bins) - 1
        score_ind = np.zeros((n, score_bins), dtype=np.int64)
        score_ind[np.flatnonzero(binned), idx] = 1
        score_density = _window_counts(score_ind, window) / (window * h)
        c1r = float(score_density.min())

        # 투입 밀도 하한: 관측 경계 상자의 직사각 분할
        d = series.d
        lo = series.inputs.min(axis=0)
        hi = series.inputs.max(axis=0)
        span = hi - lo
        bins = self.config.input_bins or tuple(default_input_bins(n, d) for _ in range(d))
        if len(bins) != d:
            raise ValueError(f"input_bins 길이({len(bins)})가 d={d}와 다릅니다")
        bins = np.asarray(bins, dtype=int)
        widths = np.where(span > 0, span / bins, 1.0)
        cell = np.clip(np.floor((series.inputs - lo) / widths).astype(int), 0, bins - 1)
        flat = np.ravel_multi_index(tuple(cell.T), tuple(bins))
        input_ind = np.zeros((n, int(np.prod(bins))), dtype=np.int64)
        input_ind[np.arange(n), flat] = 1
        input_counts = _window_counts(input_ind, window)
        c1x = float(input_counts.min()) / (window * float(np.prod(widths)))

        x0v = x0.as_array()
        mes = float(np.prod(span) - np.prod(np.maximum(0.0, np.minimum(x0v, hi) - lo)))

        theta = c1r * (1.0 - mu_hat) * c1x * mes
        flags = ["slow_variation_assumed"]
        if theta <= 0:
            logger.warning(f"일반 모드 θ̂가 0 (Ĉ1R={c1r:.4g}, Ĉ1X={c1x:.4g})이어서 1/n으로 올립니다")
            theta = 1.0 / n
            flags.append("theta_floored")
        elif theta > 1.0:
            theta = 1.0
            flags.append("theta_clamped")
        logger.debug(f"일반 모드 θ̂={theta:.4g}: H={window}, h={h:.4g}, 투입 분할={bins.tolist()}, mes={mes:.4g}")
        return ThetaEstimate(
            theta_hat=theta,
            mode=InferenceMode.GENERAL,
            flags=flags,
            components={"c1r": c1r, "c1x": c1x, "mes": mes, "window": float(window)},
        )

    # ------------------------------------------------------------------
    # 신뢰구간
    # ------------------------------------------------------------------
    def confidence_interval(
        self, eta_hat: int, theta_hat: float, level: Optional[float] = None
    ) -> GeometricCI:
        return GeometricCI.from_theta(eta_hat, theta_hat, level or self.config.level, self.config.mode)

    def infer(
        self,
        series: Series,
        eta_hat: int,
        x0: TrimBox,
        mode: Optional[InferenceMode] = None,
        level: Optional[float] = None,
        offset: int = 0,
    ) -> GeometricCI:
        """단일 변화점 η̂에 대한 구간 [η̂ - k*, η̂].

        iid 모드의 k*는 θ̂의 단측 Clopper-Pearson 하한 (수준 theta_confidence, 0이면 θ̂)으로 계산합니다.

        Args:
            series: 변화점 하나를 포함하는 (부분) 시계열
            eta_hat: series 안에서의 변화점 인덱스
            offset: 전체 시계열 기준으로 옮길 때 더할 값
        """
        mode = InferenceMode(mode or self.config.mode)
        level = level or self.config.level
        mu = self.estimate_mu(series, eta_hat, x0)
        scores = self.segment_scores(series, eta_hat, x0)
        if mode is InferenceMode.GENERAL:
            theta = self.estimate_theta_general(series, scores, mu.mu_hat, x0)
        else:
            theta = self.estimate_theta_iid(scores, mu.mu_hat)
        flags = list(theta.flags) + (["mu_clamped"] if mu.clamped else [])
        theta_ci = theta.theta_hat
        confidence = self.config.theta_confidence
        if mode is InferenceMode.IID and confidence > 0:
            hits = int(theta.components.get("count", 0))
            bound = max(theta_lower_bound(hits, scores.n, confidence), 1.0 / scores.n)
            if bound < theta_ci:
                theta_ci = bound
                flags.append("theta_lower_bound")
        ci = GeometricCI.from_theta(eta_hat + offset, theta_ci, level, mode, mu.mu_hat, flags)
        logger.info(
            f"η̂={ci.eta_hat}: μ̂={mu.mu_hat:.4f}, θ̂={theta.theta_hat:.4g} -> {theta_ci:.4g} ({mode.value}) "
            f"-> {level:.0%} 구간 [{ci.lo}, {ci.hi}]"
        )
        return ci

    def intervals_for(
        self,
        series: Series,
        result: DetectionResult,
        mode: Optional[InferenceMode] = None,
        level: Optional[float] = None,
    ) -> List[GeometricCI]:
        """다중 변화점 결과의 각 변화점에 재적합 창 (없으면 이웃 변화점 사이 구간)에서 구간을 붙입니다.

        추론할 수 없는 변화점은 경고 후 건너뜁니다.
        """
        x0 = TrimBox(tuple(result.x0))
        bounds = [0] + list(result.changepoints) + [series.n]
        intervals: List[GeometricCI] = []
        for k, eta in enumerate(result.changepoints):
            if k < len(result.refit_windows):
                start, end = result.refit_windows[k]
            else:
                start, end = bounds[k] + 1, bounds[k + 2]
            try:
                window = series.window(start, end)
                intervals.append(self.infer(window, eta - start + 1, x0, mode, level, offset=start - 1))
            except ValueError as e:
                logger.warning(f"변화점 {eta}의 신뢰구간을 계산하지 못해 건너뜁니다: {e}")
        return intervals

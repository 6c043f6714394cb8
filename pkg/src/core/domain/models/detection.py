"""준우도비(quasi-LR) 통계량과 탐지 결과 모델."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from core.domain.models.errors import IndexOutOfRange
from core.domain.models.grid import GridCell
from core.domain.models.observation import Series
from core.domain.models.scores import ScoreSeries

logger = logging.getLogger(__name__)

# M̂ = 0, N > 0 일 때 +∞ 대신 쓰는 값의 지수 규모 (exp(-709) ~ 최소 정규 float64)
DEGENERATE_EXPONENT = 709.0


@dataclass(frozen=True)
class SegmentStat:
    """구간 [t1, τ] (오른쪽 끝 t2)에서의 L̂ = -2·N·log(M̂)."""
    t1: int
    tau: int
    t2: int
    n_active: int
    max_score: float
    value: float
    degenerate: bool = False


@dataclass(frozen=True)
class ScanResult:
    """한 구간에 대한 벡터화된 스캔 결과 (τ = t1..t2)."""
    t1: int
    t2: int
    values: np.ndarray
    n_active: np.ndarray
    max_score: np.ndarray
    degenerate: np.ndarray

    @property
    def best_offset(self) -> int:
        """최대값 위치 (동률이면 가장 작은 τ)."""
        return int(np.argmax(self.values))

    @property
    def best_tau(self) -> int:
        return self.t1 + self.best_offset

    @property
    def best_value(self) -> float:
        return float(self.values[self.best_offset])

    def to_stats(self) -> List[SegmentStat]:
        return [
            SegmentStat(
                t1=self.t1,
                tau=self.t1 + i,
                t2=self.t2,
                n_active=int(self.n_active[i]),
                max_score=float(self.max_score[i]),
                value=float(self.values[i]),
                degenerate=bool(self.degenerate[i]),
            )
            for i in range(self.values.shape[0])
        ]


def _check_window(n: int, t1: int, t2: int) -> None:
    if not 1 <= t1 <= t2 <= n:
        raise IndexOutOfRange(f"구간 [{t1}, {t2}]가 [1, {n}]를 벗어났습니다")


def scan_window(r_hat: np.ndarray, member: np.ndarray, t1: int, t2: int) -> ScanResult:
    """소속 마스크를 갖는 점수열에서 τ = t1..t2의 L̂를 한 번의 우향 누적으로 계산합니다.

    N = 0이면 0·∞ = 0 규약으로 0, N > 0 이고 M̂ = 0이면 2·N·709 (degenerate)입니다.
    """
    _check_window(r_hat.shape[0], t1, t2)
    seg_r = r_hat[t1 - 1:t2]
    seg_m = member[t1 - 1:t2]
    n_active = np.cumsum(seg_m, dtype=np.int64)
    running = np.maximum.accumulate(np.where(seg_m, seg_r, -np.inf))
    has = n_active > 0
    degenerate = has & (running <= 0)
    regular = has & ~degenerate
    values = np.zeros(seg_r.shape[0], dtype=float)
    values[regular] = -2.0 * n_active[regular] * np.log(running[regular])
    values[degenerate] = 2.0 * n_active[degenerate] * DEGENERATE_EXPONENT
    max_score = np.where(has, running, 0.0)
    return ScanResult(t1=t1, t2=t2, values=values, n_active=n_active, max_score=max_score, degenerate=degenerate)


def scan_window_cells(
    r_hat: np.ndarray, members: np.ndarray, t1: int, t2: int
) -> Tuple[np.ndarray, np.ndarray]:
    """격자 셀별 소속 행렬 (C, n)에 대해 L̂ 행렬 (C, τ)을 계산합니다.

    Returns:
        (values, degenerate) 두 행렬
    """
    _check_window(r_hat.shape[0], t1, t2)
    seg_m = members[:, t1 - 1:t2]
    seg_r = r_hat[t1 - 1:t2]
    n_active = np.cumsum(seg_m, axis=1, dtype=np.int64)
    running = np.maximum.accumulate(np.where(seg_m, seg_r[None, :], -np.inf), axis=1)
    has = n_active > 0
    degenerate = has & (running <= 0)
    regular = has & ~degenerate
    values = np.zeros(seg_m.shape, dtype=float)
    values[regular] = -2.0 * n_active[regular] * np.log(running[regular])
    values[degenerate] = 2.0 * n_active[degenerate] * DEGENERATE_EXPONENT
    return values, degenerate


def quasi_lr_scan(scores: ScoreSeries, t1: int, t2: int) -> List[SegmentStat]:
    """활성(X_t > x0) 관측치 기준 국소 준우도비 통계량 L̂_{t1,τ,t2}, τ = t1..t2.

    Raises:
        IndexOutOfRange: 1 <= t1 <= t2 <= n 이 아닌 경우
    """
    return scan_window(scores.r_hat, scores.active, t1, t2).to_stats()


def quasi_lr_scan_cell(series: Series, scores: ScoreSeries, cell: GridCell, t1: int, t2: int) -> List[SegmentStat]:
    """소속 조건을 X_t ∈ cell (닫힌 정육면체)로 바꾼 L̂ 스캔.

    셀 좌표는 재척도 단위이므로 입력을 cell.x_bar로 나누어 판정합니다.
    점수가 정의되지 않은 (비활성) 관측치는 셀 안에 있어도 세지 않습니다.
    """
    in_cell = cell.contains(series.inputs / np.asarray(cell.x_bar))
    return scan_window(scores.r_hat, scores.active & in_cell, t1, t2).to_stats()


@dataclass(frozen=True)
class SingleDetection:
    """단일 변화점 탐지 결과."""
    detected: bool
    eta_hat: int
    stat: float
    threshold: float

    def to_dict(self) -> Dict[str, Any]:
        return {
            "detected": self.detected,
            "eta_hat": self.eta_hat,
            "stat": self.stat,
            "lambda": self.threshold,
        }


@dataclass
class DetectionResult:
    """다중 변화점 탐지 결과.

    changepoints는 순증가하며 각 값은 [1, n-1]에 있습니다.
    """
    n: int
    threshold: float
    x0: List[float]
    changepoints: List[int] = field(default_factory=list)
    stats: List[float] = field(default_factory=list)
    restarts: List[int] = field(default_factory=list)
    refit_windows: List[Tuple[int, int]] = field(default_factory=list)
    pilots: List[int] = field(default_factory=list)
    cells: Optional[List[Any]] = None
    method: str = "fcp"
    flags: List[str] = field(default_factory=list)
    changepoint_labels: Optional[List[Any]] = None

    def __post_init__(self):
        if len(self.stats) != len(self.changepoints):
            raise ValueError("stats와 changepoints의 길이가 다릅니다")
        if any(b <= a for a, b in zip(self.changepoints, self.changepoints[1:])):
            raise ValueError(f"변화점은 순증가해야 합니다: {self.changepoints}")
        if any(not 1 <= c <= self.n - 1 for c in self.changepoints):
            raise ValueError(f"변화점은 [1, {self.n - 1}] 범위여야 합니다: {self.changepoints}")

    @property
    def k_hat(self) -> int:
        return len(self.changepoints)

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {
            "k_hat": self.k_hat,
            "changepoints": list(self.changepoints),
            "stats": [float(s) for s in self.stats],
            "restarts": list(self.restarts),
            "refit_windows": [[int(s), int(e)] for s, e in self.refit_windows],
            "lambda": float(self.threshold),
            "x0": [float(v) for v in self.x0],
            "n": self.n,
            "method": self.method,
            "pilots": list(self.pilots),
            "flags": list(self.flags),
        }
        if self.cells is not None:
            payload["cells"] = [c.to_dict() for c in self.cells]
        if self.changepoint_labels is not None:
            payload["changepoint_labels"] = list(self.changepoint_labels)
        return payload

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DetectionResult":
        """결과 JSON에서 복원합니다 (셀 정보는 복원하지 않음).

        Raises:
            ValueError: n 또는 lambda 항목이 없는 경우
        """
        missing = [key for key in ("n", "lambda") if key not in data]
        if missing:
            raise ValueError(f"결과 JSON에 필수 항목이 없습니다: {missing}")
        return cls(
            n=int(data["n"]),
            threshold=float(data["lambda"]),
            x0=[float(v) for v in data.get("x0", [])],
            changepoints=[int(c) for c in data.get("changepoints", [])],
            stats=[float(s) for s in data.get("stats", [])],
            restarts=[int(m) for m in data.get("restarts", [])],
            refit_windows=[(int(s), int(e)) for s, e in data.get("refit_windows", [])],
            pilots=[int(p) for p in data.get("pilots", [])],
            cells=None,
            method=data.get("method", "fcp"),
            flags=list(data.get("flags", [])),
            changepoint_labels=data.get("changepoint_labels"),
        )

"""변화점 위치의 기하분포 기반 신뢰구간 모델."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, List

from scipy.stats import beta

from core.domain.models.config import InferenceMode

# μ̂ 클램프 폭
MU_EPS = 1e-6


@dataclass(frozen=True)
class MuEstimate:
    """점프 크기 추정치 μ̂ = max f̂1(x)/f̂2(x)."""
    mu_hat: float
    n_eval: int
    clamped: bool = False


@dataclass(frozen=True)
class ThetaEstimate:
    """기하분포 성공 확률 추정치."""
    theta_hat: float
    mode: InferenceMode
    flags: List[str] = field(default_factory=list)
    components: Dict[str, float] = field(default_factory=dict)


def default_window(n: int) -> int:
    """슬라이딩 창 길이 H_n = ⌈n / log n⌉."""
    return max(int(math.ceil(n / math.log(n))), 1)


def default_score_bins(n: int) -> int:
    """점수 히스토그램 구간 수 (폭 h_n = 1/⌈n^{1/3}⌉)."""
    return max(int(math.ceil(n ** (1.0 / 3.0))), 1)


def default_input_bins(n: int, d: int) -> int:
    """좌표별 투입 분할 수 (폭 h_{j,n} = range_j/⌈n^{1/(d+2)}⌉)."""
    return max(int(math.ceil(n ** (1.0 / (d + 2)))), 1)


def theta_lower_bound(hits: int, n: int, confidence: float) -> float:
    """θ̂ = hits/n 의 단측 Clopper-Pearson 하한. hits = 0 이면 0."""
    if not 0 <= hits <= n or n < 1:
        raise ValueError(f"hits={hits}, n={n}: 0 <= hits <= n, n >= 1 이어야 합니다")
    if not 0.0 < confidence < 1.0:
        raise ValueError(f"confidence는 (0, 1) 범위여야 합니다: {confidence}")
    if hits == 0:
        return 0.0
    return float(beta.ppf(1.0 - confidence, hits, n - hits + 1))


def geometric_quantile(theta: float, level: float) -> int:
    """1 - (1-θ)^{k+1} >= level 을 만족하는 가장 작은 k >= 0."""
    if not 0.0 < theta <= 1.0:
        raise ValueError(f"theta는 (0, 1] 범위여야 합니다: {theta}")
    if not 0.0 < level < 1.0:
        raise ValueError(f"level은 (0, 1) 범위여야 합니다: {level}")
    if theta >= 1.0:
        return 0
    k = max(int(math.ceil(math.log(1.0 - level) / math.log1p(-theta))) - 1, 0)
    # 로그 비의 반올림 오차 보정
    while k > 0 and 1.0 - (1.0 - theta) ** k >= level:
        k -= 1
    while 1.0 - (1.0 - theta) ** (k + 1) < level:
        k += 1
    return k


@dataclass(frozen=True)
class GeometricCI:
    """단측 구간 [max(1, η̂ - k*), η̂]."""
    eta_hat: int
    theta_hat: float
    level: float
    k_star: int
    lo: int
    hi: int
    mode: InferenceMode
    mu_hat: float = float("nan")
    flags: List[str] = field(default_factory=list)

    @classmethod
    def from_theta(
        cls,
        eta_hat: int,
        theta_hat: float,
        level: float,
        mode: InferenceMode = InferenceMode.IID,
        mu_hat: float = float("nan"),
        flags: List[str] = None,
    ) -> "GeometricCI":
        k_star = geometric_quantile(theta_hat, level)
        return cls(
            eta_hat=eta_hat,
            theta_hat=theta_hat,
            level=level,
            k_star=k_star,
            lo=max(1, eta_hat - k_star),
            hi=eta_hat,
            mode=InferenceMode(mode),
            mu_hat=mu_hat,
            flags=list(flags or []),
        )

    @property
    def width(self) -> int:
        return self.hi - self.lo

    def contains(self, eta: int) -> bool:
        return self.lo <= eta <= self.hi

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eta_hat": self.eta_hat,
            "theta_hat": self.theta_hat,
            "level": self.level,
            "lo": self.lo,
            "hi": self.hi,
            "mode": self.mode.value,
            "k_star": self.k_star,
            "mu_hat": None if math.isnan(self.mu_hat) else self.mu_hat,
            "flags": list(self.flags),
        }


confidence_interval = GeometricCI.from_theta

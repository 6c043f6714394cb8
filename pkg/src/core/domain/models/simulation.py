"""합성 데이터 생성 모형 (프런티어 족, 효율성 점수 분포, 시뮬레이션 설정)."""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.special import ndtr, ndtri

from core.domain.models.errors import UnknownPreset


class FrontierFamily(str, Enum):
    """기준 프런티어 함수 족."""
    CONSTANT = "constant"
    ADDITIVE = "additive"
    COBB_DOUGLAS = "cobb-douglas"
    LOGISTIC = "logistic"
    PIECEWISE_LINEAR = "piecewise-linear"

    @classmethod
    def parse(cls, name: str) -> "FrontierFamily":
        """'Cobb-Douglas', 'CobbDouglas', 'cobb_douglas' 같은 표기를 모두 허용합니다."""
        key = name.strip().lower().replace("-", "").replace("_", "").replace(" ", "")
        aliases = {
            "constant": cls.CONSTANT,
            "additive": cls.ADDITIVE,
            "cobbdouglas": cls.COBB_DOUGLAS,
            "logistic": cls.LOGISTIC,
            "piecewiselinear": cls.PIECEWISE_LINEAR,
        }
        if key not in aliases:
            raise ValueError(f"알 수 없는 프런티어 모형입니다: {name}")
        return aliases[key]


class ScoreKind(str, Enum):
    """효율성 점수 분포."""
    R1 = "r1"  # U[0,1]
    R2 = "r2"  # 절단정규, 평균 0.5 + t/n
    R3 = "r3"  # 절단정규, 평균 1.5 - t/n
    R4 = "r4"  # 후반부 U[0,1] / U[0.8,1] 혼합


class Scenario(str, Enum):
    """GLOBAL: 모든 구간이 같은 족의 배수, LOCAL: 첫 구간 상수 후 구간선형 (국소 변화)."""
    GLOBAL = "global"
    LOCAL = "local"


# 족별, 차원별 기본 모수 (A, B, ω, α)
_TABLE_DEFAULTS: Dict[Tuple[FrontierFamily, int], Dict[str, Any]] = {
    (FrontierFamily.CONSTANT, 1): {"A": 1.0},
    (FrontierFamily.CONSTANT, 2): {"A": 1.0},
    (FrontierFamily.ADDITIVE, 1): {"A": 3.0, "alpha": (3.0,)},
    (FrontierFamily.ADDITIVE, 2): {"A": 3.0, "alpha": (3.0, 3.0)},
    (FrontierFamily.COBB_DOUGLAS, 1): {"A": 1.0, "alpha": (0.3,)},
    (FrontierFamily.COBB_DOUGLAS, 2): {"A": 1.0, "alpha": (0.3, 0.3)},
    (FrontierFamily.LOGISTIC, 1): {"A": 4.0, "B": 0.5, "alpha": (1.0,)},
    (FrontierFamily.LOGISTIC, 2): {"A": 4.0, "B": 0.5, "alpha": (1.0, 1.0)},
    (FrontierFamily.PIECEWISE_LINEAR, 1): {"A": 1.0, "B": -0.875, "omega": 1.25, "alpha": (1.5,)},
    (FrontierFamily.PIECEWISE_LINEAR, 2): {"A": 1.0, "B": -2.75, "omega": 2.5, "alpha": (1.5, 1.5)},
}


class FrontierSpec(BaseModel):
    """기준 프런티어 f_(1)의 족과 모수."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    family: FrontierFamily
    d: int = Field(default=1, ge=1)
    A: float = 1.0
    B: Optional[float] = None
    omega: Optional[float] = None
    alpha: Tuple[float, ...] = ()

    @model_validator(mode="after")
    def _check_arity(self) -> "FrontierSpec":
        if self.family is FrontierFamily.CONSTANT:
            if self.alpha:
                raise ValueError("상수 프런티어에는 alpha가 없습니다")
            return self
        if len(self.alpha) != self.d:
            raise ValueError(f"{self.family.value} 프런티어의 alpha 개수({len(self.alpha)})가 d={self.d}와 다릅니다")
        if self.family in (FrontierFamily.LOGISTIC, FrontierFamily.PIECEWISE_LINEAR) and self.B is None:
            raise ValueError(f"{self.family.value} 프런티어에는 B가 필요합니다")
        if self.family is FrontierFamily.PIECEWISE_LINEAR and self.omega is None:
            raise ValueError("구간선형 프런티어에는 omega가 필요합니다")
        return self

    @classmethod
    def table_default(cls, family: FrontierFamily, d: int) -> "FrontierSpec":
        """벤치마크 표의 기본 모수로 채운 프런티어 (d = 1, 2)."""
        family = FrontierFamily(family)
        try:
            params = _TABLE_DEFAULTS[(family, d)]
        except KeyError:
            raise UnknownPreset(f"{family.value} 프런티어의 d={d} 기본 모수가 없습니다")
        return cls(family=family, d=d, **params)

    def value(self, inputs: np.ndarray) -> np.ndarray:
        """기준 프런티어 값 (벡터화)."""
        X = np.asarray(inputs, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, self.d)
        if X.shape[1] != self.d:
            raise ValueError(f"입력 차원({X.shape[1]})이 프런티어 차원({self.d})과 다릅니다")
        alpha = np.asarray(self.alpha, dtype=float)

        if self.family is FrontierFamily.CONSTANT:
            return np.full(X.shape[0], self.A, dtype=float)
        if self.family is FrontierFamily.ADDITIVE:
            return self.A + X @ alpha
        if self.family is FrontierFamily.COBB_DOUGLAS:
            return self.A * np.prod(X ** alpha, axis=1)
        if self.family is FrontierFamily.LOGISTIC:
            # e^z / (1 + e^z) = 1 / (1 + e^{-z})
            z = self.A * (X @ alpha - self.B)
            return 1.0 / (1.0 + np.exp(-z))
        l1 = np.abs(X).sum(axis=1)
        return np.where(l1 < self.omega, self.A, self.B + X @ alpha)


class ScoreDistSpec(BaseModel):
    """효율성 점수 R_t 분포. 생성되는 점수는 항상 [0, 1] 안에 있습니다."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: ScoreKind = ScoreKind.R1
    sigma2: float = Field(default=0.1, gt=0)
    mix_low: float = Field(default=0.8, ge=0, lt=1)
    mix_weight: float = Field(default=0.5, ge=0, le=1)

    def truncnorm_mean(self, t: np.ndarray, n: int) -> np.ndarray:
        if self.kind is ScoreKind.R2:
            return 0.5 + t / n
        return 1.5 - t / n

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """t = 1..n 점수를 한 번에 생성합니다 (난수 소비 순서 고정)."""
        t = np.arange(1, n + 1, dtype=float)
        u = rng.uniform(0.0, 1.0, size=n)
        if self.kind is ScoreKind.R1:
            return u
        if self.kind is ScoreKind.R4:
            pick = rng.uniform(0.0, 1.0, size=n)
            narrow = self.mix_low + (1.0 - self.mix_low) * u
            mixed = np.where(pick < self.mix_weight, u, narrow)
            return np.where(t <= n // 2, u, mixed)

        # [0, 1]로 절단한 정규분포의 역CDF 샘플링
        mu = self.truncnorm_mean(t, n)
        sigma = math.sqrt(self.sigma2)
        lower = ndtr((0.0 - mu) / sigma)
        upper = ndtr((1.0 - mu) / sigma)
        z = ndtri(lower + u * (upper - lower))
        return np.clip(mu + sigma * z, 0.0, 1.0)


class SimConfig(BaseModel):
    """합성 데이터 생성 설정."""
    model_config = ConfigDict(frozen=True, extra="forbid")

    n: int = Field(default=1000, ge=4)
    d: int = Field(default=1, ge=1)
    k: int = Field(default=2, ge=0)
    change_multiplier: float = Field(default=1.75, gt=0)
    frontier: FrontierSpec
    scores: ScoreDistSpec = ScoreDistSpec()
    seed: int = Field(default=0, ge=0)
    scenario: Scenario = Scenario.GLOBAL
    input_low: float = Field(default=1.0, ge=0)
    input_high: float = 2.0

    @model_validator(mode="after")
    def _check(self) -> "SimConfig":
        if self.frontier.d != self.d:
            raise ValueError(f"프런티어 차원({self.frontier.d})과 d={self.d}가 다릅니다")
        if self.n < self.k + 1:
            raise ValueError(f"n={self.n}은 변화점 {self.k}개를 배치하기에 너무 작습니다")
        if self.input_high <= self.input_low:
            raise ValueError("input_high는 input_low보다 커야 합니다")
        if self.scenario is Scenario.LOCAL and self.frontier.family is not FrontierFamily.PIECEWISE_LINEAR:
            raise ValueError("국소 변화 시나리오는 구간선형 프런티어가 필요합니다")
        return self

    @classmethod
    def preset(
        cls,
        family: FrontierFamily,
        d: int,
        k: int,
        scores: ScoreKind,
        n: int = 1000,
        seed: int = 0,
        scenario: Scenario = Scenario.GLOBAL,
    ) -> "SimConfig":
        return cls(
            n=n,
            d=d,
            k=k,
            frontier=FrontierSpec.table_default(family, d),
            scores=ScoreDistSpec(kind=scores),
            seed=seed,
            scenario=scenario,
        )

    @classmethod
    def local_preset(cls, d: int, n: int = 1000, seed: int = 0) -> "SimConfig":
        """첫 구간 상수, 둘째 구간 구간선형, 셋째 구간 1.75배, R4 점수."""
        return cls.preset(FrontierFamily.PIECEWISE_LINEAR, d, 2, ScoreKind.R4, n=n, seed=seed, scenario=Scenario.LOCAL)

    @property
    def changepoints(self) -> List[int]:
        """η_k = ⌊k·n/(K+1)⌋, k = 1..K."""
        return [(i * self.n) // (self.k + 1) for i in range(1, self.k + 1)]

    def segment_ids(self) -> np.ndarray:
        """t = 1..n의 구간 번호 (η_{k-1} < t <= η_k 이면 k)."""
        t = np.arange(1, self.n + 1)
        return np.searchsorted(np.asarray(self.changepoints, dtype=int), t, side="left") + 1


def frontier_value(
    spec: FrontierSpec,
    x,
    segment_k: int,
    multiplier: float = 1.75,
    scenario: Scenario = Scenario.GLOBAL,
) -> np.ndarray:
    """구간 k의 참 프런티어 f_(k)(x).

    GLOBAL은 multiplier^{k-1}·f, LOCAL은 k = 1에서 상수 1, k >= 2에서 multiplier^{k-2}·f.
    """
    if segment_k < 1:
        raise ValueError(f"구간 번호는 1 이상이어야 합니다: {segment_k}")
    X = np.asarray(x, dtype=float)
    if X.ndim <= 1:
        X = X.reshape(-1, spec.d)
    if Scenario(scenario) is Scenario.LOCAL:
        if segment_k == 1:
            base = FrontierSpec.table_default(FrontierFamily.CONSTANT, spec.d)
            return base.value(X)
        return multiplier ** (segment_k - 2) * spec.value(X)
    return multiplier ** (segment_k - 1) * spec.value(X)


@dataclass(frozen=True, eq=False)
class SimTruth:
    """생성 데이터의 정답 (변화점, 구간 번호, 참 점수, 참 프런티어 값)."""
    changepoints: List[int]
    segments: np.ndarray
    scores: np.ndarray
    frontier: np.ndarray
    seed: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "changepoints": list(self.changepoints),
            "k": len(self.changepoints),
            "n": int(self.segments.shape[0]),
            "seed": self.seed,
            "segments": [int(s) for s in self.segments],
            "scores": [float(r) for r in self.scores],
            "frontier": [float(f) for f in self.frontier],
        }

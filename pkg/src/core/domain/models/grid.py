"""투입 공간의 다중 스케일 반중첩 격자."""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np

from core.domain.models.errors import DimensionMismatch
from core.domain.models.observation import Series, TrimBox

logger = logging.getLogger(__name__)

# log2 경계값에서 부동소수 오차로 스케일이 하나 더 생기는 것을 막는 허용치
_SCALE_EPS = 1e-9


@dataclass(frozen=True)
class GridCell:
    """재척도된 [0, 1]^d 상자 안의 닫힌 정육면체 셀.

    lo/hi는 재척도 좌표이며, x_bar를 곱하면 원 단위가 됩니다.
    """
    lo: Tuple[float, ...]
    hi: Tuple[float, ...]
    scale_k: int
    x_bar: Tuple[float, ...]

    def __post_init__(self):
        if not (len(self.lo) == len(self.hi) == len(self.x_bar)):
            raise DimensionMismatch("셀의 lo, hi, x_bar 차원이 다릅니다")
        if any(h < l for l, h in zip(self.lo, self.hi)):
            raise ValueError(f"셀 경계가 뒤집혀 있습니다: lo={self.lo}, hi={self.hi}")

    @property
    def d(self) -> int:
        return len(self.lo)

    @property
    def side(self) -> float:
        return 2.0 ** (-self.scale_k)

    def contains(self, scaled_inputs: np.ndarray) -> np.ndarray:
        """재척도된 입력 행들의 셀 소속 여부 (양끝 포함)."""
        X = np.asarray(scaled_inputs, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, self.d)
        lo = np.asarray(self.lo)
        hi = np.asarray(self.hi)
        return np.all((X >= lo) & (X <= hi), axis=1)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "lo": [l * s for l, s in zip(self.lo, self.x_bar)],
            "hi": [h * s for h, s in zip(self.hi, self.x_bar)],
            "scale": self.scale_k,
        }


@dataclass(frozen=True, eq=False)
class MultiScaleGrid:
    """스케일 k = 0..⌈log2(A_n^{1/d})⌉의 반중첩 정육면체 모음.

    - 스케일 k 셀의 한 변은 2^{-k}, 좌하단 꼭짓점은 2^{-k-1} 간격
    - 모든 셀의 내부는 트리밍 상자 [0, x0]와 겹치지 않음
    """
    cells: List[GridCell]
    a_n: float
    x_bar: Tuple[float, ...]
    lower_bounds: np.ndarray = field(repr=False, default=None)
    upper_bounds: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        if self.lower_bounds is None:
            d = len(self.x_bar)
            lo = np.array([c.lo for c in self.cells], dtype=float).reshape(len(self.cells), d)
            hi = np.array([c.hi for c in self.cells], dtype=float).reshape(len(self.cells), d)
            object.__setattr__(self, "lower_bounds", lo)
            object.__setattr__(self, "upper_bounds", hi)

    @property
    def d(self) -> int:
        return len(self.x_bar)

    @property
    def size(self) -> int:
        return len(self.cells)

    @staticmethod
    def max_scale(a_n: float, d: int) -> int:
        if a_n < 1:
            raise ValueError(f"a_n은 1 이상이어야 합니다: {a_n}")
        return max(int(math.ceil(math.log2(a_n ** (1.0 / d)) - _SCALE_EPS)), 0)

    @classmethod
    def build(cls, series: Series, x0: TrimBox, a_n: float) -> "MultiScaleGrid":
        """시계열의 좌표별 최대값으로 재척도한 [0, 1]^d 위에 격자를 만듭니다.

        Args:
            series: 관측 시계열
            x0: 원 단위 트리밍 임계값
            a_n: 스케일 상한 모수 (>= 1)

        Returns:
            스케일 오름차순, 같은 스케일 안에서는 앵커 사전식 순서의 셀 목록을 가진 MultiScaleGrid
        """
        if x0.d != series.d:
            raise DimensionMismatch(f"x0 차원({x0.d})과 시계열 차원({series.d})이 다릅니다")
        d = series.d
        maxima = series.inputs.max(axis=0)
        x_bar = tuple(float(m) if m > 0 else 1.0 for m in maxima)
        x0_scaled = x0.as_array() / np.asarray(x_bar)

        top = cls.max_scale(a_n, d)
        cells: List[GridCell] = []
        for k in range(top + 1):
            step = 2.0 ** (-k - 1)
            side = 2.0 ** (-k)
            anchors = range(2 ** (k + 1) - 1)
            for idx in itertools.product(anchors, repeat=d):
                lo = tuple(i * step for i in idx)
                # 내부가 [0, x0]와 겹치지 않으려면 어느 한 좌표에서 lo >= x0
                if not any(l >= x for l, x in zip(lo, x0_scaled)):
                    continue
                cells.append(GridCell(lo=lo, hi=tuple(l + side for l in lo), scale_k=k, x_bar=x_bar))

        logger.debug(f"다중 스케일 격자 생성: 스케일 0..{top}, 셀 {len(cells)}개 (a_n={a_n:.3g})")
        return cls(cells=cells, a_n=float(a_n), x_bar=x_bar)

    def scale_inputs(self, inputs: np.ndarray) -> np.ndarray:
        X = np.asarray(inputs, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.shape[1] != self.d:
            raise DimensionMismatch(f"입력 차원({X.shape[1]})과 격자 차원({self.d})이 다릅니다")
        return X / np.asarray(self.x_bar)

    def membership(self, inputs: np.ndarray) -> np.ndarray:
        """(셀 수, n) 불리언 소속 행렬."""
        X = self.scale_inputs(inputs)
        if not self.cells:
            return np.zeros((0, X.shape[0]), dtype=bool)
        inside = (X[None, :, :] >= self.lower_bounds[:, None, :]) & (X[None, :, :] <= self.upper_bounds[:, None, :])
        return np.all(inside, axis=2)


build_grid = MultiScaleGrid.build

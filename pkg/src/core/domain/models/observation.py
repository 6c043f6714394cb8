"""시간 순서 투입/산출 관측치 도메인 모델."""

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from core.domain.models.errors import (
    DimensionMismatch,
    EmptyInput,
    IndexOutOfRange,
    NegativeValue,
    NonFiniteValue,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Observation:
    """단일 시점의 (t, x, y) 관측치."""
    t: int
    x: Tuple[float, ...]
    y: float

    def __post_init__(self):
        if self.t < 1:
            raise IndexOutOfRange(f"시간 인덱스는 1 이상이어야 합니다: {self.t}")
        if any(v < 0 for v in self.x) or self.y < 0:
            raise NegativeValue(f"t={self.t} 관측치에 음수 값이 있습니다")

    def to_dict(self) -> dict:
        return {"t": self.t, "x": list(self.x), "y": self.y}


@dataclass(frozen=True, eq=False)
class Series:
    """1..n 연속 인덱스를 가진 불변 관측 시계열.

    - inputs: (n, d) 투입 행렬, outputs: (n,) 산출 벡터 (둘 다 읽기 전용)
    - labels: 원본 시간 라벨 (실데이터의 동일 시점 다중 관측 보존용)
    """
    inputs: np.ndarray
    outputs: np.ndarray
    labels: Optional[Tuple[Any, ...]] = None

    def __post_init__(self):
        X = np.array(self.inputs, dtype=float)
        y = np.array(self.outputs, dtype=float).reshape(-1)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.shape[0] == 0 or y.shape[0] == 0:
            raise EmptyInput("관측치가 없습니다")
        if X.shape[0] != y.shape[0]:
            raise DimensionMismatch(f"투입 행 수({X.shape[0]})와 산출 길이({y.shape[0]})가 다릅니다")
        if X.shape[0] < 2:
            raise EmptyInput("시계열 길이는 최소 2 이상이어야 합니다")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise NonFiniteValue("NaN 또는 무한대 값이 포함되어 있습니다")
        if np.any(X < 0) or np.any(y < 0):
            bad = int(np.flatnonzero((X < 0).any(axis=1) | (y < 0))[0]) + 1
            raise NegativeValue(f"t={bad} 관측치에 음수 값이 있습니다")
        if self.labels is not None and len(self.labels) != X.shape[0]:
            raise DimensionMismatch("라벨 수가 관측치 수와 다릅니다")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "inputs", X)
        object.__setattr__(self, "outputs", y)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def n(self) -> int:
        return int(self.outputs.shape[0])

    @property
    def d(self) -> int:
        return int(self.inputs.shape[1])

    @cached_property
    def obs(self) -> List[Observation]:
        return [
            Observation(t=i + 1, x=tuple(float(v) for v in self.inputs[i]), y=float(self.outputs[i]))
            for i in range(self.n)
        ]

    def label_of(self, t: int) -> Any:
        """시간 인덱스 t의 원본 라벨 (없으면 t 자체)."""
        self.check_index(t)
        if self.labels is None:
            return t
        return self.labels[t - 1]

    def check_index(self, t: int) -> None:
        if not 1 <= t <= self.n:
            raise IndexOutOfRange(f"인덱스 {t}가 범위 [1, {self.n}]를 벗어났습니다")

    def window(self, t1: int, t2: int) -> "Series":
        """[t1, t2] 구간(1-기반, 양끝 포함)을 새 시계열로 잘라냅니다."""
        self.check_index(t1)
        self.check_index(t2)
        if t2 - t1 + 1 < 2:
            raise IndexOutOfRange(f"구간 [{t1}, {t2}]의 길이가 2 미만입니다")
        labels = None if self.labels is None else self.labels[t1 - 1:t2]
        return Series(self.inputs[t1 - 1:t2], self.outputs[t1 - 1:t2], labels)

    def to_rows(self) -> List[list]:
        """`t,x1..xd,y` 행 목록으로 직렬화합니다 (라벨이 있으면 라벨 사용)."""
        rows = []
        for i in range(self.n):
            t = self.labels[i] if self.labels is not None else i + 1
            rows.append([t, *(float(v) for v in self.inputs[i]), float(self.outputs[i])])
        return rows

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]]) -> "Series":
        """원시 행 `(t, x1, ..., xd, y)`을 검증하여 시계열을 만듭니다.

        행은 t 기준으로 안정 정렬되며, 동일 라벨의 행들은 파일 순서대로 연속 인덱스를 받습니다.

        Raises:
            EmptyInput: 행이 없거나 1개뿐인 경우
            DimensionMismatch: 행마다 열 수가 다른 경우
            NegativeValue / NonFiniteValue: 값 검증 실패
        """
        rows = list(rows)
        if not rows:
            raise EmptyInput("입력 행이 비어 있습니다")
        arity = len(rows[0])
        if arity < 3:
            raise DimensionMismatch(f"행은 최소 3개 열(t, x1, y)이 필요합니다: {arity}")
        for i, row in enumerate(rows):
            if len(row) != arity:
                raise DimensionMismatch(f"{i + 1}번째 행의 열 수({len(row)})가 첫 행({arity})과 다릅니다")

        order = sorted(range(len(rows)), key=lambda i: _label_key(rows[i][0]))
        labels = tuple(rows[i][0] for i in order)
        try:
            values = np.array([[float(v) for v in rows[i][1:]] for i in order], dtype=float)
        except (TypeError, ValueError) as e:
            raise NonFiniteValue(f"숫자로 변환할 수 없는 값이 있습니다: {e}")
        if len(set(labels)) < len(labels):
            logger.info(f"동일 시점 라벨이 있어 {len(labels)}개 관측치를 연속 인덱스로 평탄화합니다")
        return cls(values[:, :-1], values[:, -1], labels)


def _label_key(label: Any):
    """숫자 라벨은 수치 순서, 그 외는 문자열 순서."""
    try:
        return (0, float(label), "")
    except (TypeError, ValueError):
        return (1, math.inf, str(label))


@dataclass(frozen=True)
class TrimBox:
    """엔트리별 트리밍 임계값 x0."""
    x0: Tuple[float, ...]

    def __post_init__(self):
        values = tuple(float(v) for v in self.x0)
        if not values:
            raise EmptyInput("x0는 최소 1차원이어야 합니다")
        if not all(math.isfinite(v) for v in values):
            raise NonFiniteValue(f"x0에 유한하지 않은 값이 있습니다: {values}")
        if any(v < 0 for v in values):
            raise NegativeValue(f"x0는 음수일 수 없습니다: {values}")
        object.__setattr__(self, "x0", values)

    @property
    def d(self) -> int:
        return len(self.x0)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.x0, dtype=float)

    def active_mask(self, inputs: np.ndarray) -> np.ndarray:
        """X_t > x0 (엔트리별, 엄격 부등호) 여부."""
        inputs = np.asarray(inputs, dtype=float)
        if inputs.ndim == 1:
            inputs = inputs.reshape(-1, 1)
        if inputs.shape[1] != self.d:
            raise DimensionMismatch(f"입력 차원({inputs.shape[1]})과 x0 차원({self.d})이 다릅니다")
        return np.all(inputs > self.as_array(), axis=1)

    @classmethod
    def zeros(cls, d: int) -> "TrimBox":
        return cls(tuple(0.0 for _ in range(d)))

    @classmethod
    def from_quantile(cls, series: Series, alpha: float) -> "TrimBox":
        """좌표별 하측(type-1) 경험 분위수로 x0를 정합니다."""
        if not 0.0 <= alpha < 1.0:
            raise ValueError(f"alpha는 [0, 1) 범위여야 합니다: {alpha}")
        x0 = np.quantile(series.inputs, alpha, axis=0, method="inverted_cdf")
        return cls(tuple(float(v) for v in np.atleast_1d(x0)))

    def to_list(self) -> List[float]:
        return list(self.x0)


trim_quantile = TrimBox.from_quantile
validate_series = Series.from_rows

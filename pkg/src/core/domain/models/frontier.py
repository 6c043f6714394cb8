"""FDH 생산 프런티어 추정 모델."""

import logging
from dataclasses import dataclass
from typing import List, Sequence, Union

import numpy as np

from core.domain.models.errors import DimensionMismatch, EmptyInput
from core.domain.models.observation import Observation, Series

logger = logging.getLogger(__name__)

# 질의 블록 크기 (n x k x d 불리언 행렬의 메모리 상한 관리)
_QUERY_CHUNK = 1024


def _as_arrays(data: Union[Series, Sequence[Observation]]) -> tuple:
    if isinstance(data, Series):
        return data.inputs, data.outputs
    data = list(data)
    if not data:
        raise EmptyInput("프런티어를 적합할 관측치가 없습니다")
    d = len(data[0].x)
    if any(len(o.x) != d for o in data):
        raise DimensionMismatch("관측치들의 입력 차원이 서로 다릅니다")
    X = np.array([o.x for o in data], dtype=float).reshape(len(data), d)
    y = np.array([o.y for o in data], dtype=float)
    return X, y


def _check_query(x: np.ndarray, d: int) -> np.ndarray:
    q = np.asarray(x, dtype=float)
    if q.ndim == 0:
        q = q.reshape(1, 1)
    elif q.ndim == 1:
        q = q.reshape(1, -1) if d > 1 or q.shape[0] == 1 else q.reshape(-1, 1)
    if q.shape[1] != d:
        raise DimensionMismatch(f"질의 차원({q.shape[1]})과 프런티어 차원({d})이 다릅니다")
    return q


@dataclass(frozen=True, eq=False)
class FrontierEstimate:
    """자유처분(free disposal) 순서의 반사슬(antichain)만 보관하는 FDH 계단 함수.

    - 어떤 저장점도 다른 저장점에 의해 (입력 이하, 산출 이상)으로 지배되지 않습니다.
    - evaluate(x) = max{y : 저장점 x' <= x}, 지배하는 점이 없으면 support_floor(0).
    """
    points_x: np.ndarray
    points_y: np.ndarray
    d: int
    support_floor: float = 0.0

    @classmethod
    def fit(cls, data: Union[Series, Sequence[Observation]]) -> "FrontierEstimate":
        """관측치에서 FDH 프런티어를 적합합니다.

        Raises:
            EmptyInput: 관측치가 없는 경우
        """
        X, y = _as_arrays(data)
        return cls.fit_arrays(X, y)

    @classmethod
    def fit_arrays(cls, inputs: np.ndarray, outputs: np.ndarray) -> "FrontierEstimate":
        X = np.asarray(inputs, dtype=float)
        y = np.asarray(outputs, dtype=float).reshape(-1)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        if X.shape[0] == 0:
            raise EmptyInput("프런티어를 적합할 관측치가 없습니다")
        if X.shape[0] != y.shape[0]:
            raise DimensionMismatch("투입 행 수와 산출 길이가 다릅니다")
        d = X.shape[1]

        if d == 1:
            # 1차원: x 오름차순에서 y 누적 최대가 갱신되는 점만 남김
            order = np.lexsort((-y, X[:, 0]))
            xs, ys = X[order, 0], y[order]
            keep = []
            best = -np.inf
            last_x = None
            for i in range(xs.shape[0]):
                if xs[i] == last_x:
                    continue
                last_x = xs[i]
                if ys[i] > best:
                    keep.append(i)
                    best = ys[i]
            px = xs[keep].reshape(-1, 1)
            py = ys[keep]
        else:
            # 산출 내림차순 (동률이면 입력 합 오름차순)으로 훑으며 지배되지 않는 점만 추가
            order = np.lexsort((X.sum(axis=1), -y))
            kept: List[int] = []
            for i in order:
                if kept and np.any(np.all(X[kept] <= X[i], axis=1)):
                    continue
                kept.append(int(i))
            px = X[kept]
            py = y[kept]
            sort = np.lexsort(px.T[::-1])
            px, py = px[sort], py[sort]

        px = np.ascontiguousarray(px)
        px.setflags(write=False)
        py.setflags(write=False)
        return cls(points_x=px, points_y=py, d=d)

    @property
    def size(self) -> int:
        return int(self.points_y.shape[0])

    def evaluate(self, x) -> float:
        """단일 입력 벡터에서 프런티어 값을 반환합니다.

        Raises:
            DimensionMismatch: 입력 차원이 다른 경우
        """
        q = np.asarray(x, dtype=float).reshape(-1)
        if q.shape[0] != self.d:
            raise DimensionMismatch(f"질의 차원({q.shape[0]})과 프런티어 차원({self.d})이 다릅니다")
        return float(self.evaluate_many(q.reshape(1, -1))[0])

    def evaluate_many(self, inputs: np.ndarray) -> np.ndarray:
        """여러 입력 행에 대해 프런티어 값을 벡터화 계산합니다."""
        q = _check_query(inputs, self.d)
        if self.d == 1:
            idx = np.searchsorted(self.points_x[:, 0], q[:, 0], side="right") - 1
            out = np.full(q.shape[0], self.support_floor, dtype=float)
            hit = idx >= 0
            out[hit] = self.points_y[idx[hit]]
            return out

        out = np.empty(q.shape[0], dtype=float)
        for start in range(0, q.shape[0], _QUERY_CHUNK):
            block = q[start:start + _QUERY_CHUNK]
            dominated = np.all(self.points_x[None, :, :] <= block[:, None, :], axis=2)
            vals = np.where(dominated, self.points_y[None, :], -np.inf).max(axis=1)
            out[start:start + block.shape[0]] = np.where(np.isfinite(vals), vals, self.support_floor)
        return out

    def to_rows(self) -> List[List[float]]:
        """`x1..xd,y` 행 목록 (그림용 계단점)."""
        return [[*(float(v) for v in self.points_x[i]), float(self.points_y[i])] for i in range(self.size)]


@dataclass(frozen=True, eq=False)
class QuantileFrontierEstimate:
    """분위수 FDH: 지배되는 관측 산출의 q-분위수 (type-1).

    q = 1이면 FDH와 정확히 같습니다. 반사슬 축약이 불가능하므로 전체 표본을 보관합니다.
    """
    inputs: np.ndarray
    outputs: np.ndarray
    q: float
    d: int
    support_floor: float = 0.0

    @classmethod
    def fit(cls, data: Union[Series, Sequence[Observation]], q: float) -> "QuantileFrontierEstimate":
        if not 0.0 < q <= 1.0:
            raise ValueError(f"분위수 수준 q는 (0, 1] 범위여야 합니다: {q}")
        X, y = _as_arrays(data)
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X.reshape(-1, 1)
        return cls(inputs=X, outputs=np.asarray(y, dtype=float), q=q, d=X.shape[1])

    def evaluate(self, x) -> float:
        q = np.asarray(x, dtype=float).reshape(-1)
        if q.shape[0] != self.d:
            raise DimensionMismatch(f"질의 차원({q.shape[0]})과 프런티어 차원({self.d})이 다릅니다")
        return float(self.evaluate_many(q.reshape(1, -1))[0])

    def evaluate_many(self, inputs: np.ndarray) -> np.ndarray:
        queries = _check_query(inputs, self.d)
        out = np.full(queries.shape[0], self.support_floor, dtype=float)
        for i in range(queries.shape[0]):
            dominated = np.all(self.inputs <= queries[i], axis=1)
            if not dominated.any():
                continue
            ys = np.sort(self.outputs[dominated])
            k = max(int(np.ceil(self.q * ys.shape[0])), 1) - 1
            out[i] = ys[k]
        return out


def evaluate_quantile(data: Union[Series, Sequence[Observation]], x, q: float) -> float:
    """관측치 집합과 질의점 x에서 분위수 FDH 값을 계산합니다."""
    return QuantileFrontierEstimate.fit(data, q).evaluate(x)


def fit_frontier(data: Union[Series, Sequence[Observation]], quantile: float = 1.0):
    """q = 1이면 FDH, q < 1이면 분위수 FDH 추정치를 반환합니다."""
    if quantile >= 1.0:
        return FrontierEstimate.fit(data)
    return QuantileFrontierEstimate.fit(data, quantile)

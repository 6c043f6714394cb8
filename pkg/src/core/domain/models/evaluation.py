"""탐지 성능 평가 지표와 벤치마크 집계 모델."""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional

import numpy as np


def hausdorff(a: Iterable[int], b: Iterable[int], n: int) -> float:
    """두 변화점 집합 사이의 하우스도르프 거리.

    둘 다 비어 있으면 0, 한쪽만 비어 있으면 n (최대 위치 오차)입니다.
    """
    left = np.asarray(sorted(set(int(v) for v in a)), dtype=float)
    right = np.asarray(sorted(set(int(v) for v in b)), dtype=float)
    if left.size == 0 and right.size == 0:
        return 0.0
    if left.size == 0 or right.size == 0:
        return float(n)
    gaps = np.abs(left[:, None] - right[None, :])
    return float(max(gaps.min(axis=1).max(), gaps.min(axis=0).max()))


@dataclass(frozen=True)
class EvalRecord:
    """반복 1회의 평가 결과. error가 있으면 평균에서 제외됩니다."""
    rep: int
    d_h: float = float("nan")
    k_err: int = 0
    runtime_ms: float = 0.0
    k_hat: int = 0
    changepoints: List[int] = field(default_factory=list)
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None

    @classmethod
    def score(cls, rep: int, truth: List[int], estimate: List[int], n: int, runtime_ms: float) -> "EvalRecord":
        return cls(
            rep=rep,
            d_h=hausdorff(truth, estimate, n),
            k_err=abs(len(truth) - len(estimate)),
            runtime_ms=runtime_ms,
            k_hat=len(estimate),
            changepoints=[int(c) for c in estimate],
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rep": self.rep,
            "d_h": None if self.failed else self.d_h,
            "k_err": None if self.failed else self.k_err,
            "k_hat": None if self.failed else self.k_hat,
            "changepoints": list(self.changepoints),
            "runtime_ms": round(self.runtime_ms, 3),
            "error": self.error,
        }


@dataclass
class BenchmarkSummary:
    """반복 결과 집계 (평균은 실패한 반복을 제외)."""
    setup: str
    method: str
    records: List[EvalRecord] = field(default_factory=list)
    reference: Optional[Dict[str, float]] = None

    @property
    def successes(self) -> List[EvalRecord]:
        return [r for r in self.records if not r.failed]

    @property
    def failures(self) -> int:
        return sum(1 for r in self.records if r.failed)

    @property
    def d_h_mean(self) -> float:
        ok = self.successes
        return float(np.mean([r.d_h for r in ok])) if ok else float("nan")

    @property
    def k_err_mean(self) -> float:
        ok = self.successes
        return float(np.mean([r.k_err for r in ok])) if ok else float("nan")

    @property
    def runtime_ms_mean(self) -> float:
        ok = self.successes
        return float(np.mean([r.runtime_ms for r in ok])) if ok else float("nan")

    def to_row(self) -> Dict[str, Any]:
        """요약 CSV 한 행 (setup, method, d_h_mean, k_err_mean, ...)."""
        return {
            "setup": self.setup,
            "method": self.method,
            "d_h_mean": self.d_h_mean,
            "k_err_mean": self.k_err_mean,
            "reps": len(self.records),
            "failures": self.failures,
            "runtime_ms_mean": self.runtime_ms_mean,
        }

    def to_dict(self) -> Dict[str, Any]:
        payload = self.to_row()
        payload["reference"] = self.reference
        return payload

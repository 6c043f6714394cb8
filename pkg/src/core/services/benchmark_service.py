"""몬테카를로 벤치마크 서비스 (시뮬레이션 -> 탐지 -> 평가 -> 집계)."""

import logging
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional

from core.domain.models.errors import UnknownPreset
from core.domain.models.evaluation import BenchmarkSummary, EvalRecord
from core.domain.models.simulation import FrontierFamily, ScoreKind, Scenario, SimConfig
from core.ports.detector_port import DetectorPort, Replicate
from core.services.simulation_service import SimulationService, replicate_seed

logger = logging.getLogger(__name__)

_TABLE_DIMENSION = {"t2": 1, "t3": 2, "t4": 1}
_TOKEN = re.compile(r"[,\s]+")


@dataclass(frozen=True)
class BenchmarkPreset:
    """표 이름과 행 표기('K2,R1,Constant,d1')로 정한 실험 설정."""
    table: str
    setup: str
    sim_config: SimConfig
    default_method: str

    @classmethod
    def parse(cls, table: str, row: str, n: int = 1000) -> "BenchmarkPreset":
        """행 표기를 해석합니다.

        t2/t3는 전역 변화 (기본 d = 1/2, 기본 방법 fcp), t4는 국소 변화 시나리오 (기본 방법 ms-fcp).

        Raises:
            UnknownPreset: 알 수 없는 표 이름
            ValueError: 해석할 수 없는 토큰
        """
        table = table.strip().lower()
        if table not in _TABLE_DIMENSION:
            raise UnknownPreset(f"알 수 없는 표 이름입니다: {table} (t2, t3, t4 중 하나)")
        k: Optional[int] = None
        kind: Optional[ScoreKind] = None
        d = _TABLE_DIMENSION[table]
        family: Optional[FrontierFamily] = None
        local = table == "t4"

        for token in filter(None, _TOKEN.split(row.strip())):
            upper = token.upper()
            if re.fullmatch(r"K\d+", upper):
                k = int(upper[1:])
            elif re.fullmatch(r"R[1-4]", upper):
                kind = ScoreKind(upper.lower())
            elif re.fullmatch(r"D\d+", upper):
                d = int(upper[1:])
            elif upper in ("LOCAL", "MS-FCP"):
                local = True
            else:
                family = FrontierFamily.parse(token)

        if local or family is FrontierFamily.PIECEWISE_LINEAR:
            config = SimConfig.local_preset(d, n=n)
            setup = f"local,d{d}"
            return cls(table=table, setup=setup, sim_config=config, default_method="ms-fcp")

        if k is None or kind is None or family is None:
            raise ValueError(f"행 표기에 K, R, 프런티어 모형이 모두 필요합니다: {row!r}")
        config = SimConfig.preset(family, d, k, kind, n=n, scenario=Scenario.GLOBAL)
        setup = f"K{k},{kind.value.upper()},{family.value},d{d}"
        return cls(table=table, setup=setup, sim_config=config, default_method="fcp")

    def reference(self, references: Dict[str, Any], method: str) -> Optional[Dict[str, float]]:
        """참조 결과 표에서 이 행의 (d_h, k_err) 평균을 찾습니다."""
        section = references.get(self.table, {}).get(method, {})
        cfg = self.sim_config
        if self.table == "t4":
            value = section.get(f"d{cfg.d}")
        else:
            value = section.get(f"K{cfg.k}{cfg.scores.kind.value.upper()}", {}).get(cfg.frontier.family.value)
        if not value:
            return None
        return {"d_h": float(value[0]), "k_err": float(value[1])}


def _run_replicate(sim_config: SimConfig, detector: DetectorPort, rep: int, master_seed: int) -> EvalRecord:
    """반복 1회: 파생 시드로 생성 -> 탐지 -> 평가. 실패는 기록으로 남깁니다."""
    seed = replicate_seed(master_seed, rep)
    config = sim_config.model_copy(update={"seed": seed})
    series, truth = SimulationService().generate(config)
    replicate = Replicate(rep=rep, seed=seed, truth=list(truth.changepoints))
    start = time.perf_counter()
    try:
        estimate = detector.detect(series, replicate)
    except Exception as e:
        elapsed = (time.perf_counter() - start) * 1000.0
        logger.warning(f"반복 {rep} 탐지 실패: {type(e).__name__}: {e}")
        return EvalRecord(rep=rep, runtime_ms=elapsed, error=f"{type(e).__name__}: {e}")
    elapsed = (time.perf_counter() - start) * 1000.0
    return EvalRecord.score(rep, truth.changepoints, estimate, config.n, elapsed)


class BenchmarkService:
    """반복별 시드를 (master_seed, rep)에서 파생하므로 결과는 jobs 수와 무관합니다."""

    def __init__(self, jobs: int = 1):
        if jobs < 1:
            raise ValueError(f"jobs는 1 이상이어야 합니다: {jobs}")
        self.jobs = jobs

    def run(
        self,
        sim_config: SimConfig,
        detector: DetectorPort,
        reps: int,
        master_seed: int,
        setup: str = "",
        reference: Optional[Dict[str, float]] = None,
    ) -> BenchmarkSummary:
        """reps회 반복 실행 후 평균 하우스도르프 거리와 |K - K̂|를 집계합니다."""
        if reps < 1:
            raise ValueError(f"reps는 1 이상이어야 합니다: {reps}")
        logger.info(
            f"벤치마크 시작: setup={setup or '-'}, method={detector.name}, reps={reps}, "
            f"jobs={self.jobs}, seed={master_seed}"
        )
        if self.jobs == 1:
            records = [_run_replicate(sim_config, detector, rep, master_seed) for rep in range(reps)]
        else:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                futures = [
                    pool.submit(_run_replicate, sim_config, detector, rep, master_seed) for rep in range(reps)
                ]
                records = [f.result() for f in futures]
        records.sort(key=lambda r: r.rep)
        for record in records:
            logger.debug(f"반복 {record.rep}: d_H={record.d_h}, |K-K̂|={record.k_err}, {record.runtime_ms:.1f}ms")

        summary = BenchmarkSummary(setup=setup, method=detector.name, records=records, reference=reference)
        logger.info(
            f"벤치마크 완료: 평균 d_H={summary.d_h_mean:.3f}, 평균 |K-K̂|={summary.k_err_mean:.3f}, "
            f"실패 {summary.failures}회"
        )
        if reference:
            logger.info(f"참조 결과: d_H={reference['d_h']:.2f}, |K-K̂|={reference['k_err']:.2f}")
        return summary

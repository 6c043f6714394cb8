"""합성 데이터 생성 서비스."""

import logging
from typing import Tuple

import numpy as np

from core.domain.models.observation import Series
from core.domain.models.simulation import SimConfig, SimTruth, frontier_value

logger = logging.getLogger(__name__)


def replicate_seed(master_seed: int, rep: int) -> int:
    """(master_seed, rep)에서 파생한 반복별 시드 (공유 난수 상태 없음)."""
    return int(np.random.SeedSequence([master_seed, rep]).generate_state(1, dtype=np.uint32)[0])


class SimulationService:
    """Y_t = f_(k(t))(X_t)·R_t 모형에서 시계열과 정답을 생성합니다."""

    def generate(self, config: SimConfig) -> Tuple[Series, SimTruth]:
        """같은 설정(시드 포함)이면 항상 같은 시계열을 만듭니다."""
        rng = np.random.default_rng(config.seed)
        n, d = config.n, config.d
        inputs = rng.uniform(config.input_low, config.input_high, size=(n, d))
        scores = config.scores.sample(rng, n)
        segments = config.segment_ids()

        frontier = np.empty(n, dtype=float)
        for k in range(1, config.k + 2):
            mask = segments == k
            if mask.any():
                frontier[mask] = frontier_value(
                    config.frontier, inputs[mask], k, config.change_multiplier, config.scenario
                )
        outputs = frontier * scores

        truth = SimTruth(
            changepoints=config.changepoints,
            segments=segments,
            scores=scores,
            frontier=frontier,
            seed=config.seed,
        )
        logger.debug(
            f"시뮬레이션 생성: model={config.frontier.family.value}, scenario={config.scenario.value}, "
            f"n={n}, d={d}, K={config.k}, scores={config.scores.kind.value}, seed={config.seed}"
        )
        return Series(inputs, outputs), truth

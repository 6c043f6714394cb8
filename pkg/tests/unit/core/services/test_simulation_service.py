"""SimulationService 단위 테스트."""

import numpy as np
import pytest

from core.domain.models.simulation import FrontierFamily, ScoreKind, SimConfig
from core.services.simulation_service import SimulationService, replicate_seed


@pytest.fixture
def service():
    return SimulationService()


def test_same_seed_same_series(service):
    config = SimConfig.preset(FrontierFamily.ADDITIVE, 2, 2, ScoreKind.R2, n=300, seed=11)

    first, _ = service.generate(config)
    second, _ = service.generate(config)

    assert np.array_equal(first.inputs, second.inputs)
    assert np.array_equal(first.outputs, second.outputs)


def test_different_seed_differs(service):
    base = SimConfig.preset(FrontierFamily.CONSTANT, 1, 2, ScoreKind.R1, n=100, seed=1)

    first, _ = service.generate(base)
    second, _ = service.generate(base.model_copy(update={"seed": 2}))

    assert not np.array_equal(first.outputs, second.outputs)


def test_truth_and_envelopment(service):
    """Y_t = f(X_t)·R_t <= f(X_t), 정답 변화점은 ⌊k·n/(K+1)⌋."""
    config = SimConfig.preset(FrontierFamily.COBB_DOUGLAS, 1, 3, ScoreKind.R1, n=400, seed=5)

    series, truth = service.generate(config)

    assert truth.changepoints == [100, 200, 300]
    assert np.all(series.outputs <= truth.frontier + 1e-12)
    assert np.allclose(series.outputs, truth.frontier * truth.scores)
    assert np.all((series.inputs >= 1.0) & (series.inputs <= 2.0))


def test_frontier_jumps_by_multiplier_for_constant(service):
    config = SimConfig.preset(FrontierFamily.CONSTANT, 1, 2, ScoreKind.R1, n=30, seed=0)

    _, truth = service.generate(config)

    assert set(truth.frontier[truth.segments == 1].tolist()) == {1.0}
    assert set(truth.frontier[truth.segments == 3].tolist()) == {1.75 ** 2}


def test_local_preset_shapes(service):
    series, truth = service.generate(SimConfig.local_preset(2, n=120, seed=3))

    assert series.d == 2
    assert truth.changepoints == [40, 80]
    assert np.all(truth.frontier[:40] == 1.0)


def test_replicate_seed_is_stable_and_distinct():
    assert replicate_seed(42, 0) == replicate_seed(42, 0)
    seeds = {replicate_seed(42, rep) for rep in range(50)}
    assert len(seeds) == 50
    assert replicate_seed(42, 0) != replicate_seed(43, 0)


def test_truth_to_dict_contract(service):
    _, truth = service.generate(SimConfig.preset(FrontierFamily.LOGISTIC, 1, 1, ScoreKind.R4, n=20, seed=9))

    payload = truth.to_dict()

    assert payload["k"] == 1
    assert payload["n"] == 20
    assert payload["changepoints"] == [10]
    assert len(payload["scores"]) == 20

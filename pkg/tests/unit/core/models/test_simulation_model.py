"""합성 데이터 생성 모형 단위 테스트."""

import numpy as np
import pytest
from pydantic import ValidationError

from core.domain.models.errors import UnknownPreset
from core.domain.models.simulation import (
    FrontierFamily,
    FrontierSpec,
    Scenario,
    ScoreDistSpec,
    ScoreKind,
    SimConfig,
    frontier_value,
)


def test_constant_frontier_is_one():
    spec = FrontierSpec.table_default(FrontierFamily.CONSTANT, 1)

    assert frontier_value(spec, [1.7], 1).tolist() == [1.0]


def test_cobb_douglas_at_unit_input():
    spec = FrontierSpec.table_default(FrontierFamily.COBB_DOUGLAS, 2)

    assert frontier_value(spec, [[1.0, 1.0]], 1).tolist() == pytest.approx([1.0])


def test_piecewise_linear_branches():
    """x >= ω 이면 B + α·x = -0.875 + 1.5·1.5 = 1.375, 아래는 A."""
    spec = FrontierSpec.table_default(FrontierFamily.PIECEWISE_LINEAR, 1)

    assert spec.value(np.array([[1.5]])).tolist() == pytest.approx([1.375])
    assert spec.value(np.array([[1.1]])).tolist() == [1.0]


def test_logistic_and_additive_values():
    logistic = FrontierSpec.table_default(FrontierFamily.LOGISTIC, 1)
    additive = FrontierSpec.table_default(FrontierFamily.ADDITIVE, 1)

    assert logistic.value(np.array([[0.5]])).tolist() == pytest.approx([0.5])
    assert additive.value(np.array([[1.0]])).tolist() == pytest.approx([6.0])


def test_global_segments_scale_by_multiplier():
    spec = FrontierSpec.table_default(FrontierFamily.ADDITIVE, 1)
    x = [[1.2]]

    base = frontier_value(spec, x, 1)[0]

    assert frontier_value(spec, x, 2)[0] == pytest.approx(1.75 * base)
    assert frontier_value(spec, x, 3)[0] == pytest.approx(1.75 ** 2 * base)


def test_local_scenario_segments():
    """첫 구간은 상수 1, 둘째는 구간선형, 셋째는 1.75배."""
    spec = FrontierSpec.table_default(FrontierFamily.PIECEWISE_LINEAR, 1)
    x = [[1.1], [1.5]]

    assert frontier_value(spec, x, 1, scenario=Scenario.LOCAL).tolist() == [1.0, 1.0]
    assert frontier_value(spec, x, 2, scenario=Scenario.LOCAL).tolist() == pytest.approx([1.0, 1.375])
    assert frontier_value(spec, x, 3, scenario=Scenario.LOCAL).tolist() == pytest.approx([1.75, 1.75 * 1.375])


def test_changepoints_use_floor():
    """n=1000, K=2 -> 333, 666."""
    config = SimConfig.preset(FrontierFamily.CONSTANT, 1, 2, ScoreKind.R1)

    assert config.changepoints == [333, 666]
    segments = config.segment_ids()
    assert segments[332] == 1 and segments[333] == 2
    assert segments[665] == 2 and segments[666] == 3


def test_family_parse_accepts_spellings():
    assert FrontierFamily.parse("Cobb-Douglas") is FrontierFamily.COBB_DOUGLAS
    assert FrontierFamily.parse("cobb_douglas") is FrontierFamily.COBB_DOUGLAS
    with pytest.raises(ValueError):
        FrontierFamily.parse("quadratic")


def test_scores_stay_in_unit_interval():
    rng = np.random.default_rng(1)
    for kind in ScoreKind:
        r = ScoreDistSpec(kind=kind).sample(rng, 2000)
        assert np.all((r >= 0.0) & (r <= 1.0))


def test_uniform_scores_mean():
    r = ScoreDistSpec(kind=ScoreKind.R1).sample(np.random.default_rng(7), 20000)

    assert r.mean() == pytest.approx(0.5, abs=0.02)


def test_truncated_normal_drift_direction():
    """R2는 평균이 시간에 따라 오르고 R3는 내려감."""
    rng = np.random.default_rng(12)
    r2 = ScoreDistSpec(kind=ScoreKind.R2).sample(rng, 4000)
    r3 = ScoreDistSpec(kind=ScoreKind.R3).sample(rng, 4000)

    assert r2[:1000].mean() < r2[-1000:].mean()
    assert r3[:1000].mean() > r3[-1000:].mean()


def test_mixture_scores_second_half_more_efficient():
    r = ScoreDistSpec(kind=ScoreKind.R4).sample(np.random.default_rng(3), 4000)

    assert r[:2000].mean() == pytest.approx(0.5, abs=0.03)
    assert r[2000:].mean() == pytest.approx(0.7, abs=0.03)


def test_config_validation():
    spec = FrontierSpec.table_default(FrontierFamily.ADDITIVE, 2)
    with pytest.raises(ValidationError):
        SimConfig(d=1, frontier=spec)
    with pytest.raises(ValidationError):
        SimConfig(d=1, scenario=Scenario.LOCAL, frontier=FrontierSpec.table_default(FrontierFamily.CONSTANT, 1))
    with pytest.raises(ValidationError):
        FrontierSpec(family=FrontierFamily.ADDITIVE, d=2, alpha=(1.0,))
    with pytest.raises(UnknownPreset):
        FrontierSpec.table_default(FrontierFamily.CONSTANT, 5)

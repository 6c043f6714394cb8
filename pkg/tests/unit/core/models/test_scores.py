"""트리밍 효율성 점수 단위 테스트."""

import numpy as np
import pytest

from core.domain.models.errors import DimensionMismatch, IndexOutOfRange
from core.domain.models.frontier import FrontierEstimate
from core.domain.models.observation import Series, TrimBox
from core.domain.models.scores import ScoreSeries, compute_scores


@pytest.fixture
def series():
    """x = 1, 2, 3, y = 0.3, 0.6, 0.6."""
    return Series(np.array([[1.0], [2.0], [3.0]]), np.array([0.3, 0.6, 0.6]))


def test_efficient_unit_scores_one(series):
    """산출이 프런티어 위에 있으면 R̂ = 1."""
    frontier = FrontierEstimate.fit(series)

    scores = compute_scores(series, frontier, TrimBox.zeros(1))

    assert scores.r_hat.tolist() == [1.0, 1.0, 1.0]
    assert scores.active.all()


def test_trimmed_unit_scores_zero(series):
    """X_t <= x0 이면 Y와 무관하게 0."""
    frontier = FrontierEstimate.fit(series)

    scores = compute_scores(series, frontier, TrimBox((1.0,)))

    assert scores.r_hat[0] == 0.0
    assert scores.active.tolist() == [False, True, True]
    assert scores.n_active() == 2


def test_ratio_to_external_frontier():
    """Y = 0.3, f̂(X) = 0.6 -> 0.5."""
    frontier = FrontierEstimate.fit_arrays(np.array([[1.0]]), np.array([0.6]))
    series = Series(np.array([[1.5], [2.0]]), np.array([0.3, 0.6]))

    scores = ScoreSeries.compute(series, frontier, TrimBox.zeros(1))

    assert scores.r_hat.tolist() == [0.5, 1.0]


def test_zero_frontier_value_gives_zero_score():
    """지배하는 저장점이 없으면 f̂ = 0 이므로 점수 0으로 기록."""
    frontier = FrontierEstimate.fit_arrays(np.array([[2.0]]), np.array([1.0]))
    series = Series(np.array([[1.0], [3.0]]), np.array([0.5, 0.5]))

    scores = ScoreSeries.compute(series, frontier, TrimBox.zeros(1))

    assert scores.r_hat.tolist() == [0.0, 0.5]
    assert scores.zero_frontier_count == 1


def test_scores_within_unit_interval_on_own_frontier():
    """자기 표본으로 적합한 프런티어에서는 0 <= R̂ <= 1."""
    rng = np.random.default_rng(8)
    series = Series(rng.uniform(1, 2, size=(100, 2)), rng.uniform(size=100))
    frontier = FrontierEstimate.fit(series)

    scores = ScoreSeries.compute(series, frontier, TrimBox.from_quantile(series, 0.1))

    assert np.all(scores.r_hat >= 0.0)
    assert np.all(scores.r_hat <= 1.0)


def test_scores_are_scale_invariant_in_outputs():
    """Y를 c배 해도 점수는 변하지 않음."""
    rng = np.random.default_rng(13)
    inputs = rng.uniform(1, 2, size=(60, 1))
    outputs = rng.uniform(size=60)
    base = Series(inputs, outputs)
    scaled = Series(inputs, outputs * 3.5)
    x0 = TrimBox((1.1,))

    r_base = ScoreSeries.compute(base, FrontierEstimate.fit(base), x0).r_hat
    r_scaled = ScoreSeries.compute(scaled, FrontierEstimate.fit(scaled), x0).r_hat

    assert r_scaled.tolist() == pytest.approx(r_base.tolist())


def test_compute_segmented_uses_segment_frontiers():
    """구간마다 자기 프런티어로 나눔."""
    series = Series(np.ones((4, 1)), np.array([0.5, 1.0, 2.0, 4.0]))
    left = FrontierEstimate.fit(series.window(1, 2))
    right = FrontierEstimate.fit(series.window(3, 4))

    scores = ScoreSeries.compute_segmented(series, [left, right], [2, 4], TrimBox.zeros(1))

    assert scores.r_hat.tolist() == [0.5, 1.0, 0.5, 1.0]
    with pytest.raises(IndexOutOfRange):
        ScoreSeries.compute_segmented(series, [left, right], [2, 3], TrimBox.zeros(1))


def test_dimension_mismatch_is_rejected(series):
    frontier = FrontierEstimate.fit(series)

    with pytest.raises(DimensionMismatch):
        ScoreSeries.compute(series, frontier, TrimBox((0.0, 0.0)))


def test_to_rows_layout(series):
    scores = ScoreSeries.compute(series, FrontierEstimate.fit(series), TrimBox((1.0,)))

    assert scores.to_rows()[0] == [1, 0.0, False]

"""준우도비 스캔 통계량과 DetectionResult 단위 테스트."""

import math

import numpy as np
import pytest

from core.domain.models.detection import (
    DEGENERATE_EXPONENT,
    DetectionResult,
    quasi_lr_scan,
    quasi_lr_scan_cell,
    scan_window,
)
from core.domain.models.errors import IndexOutOfRange
from core.domain.models.grid import GridCell
from core.domain.models.observation import Series, TrimBox
from core.domain.models.scores import ScoreSeries


def _scores(r_hat, active=None):
    r = np.asarray(r_hat, dtype=float)
    a = np.ones(r.shape[0], dtype=bool) if active is None else np.asarray(active, dtype=bool)
    return ScoreSeries(r_hat=r, active=a, x0=TrimBox.zeros(1))


def _naive(r_hat, active, t1, tau):
    seg = [r for r, a in zip(r_hat[t1 - 1:tau], active[t1 - 1:tau]) if a]
    if not seg:
        return 0.0
    m = max(seg)
    if m <= 0:
        return 2.0 * len(seg) * DEGENERATE_EXPONENT
    return -2.0 * len(seg) * math.log(m)


def test_all_scores_one_gives_zero():
    stats = quasi_lr_scan(_scores([1.0, 1.0, 1.0]), 1, 3)

    assert [s.value for s in stats] == [0.0, 0.0, 0.0]


def test_no_active_points_gives_zero():
    """N = 0 이면 0·∞ = 0 규약."""
    stats = quasi_lr_scan(_scores([0.3, 0.4], active=[False, False]), 1, 2)

    assert [s.value for s in stats] == [0.0, 0.0]
    assert all(s.n_active == 0 for s in stats)


def test_two_active_scores_value():
    """점수 {0.5, 0.25}: N=2, M̂=0.5 -> -4·ln(0.5) = 4·ln 2."""
    stats = quasi_lr_scan(_scores([0.5, 0.25]), 1, 2)

    assert stats[-1].n_active == 2
    assert stats[-1].max_score == 0.5
    assert stats[-1].value == pytest.approx(4 * math.log(2))
    assert stats[0].value == pytest.approx(2 * math.log(2))


def test_all_zero_active_scores_are_degenerate():
    """N > 0 이고 M̂ = 0 이면 유한한 큰 값과 degenerate 표시."""
    stats = quasi_lr_scan(_scores([0.0, 0.0, 0.4]), 1, 3)

    assert stats[1].degenerate is True
    assert stats[1].value == 2.0 * 2 * DEGENERATE_EXPONENT
    assert math.isfinite(stats[1].value)
    assert stats[2].degenerate is False


def test_scan_matches_naive_definition():
    rng = np.random.default_rng(17)
    r_hat = rng.uniform(size=40)
    active = rng.uniform(size=40) > 0.3

    for t1 in (1, 7, 20):
        scan = scan_window(r_hat, active, t1, 40)
        expected = [_naive(r_hat, active, t1, tau) for tau in range(t1, 41)]
        assert scan.values.tolist() == pytest.approx(expected)


def test_best_tau_prefers_smallest_on_ties():
    scan = scan_window(np.array([0.5, 1.0, 0.5, 1.0]), np.array([True, True, False, False]), 1, 4)

    # τ=1: 2 ln 2, τ>=2: M̂ = 1 -> 0
    assert scan.best_tau == 1
    assert scan.best_value == pytest.approx(2 * math.log(2))


def test_scan_rejects_bad_window():
    with pytest.raises(IndexOutOfRange):
        quasi_lr_scan(_scores([0.5, 0.5]), 2, 3)
    with pytest.raises(IndexOutOfRange):
        quasi_lr_scan(_scores([0.5, 0.5]), 2, 1)


def test_cell_scan_with_whole_box_equals_plain_scan():
    """셀이 전체 상자이고 트리밍이 없으면 일반 스캔과 같음."""
    rng = np.random.default_rng(2)
    series = Series(rng.uniform(0.5, 2, size=(30, 1)), rng.uniform(size=30))
    scores = ScoreSeries(r_hat=rng.uniform(size=30), active=np.ones(30, dtype=bool), x0=TrimBox.zeros(1))
    x_bar = (float(series.inputs.max()),)
    cell = GridCell(lo=(0.0,), hi=(1.0,), scale_k=0, x_bar=x_bar)

    by_cell = quasi_lr_scan_cell(series, scores, cell, 1, 30)
    plain = quasi_lr_scan(scores, 1, 30)

    assert [s.value for s in by_cell] == [s.value for s in plain]


def test_cell_scan_counts_only_points_inside_cell():
    """셀 안의 두 점 {0.5, 0.25} -> 마지막 τ에서 4·ln 2, 빈 셀은 모두 0."""
    series = Series(np.array([[1.0], [4.0], [1.5], [3.5]]), np.ones(4))
    scores = _scores([0.5, 0.1, 0.25, 0.1])
    inside = GridCell(lo=(0.0,), hi=(0.5,), scale_k=1, x_bar=(4.0,))
    empty = GridCell(lo=(0.5,), hi=(0.75,), scale_k=2, x_bar=(4.0,))

    stats = quasi_lr_scan_cell(series, scores, inside, 1, 4)
    empty_stats = quasi_lr_scan_cell(series, scores, empty, 1, 4)

    assert stats[-1].n_active == 2
    assert stats[-1].value == pytest.approx(4 * math.log(2))
    assert all(s.value == 0.0 for s in empty_stats)


def test_detection_result_validates_changepoints():
    with pytest.raises(ValueError):
        DetectionResult(n=10, threshold=1.0, x0=[0.0], changepoints=[5, 3], stats=[1.0, 1.0])
    with pytest.raises(ValueError):
        DetectionResult(n=10, threshold=1.0, x0=[0.0], changepoints=[10], stats=[1.0])
    with pytest.raises(ValueError):
        DetectionResult(n=10, threshold=1.0, x0=[0.0], changepoints=[3], stats=[])


def test_detection_result_dict_contract():
    result = DetectionResult(
        n=100, threshold=21.2, x0=[1.1], changepoints=[30, 60], stats=[40.0, 50.0],
        restarts=[25, 55], refit_windows=[(1, 55), (42, 100)], pilots=[31, 60],
    )

    payload = result.to_dict()
    restored = DetectionResult.from_dict(payload)

    assert payload["k_hat"] == 2
    assert payload["lambda"] == 21.2
    assert payload["refit_windows"] == [[1, 55], [42, 100]]
    assert "cells" not in payload
    assert restored.changepoints == [30, 60]
    assert restored.refit_windows == [(1, 55), (42, 100)]

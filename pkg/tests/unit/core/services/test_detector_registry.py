"""탐지기 레지스트리 단위 테스트."""

import numpy as np
import pytest

from core.domain.models.config import DetectorConfig, LocalSearchConfig
from core.domain.models.errors import UnknownPreset
from core.domain.models.observation import Series
from core.ports.detector_port import Replicate
from core.services.detector_registry import (
    EmptyDetector,
    FcpDetector,
    MsFcpDetector,
    OracleDetector,
    RobustFcpDetector,
    build_detector,
)


@pytest.fixture
def replicate():
    return Replicate(rep=0, seed=1, truth=[10, 20])


@pytest.fixture
def step_series():
    """투입은 1..2 등간격, 산출은 1 -> 2 -> 4 (구간 길이 10)."""
    outputs = np.repeat([1.0, 2.0, 4.0], 10)
    return Series(np.linspace(1.0, 2.0, 30).reshape(-1, 1), outputs)


@pytest.mark.parametrize(
    "method, cls",
    [
        ("fcp", FcpDetector),
        ("FCP-Robust", RobustFcpDetector),
        ("ms-fcp", MsFcpDetector),
        ("oracle", OracleDetector),
        ("empty", EmptyDetector),
    ],
)
def test_build_detector_by_name(method, cls):
    detector = build_detector(method, DetectorConfig(), LocalSearchConfig())

    assert isinstance(detector, cls)
    assert detector.name == method.lower()


def test_unknown_method_raises():
    with pytest.raises(UnknownPreset):
        build_detector("wbs")


def test_reference_detectors(step_series, replicate):
    assert OracleDetector().detect(step_series, replicate) == [10, 20]
    assert EmptyDetector().detect(step_series, replicate) == []


def test_fcp_detectors_return_sorted_lists(step_series, replicate):
    config = DetectorConfig(**{"lambda": 5.0}, alpha_trim=0.0)

    for detector in (FcpDetector(config), RobustFcpDetector(config), MsFcpDetector(config)):
        points = detector.detect(step_series, replicate)
        assert points == sorted(points)
        assert all(1 <= p <= 29 for p in points)

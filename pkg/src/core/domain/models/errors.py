"""도메인 예외 계층."""


class FrontierCpdError(Exception):
    """프런티어 변화점 탐지 라이브러리의 최상위 예외."""


class SeriesValidationError(FrontierCpdError, ValueError):
    """입력 시계열 검증 실패."""


class EmptyInput(SeriesValidationError):
    """관측치가 비어 있음."""


class DimensionMismatch(SeriesValidationError):
    """입력 차원이 서로 다름."""


class NegativeValue(SeriesValidationError):
    """음수 투입/산출 값."""


class NonFiniteValue(SeriesValidationError):
    """NaN 또는 무한대 값."""


class IndexOutOfRange(FrontierCpdError, ValueError):
    """시간 인덱스가 1..n 범위를 벗어남."""


class InferenceError(FrontierCpdError, ValueError):
    """신뢰구간 추정 불가."""


class SegmentTooShort(InferenceError):
    """변화점 양쪽 구간의 길이가 부족함."""


class NoActiveEvaluationPoints(InferenceError):
    """트리밍 이후 비율을 평가할 관측치가 없음."""


class InsufficientData(InferenceError):
    """히스토그램 추정에 필요한 표본 수 부족."""


class DetectorFailure(FrontierCpdError, RuntimeError):
    """벤치마크 반복에서 탐지기가 실패함."""


class UnknownPreset(FrontierCpdError, KeyError):
    """알 수 없는 표, 탐지 방법 또는 기본 모수 이름."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""

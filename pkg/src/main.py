"""프런티어 변화점 탐지 명령행 진입점."""

import argparse
import json
import logging
import os
import sys
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import dotenv_values, load_dotenv

from core.domain.models.config import DetectorConfig, InferenceConfig, InferenceMode, LocalSearchConfig
from core.domain.models.detection import DetectionResult
from core.domain.models.errors import UnknownPreset
from core.domain.models.frontier import FrontierEstimate, fit_frontier
from core.domain.models.observation import TrimBox
from core.domain.models.scores import ScoreSeries
from core.domain.models.simulation import FrontierFamily, ScoreKind, SimConfig
from core.services.benchmark_service import BenchmarkPreset, BenchmarkService
from core.services.detector_registry import build_detector
from core.services.global_detection_service import GlobalDetectionService
from core.services.inference_service import InferenceService
from core.services.local_detection_service import LocalDetectionService
from core.services.simulation_service import SimulationService
from infra.adapters.csv_export_adapter import CsvExportAdapter
from infra.adapters.csv_series_adapter import CsvSeriesAdapter
from infra.adapters.external_detector_adapter import ExternalDetectorAdapter
from infra.adapters.json_result_adapter import JsonResultAdapter

logger = logging.getLogger(__name__)

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"
LOG_LEVEL_ENV = "FRONTIER_CPD_LOG_LEVEL"

BUILTIN_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "detector": {
        "lambda": "auto",
        "alpha_trim": 0.1,
        "refit": True,
        "robust_c": 1.0,
        "min_seg": 2,
        "frontier_quantile": 1.0,
    },
    "local": {"an_side": 4.0},
    "inference": {"level": 0.9, "mode": "iid", "theta_confidence": 0.99},
}

# key=value 설정 파일의 키 -> 섹션
_KEY_SECTIONS = {key: section for section, values in BUILTIN_DEFAULTS.items() for key in values}

# 명령행 플래그 -> (섹션, 키)
_FLAG_KEYS = {
    "lambda_": ("detector", "lambda"),
    "alpha": ("detector", "alpha_trim"),
    "refit": ("detector", "refit"),
    "robust_c": ("detector", "robust_c"),
    "min_seg": ("detector", "min_seg"),
    "frontier_quantile": ("detector", "frontier_quantile"),
    "an_side": ("local", "an_side"),
    "level": ("inference", "level"),
    "mode": ("inference", "mode"),
    "theta_confidence": ("inference", "theta_confidence"),
}


class UsageError(ValueError):
    """명령행 인자 오류."""


class CliArgumentParser(argparse.ArgumentParser):
    """사용법 오류를 종료 대신 예외로 올려 종료 코드 2로 매핑합니다."""

    def error(self, message):
        raise UsageError(message)


# ----------------------------------------------------------------------
# 설정
# ----------------------------------------------------------------------
def load_settings(config_file: Optional[str] = None, defaults_path: Optional[Path] = None) -> Dict[str, Dict[str, Any]]:
    """내장 기본값 < config/defaults.toml < --config key=value 파일 순으로 병합합니다."""
    settings = {section: dict(values) for section, values in BUILTIN_DEFAULTS.items()}

    defaults_path = defaults_path or CONFIG_DIR / "defaults.toml"
    if defaults_path.exists():
        try:
            with open(defaults_path, "rb") as f:
                data = tomllib.load(f)
            for section, values in data.items():
                if section in settings and isinstance(values, dict):
                    settings[section].update(values)
        except Exception as e:
            logger.error(f"설정 파일 읽기 실패: {e}")

    if config_file:
        if not Path(config_file).exists():
            raise FileNotFoundError(f"설정 파일을 찾을 수 없습니다: {config_file}")
        for raw_key, value in dotenv_values(config_file).items():
            key = raw_key.strip().lower()
            if key not in _KEY_SECTIONS:
                raise ValueError(f"알 수 없는 설정 키입니다: {raw_key}")
            settings[_KEY_SECTIONS[key]][key] = value
    return settings


def apply_flags(settings: Dict[str, Dict[str, Any]], args: argparse.Namespace) -> Dict[str, Dict[str, Any]]:
    for attr, (section, key) in _FLAG_KEYS.items():
        value = getattr(args, attr, None)
        if value is not None:
            settings[section][key] = value
    return settings


def detector_config(settings: Dict[str, Dict[str, Any]]) -> DetectorConfig:
    values = dict(settings["detector"])
    raw_lambda = values.pop("lambda", "auto")
    if raw_lambda is None or str(raw_lambda).strip().lower() == "auto":
        values["lambda"] = None
    else:
        values["lambda"] = float(raw_lambda)
    return DetectorConfig(**values)


def local_config(settings: Dict[str, Dict[str, Any]]) -> LocalSearchConfig:
    return LocalSearchConfig(**settings["local"])


def inference_config(settings: Dict[str, Dict[str, Any]]) -> InferenceConfig:
    return InferenceConfig(**settings["inference"])


def load_references(path: Optional[Path] = None) -> Dict[str, Any]:
    path = path or CONFIG_DIR / "reference_results.toml"
    if not path.exists():
        return {}
    try:
        with open(path, "rb") as f:
            return tomllib.load(f)
    except Exception as e:
        logger.error(f"참조 결과 파일 읽기 실패: {e}")
        return {}


# ----------------------------------------------------------------------
# 인자 파서
# ----------------------------------------------------------------------
def _add_detector_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--lambda", dest="lambda_", type=str, default=None, help="임계값 λ 또는 auto (= log²n)")
    parser.add_argument("--alpha", type=float, default=None, help="트리밍 분위수 수준 (기본값: 0.1)")
    parser.add_argument("--robust-c", type=float, default=None, help="강건 변형의 후퇴 상수 C (기본값: 1.0)")
    parser.add_argument("--min-seg", type=int, default=None, help="프런티어 적합 최소 구간 길이 (기본값: 2)")
    parser.add_argument("--no-refit", dest="refit", action="store_const", const=False, default=None,
                        help="국소 재적합 없이 예비 변화점을 그대로 보고")
    parser.add_argument("--frontier-quantile", type=float, default=None,
                        help="1 미만이면 분위수 FDH 프런티어 사용 (기본값: 1.0)")


def build_parser() -> CliArgumentParser:
    common = CliArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="key=value 형식 설정 파일")
    common.add_argument("--log-level", type=str, default=None, help=f"로그 수준 (기본값: ${LOG_LEVEL_ENV} 또는 INFO)")

    parser = CliArgumentParser(prog="frontier-cpd", description="FDH 생산 프런티어 변화점 탐지기")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", parents=[common], help="전역 변화점 탐지")
    p.add_argument("--input", required=True, help="t,x1..xd,y CSV 경로")
    p.add_argument("--output", required=True, help="결과 JSON 경로")
    p.add_argument("--robust", action="store_true", help="강건 변형 사용")
    p.add_argument("--scores-out", default=None, help="t,r_hat,active 점수 CSV 경로")
    _add_detector_flags(p)

    p = sub.add_parser("detect-local", parents=[common], help="다중 스케일 격자 국소 변화점 탐지")
    p.add_argument("--input", required=True, help="t,x1..xd,y CSV 경로")
    p.add_argument("--output", required=True, help="결과 JSON 경로")
    p.add_argument("--an-side", type=float, default=None, help="x̲·A_n^{1/d} (기본값: 4)")
    _add_detector_flags(p)

    p = sub.add_parser("ci", parents=[common], help="변화점 신뢰구간")
    p.add_argument("--input", required=True, help="t,x1..xd,y CSV 경로")
    p.add_argument("--result", required=True, help="detect 결과 JSON 경로")
    p.add_argument("--output", required=True, help="신뢰구간 JSON 경로")
    p.add_argument("--mode", choices=[m.value for m in InferenceMode], default=None, help="iid 또는 general")
    p.add_argument("--level", type=float, default=None, help="신뢰수준 (기본값: 0.9)")
    p.add_argument("--theta-confidence", type=float, default=None,
                   help="iid 모드 θ̂ 하한의 신뢰수준, 0이면 점추정치 (기본값: 0.99)")

    p = sub.add_parser("simulate", parents=[common], help="합성 데이터 생성")
    p.add_argument("--model", required=True,
                   choices=["constant", "additive", "cobb-douglas", "logistic", "local"], help="프런티어 모형")
    p.add_argument("--k", type=int, default=2, help="변화점 수 (기본값: 2)")
    p.add_argument("--n", type=int, default=1000, help="시계열 길이 (기본값: 1000)")
    p.add_argument("--d", type=int, default=1, help="투입 차원 (기본값: 1)")
    p.add_argument("--scores", choices=[k.value for k in ScoreKind], default="r1", help="점수 분포 (기본값: r1)")
    p.add_argument("--multiplier", type=float, default=1.75, help="구간별 프런티어 배수 (기본값: 1.75)")
    p.add_argument("--seed", type=int, required=True, help="난수 시드")
    p.add_argument("--output", required=True, help="CSV 경로")
    p.add_argument("--truth", default=None, help="정답 JSON 경로 (기본값: 출력 옆 truth.json)")

    p = sub.add_parser("benchmark", parents=[common], help="표 행 몬테카를로 재현")
    p.add_argument("--table", required=True, choices=["t2", "t3", "t4"], help="표 이름")
    p.add_argument("--row", required=True, help='행 표기, 예: "K2,R1,Constant,d1"')
    p.add_argument("--reps", type=int, default=100, help="반복 횟수 (기본값: 100)")
    p.add_argument("--jobs", type=int, default=1, help="병렬 프로세스 수 (기본값: 1)")
    p.add_argument("--seed", type=int, required=True, help="마스터 시드")
    p.add_argument("--n", type=int, default=1000, help="시계열 길이 (기본값: 1000)")
    p.add_argument("--method", choices=["fcp", "fcp-robust", "ms-fcp", "external"], default=None,
                   help="탐지 방법 (기본값: 표에 따라 fcp 또는 ms-fcp)")
    p.add_argument("--external", default=None, help="external 방법의 반복별 변화점 파일")
    p.add_argument("--output", required=True, help="요약 CSV 경로")
    p.add_argument("--an-side", type=float, default=None, help="x̲·A_n^{1/d} (기본값: 4)")
    _add_detector_flags(p)

    p = sub.add_parser("frontier", parents=[common], help="구간별 FDH 계단점 내보내기")
    p.add_argument("--input", required=True, help="t,x1..xd,y CSV 경로")
    p.add_argument("--result", default=None, help="구간 경계로 쓸 detect 결과 JSON (없으면 전체 한 구간)")
    p.add_argument("--output-dir", required=True, help="frontier_segment_<k>.csv 저장 디렉터리")
    return parser


# ----------------------------------------------------------------------
# 명령
# ----------------------------------------------------------------------
def run_detect(args, settings) -> None:
    series = CsvSeriesAdapter().read_series(args.input)
    config = detector_config(settings)
    service = GlobalDetectionService(config)
    result = service.detect_multi_robust(series) if args.robust else service.detect_multi(series)
    JsonResultAdapter().write_json(result.to_dict(), args.output)
    logger.info(f"결과 저장: {args.output} (K̂={result.k_hat}, λ={result.threshold:.3f})")

    if args.scores_out:
        frontier = fit_frontier(series, config.frontier_quantile)
        scores = ScoreSeries.compute(series, frontier, TrimBox(tuple(result.x0)))
        CsvExportAdapter().export_csv(scores.to_rows(), ["t", "r_hat", "active"], args.scores_out)
        logger.info(f"점수 저장: {args.scores_out}")


def run_detect_local(args, settings) -> None:
    series = CsvSeriesAdapter().read_series(args.input)
    service = LocalDetectionService(detector_config(settings), local_config(settings))
    result = service.detect_multi_local(series)
    JsonResultAdapter().write_json(result.to_dict(), args.output)
    logger.info(f"결과 저장: {args.output} (K̂={result.k_hat}, 셀 {len(result.cells or [])}개)")


def run_ci(args, settings) -> None:
    series = CsvSeriesAdapter().read_series(args.input)
    result_port = JsonResultAdapter()
    result = DetectionResult.from_dict(result_port.read_json(args.result))
    if result.n != series.n:
        raise ValueError(f"결과의 n={result.n}과 시계열 길이 {series.n}이 다릅니다")
    config = inference_config(settings)
    intervals = InferenceService(config).intervals_for(series, result, config.mode, config.level)
    result_port.write_json([ci.to_dict() for ci in intervals], args.output)
    logger.info(f"신뢰구간 {len(intervals)}개 저장: {args.output}")


def run_simulate(args, settings) -> None:
    if args.model == "local":
        if args.k != 2:
            logger.warning(f"국소 변화 모형은 변화점 2개로 고정됩니다 (--k {args.k} 무시)")
        config = SimConfig.local_preset(args.d, n=args.n, seed=args.seed)
    else:
        config = SimConfig.preset(
            FrontierFamily.parse(args.model), args.d, args.k, ScoreKind(args.scores), n=args.n, seed=args.seed
        )
    if args.multiplier != config.change_multiplier:
        config = SimConfig(**{**config.model_dump(), "change_multiplier": args.multiplier})

    series, truth = SimulationService().generate(config)
    CsvSeriesAdapter().write_series(series, args.output)
    truth_path = args.truth or str(Path(args.output).with_name("truth.json"))
    payload = truth.to_dict()
    payload["config"] = json.loads(config.model_dump_json())
    JsonResultAdapter().write_json(payload, truth_path)
    logger.info(f"시뮬레이션 저장: {args.output}, 정답: {truth_path} (변화점 {truth.changepoints})")


def run_benchmark(args, settings) -> None:
    preset = BenchmarkPreset.parse(args.table, args.row, n=args.n)
    method = args.method or preset.default_method
    if method == "external":
        if not args.external:
            raise ValueError("--method external에는 --external 파일이 필요합니다")
        detector = ExternalDetectorAdapter(args.external)
    else:
        detector = build_detector(method, detector_config(settings), local_config(settings))

    reference = preset.reference(load_references(), method)
    summary = BenchmarkService(jobs=args.jobs).run(
        preset.sim_config, detector, args.reps, args.seed, setup=preset.setup, reference=reference
    )

    out = Path(args.output)
    row = summary.to_row()
    CsvExportAdapter().export_csv([list(row.values())], list(row.keys()), str(out))
    result_port = JsonResultAdapter()
    result_port.write_jsonl([r.to_dict() for r in summary.records], str(out.with_name(out.stem + "_reps.jsonl")))
    meta = summary.to_dict()
    meta.update({
        "table": preset.table,
        "row": args.row,
        "seed": args.seed,
        "config": json.loads(preset.sim_config.model_dump_json()),
    })
    result_port.write_json(meta, str(out.with_name(out.stem + "_meta.json")))
    logger.info(f"요약 저장: {out}")


def run_frontier(args, settings) -> None:
    series = CsvSeriesAdapter().read_series(args.input)
    changepoints: List[int] = []
    if args.result:
        changepoints = DetectionResult.from_dict(JsonResultAdapter().read_json(args.result)).changepoints
    bounds = [0] + list(changepoints) + [series.n]
    columns = [f"x{j}" for j in range(1, series.d + 1)] + ["y"]
    export = CsvExportAdapter()
    out_dir = Path(args.output_dir)
    for k in range(1, len(bounds)):
        start, end = bounds[k - 1], bounds[k]
        frontier = FrontierEstimate.fit_arrays(series.inputs[start:end], series.outputs[start:end])
        path = out_dir / f"frontier_segment_{k}.csv"
        export.export_csv(frontier.to_rows(), columns, str(path))
        logger.info(f"구간 {k} [{start + 1}, {end}] 프런티어 {frontier.size}점 저장: {path}")


COMMANDS = {
    "detect": run_detect,
    "detect-local": run_detect_local,
    "ci": run_ci,
    "simulate": run_simulate,
    "benchmark": run_benchmark,
    "frontier": run_frontier,
}


def _emit_error(error: BaseException, exit_code: int) -> None:
    payload = {"error": type(error).__name__, "message": str(error), "exit_code": exit_code}
    sys.stderr.write(json.dumps(payload, ensure_ascii=False) + "\n")


def _configure_logging(level_name: Optional[str]) -> None:
    level_name = (level_name or os.getenv(LOG_LEVEL_ENV) or "INFO").upper()
    level = logging.getLevelName(level_name)
    if not isinstance(level, int):
        raise ValueError(f"알 수 없는 로그 수준입니다: {level_name}")
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.StreamHandler(sys.stdout)
        ],
        force=True,
    )


def main(argv: Optional[List[str]] = None) -> int:
    # .env 파일 로드
    load_dotenv()
    try:
        args = build_parser().parse_args(argv)
        _configure_logging(args.log_level)
        settings = apply_flags(load_settings(args.config), args)
        COMMANDS[args.command](args, settings)
        return 0
    except (ValueError, FileNotFoundError, UnknownPreset) as e:
        logger.error(f"입력 오류: {e}")
        _emit_error(e, 2)
        return 2
    except Exception as e:
        logger.exception(f"작업 중 치명적인 오류 발생: {e}")
        _emit_error(e, 1)
        return 1


if __name__ == "__main__":
    sys.exit(main())

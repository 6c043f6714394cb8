"""명령행 진입점 통합 테스트 (프로세스 내 main 호출)."""

import json
import logging

import pandas as pd
import pytest

import main as cli
from core.domain.models.errors import UnknownPreset
from main import load_settings, main


@pytest.fixture(autouse=True)
def reset_logging():
    """main()이 설정한 루트 핸들러를 테스트마다 정리."""
    yield
    logging.getLogger().handlers.clear()


@pytest.fixture
def simulated(tmp_path):
    """K=2 상수 프런티어, n=1000 합성 데이터."""
    data = tmp_path / "data.csv"
    code = main([
        "simulate", "--model", "constant", "--k", "2", "--n", "1000", "--scores", "r1",
        "--seed", "42", "--output", str(data), "--log-level", "WARNING",
    ])
    assert code == 0
    return data


def _error_payload(capsys):
    err = capsys.readouterr().err.strip().splitlines()
    return json.loads(err[-1])


def test_simulate_writes_series_and_truth(simulated):
    truth = json.loads((simulated.parent / "truth.json").read_text(encoding="utf-8"))
    df = pd.read_csv(simulated)

    assert list(df.columns) == ["t", "x1", "y"]
    assert len(df) == 1000
    assert truth["changepoints"] == [333, 666]
    assert truth["seed"] == 42
    assert truth["config"]["frontier"]["family"] == "constant"


def test_simulate_is_byte_identical_for_same_seed(tmp_path):
    paths = []
    for name in ("a", "b"):
        out = tmp_path / name / "data.csv"
        assert main(["simulate", "--model", "logistic", "--d", "2", "--n", "200", "--seed", "7",
                     "--output", str(out), "--log-level", "WARNING"]) == 0
        paths.append(out)

    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_missing_seed_is_usage_error(tmp_path, capsys):
    code = main(["simulate", "--model", "constant", "--output", str(tmp_path / "x.csv")])

    assert code == 2
    payload = _error_payload(capsys)
    assert payload["error"] == "UsageError"
    assert payload["exit_code"] == 2


def test_missing_input_file(tmp_path, capsys):
    code = main(["detect", "--input", str(tmp_path / "missing.csv"), "--output", str(tmp_path / "r.json")])

    assert code == 2
    assert _error_payload(capsys)["error"] == "FileNotFoundError"


def test_invalid_series_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("t,x1,y\n1,1.0,0.5\n2,1.0,-0.5\n3,1.0,0.5\n4,1.0,0.5\n", encoding="utf-8")

    code = main(["detect", "--input", str(bad), "--output", str(tmp_path / "r.json")])

    assert code == 2
    assert _error_payload(capsys)["error"] == "NegativeValue"


def test_detect_with_auto_lambda(simulated, tmp_path):
    out = tmp_path / "result.json"

    code = main(["detect", "--input", str(simulated), "--output", str(out), "--log-level", "WARNING"])

    assert code == 0
    result = json.loads(out.read_text(encoding="utf-8"))
    assert result["lambda"] == pytest.approx(47.717, abs=1e-3)
    assert result["method"] == "fcp"
    assert result["k_hat"] == 2
    assert abs(result["changepoints"][0] - 333) <= 25
    assert abs(result["changepoints"][1] - 666) <= 25
    assert len(result["refit_windows"]) == 2


def test_detect_robust_writes_scores(simulated, tmp_path):
    out = tmp_path / "robust.json"
    scores = tmp_path / "scores.csv"

    code = main(["detect", "--input", str(simulated), "--output", str(out), "--robust",
                 "--scores-out", str(scores), "--log-level", "WARNING"])

    assert code == 0
    assert json.loads(out.read_text(encoding="utf-8"))["method"] == "fcp-robust"
    df = pd.read_csv(scores)
    assert list(df.columns) == ["t", "r_hat", "active"]
    assert len(df) == 1000


def test_ci_after_detect(simulated, tmp_path):
    result = tmp_path / "result.json"
    intervals = tmp_path / "ci.json"
    assert main(["detect", "--input", str(simulated), "--output", str(result), "--log-level", "WARNING"]) == 0

    code = main(["ci", "--input", str(simulated), "--result", str(result), "--output", str(intervals),
                 "--level", "0.9", "--log-level", "WARNING"])

    assert code == 0
    payload = json.loads(intervals.read_text(encoding="utf-8"))
    changepoints = json.loads(result.read_text(encoding="utf-8"))["changepoints"]
    assert isinstance(payload, list)
    for ci in payload:
        assert ci["eta_hat"] in changepoints
        assert 1 <= ci["lo"] <= ci["hi"] == ci["eta_hat"]
        assert ci["mode"] == "iid"


def test_ci_rejects_length_mismatch(simulated, tmp_path, capsys):
    result = tmp_path / "result.json"
    result.write_text(json.dumps({"n": 10, "lambda": 1.0, "changepoints": [], "stats": []}), encoding="utf-8")

    code = main(["ci", "--input", str(simulated), "--result", str(result), "--output", str(tmp_path / "ci.json")])

    assert code == 2
    assert _error_payload(capsys)["error"] == "ValueError"


def test_detect_local_reports_cells(tmp_path):
    data = tmp_path / "local.csv"
    out = tmp_path / "local.json"
    assert main(["simulate", "--model", "local", "--n", "400", "--seed", "3", "--output", str(data),
                 "--log-level", "WARNING"]) == 0

    code = main(["detect-local", "--input", str(data), "--output", str(out), "--an-side", "4",
                 "--log-level", "WARNING"])

    assert code == 0
    result = json.loads(out.read_text(encoding="utf-8"))
    assert result["method"] == "ms-fcp"
    assert len(result["cells"]) == result["k_hat"]
    for cell in result["cells"]:
        assert set(cell) == {"lo", "hi", "scale"}


def test_frontier_export_per_segment(simulated, tmp_path):
    result = tmp_path / "result.json"
    out_dir = tmp_path / "frontiers"
    assert main(["detect", "--input", str(simulated), "--output", str(result), "--log-level", "WARNING"]) == 0
    k_hat = json.loads(result.read_text(encoding="utf-8"))["k_hat"]

    code = main(["frontier", "--input", str(simulated), "--result", str(result), "--output-dir", str(out_dir),
                 "--log-level", "WARNING"])

    assert code == 0
    files = sorted(p.name for p in out_dir.iterdir())
    assert files == [f"frontier_segment_{k}.csv" for k in range(1, k_hat + 2)]
    df = pd.read_csv(out_dir / "frontier_segment_1.csv")
    assert list(df.columns) == ["x1", "y"]
    assert df["y"].is_monotonic_increasing


def test_benchmark_small_run(tmp_path):
    out = tmp_path / "bench" / "summary.csv"

    code = main(["benchmark", "--table", "t2", "--row", "K2,R1,Constant", "--reps", "2", "--n", "200",
                 "--seed", "1", "--output", str(out), "--log-level", "WARNING"])

    assert code == 0
    df = pd.read_csv(out)
    assert list(df.columns) == ["setup", "method", "d_h_mean", "k_err_mean", "reps", "failures", "runtime_ms_mean"]
    assert df.loc[0, "setup"] == "K2,R1,constant,d1"
    assert df.loc[0, "reps"] == 2
    reps = (tmp_path / "bench" / "summary_reps.jsonl").read_text(encoding="utf-8").splitlines()
    assert len(reps) == 2
    meta = json.loads((tmp_path / "bench" / "summary_meta.json").read_text(encoding="utf-8"))
    assert meta["reference"] == {"d_h": 2.74, "k_err": 0.0}
    assert meta["seed"] == 1


def test_benchmark_external_requires_file(tmp_path, capsys):
    code = main(["benchmark", "--table", "t2", "--row", "K2,R1,Constant", "--method", "external",
                 "--seed", "1", "--output", str(tmp_path / "s.csv")])

    assert code == 2
    assert _error_payload(capsys)["error"] == "ValueError"


def test_config_file_and_flag_precedence(simulated, tmp_path):
    """설정 파일이 기본값을, 명령행 플래그가 설정 파일을 덮어씀."""
    config = tmp_path / "detector.env"
    config.write_text("lambda=1000000\nalpha_trim=0.2\n", encoding="utf-8")
    from_file = tmp_path / "from_file.json"
    from_flag = tmp_path / "from_flag.json"

    assert main(["detect", "--input", str(simulated), "--output", str(from_file), "--config", str(config),
                 "--log-level", "WARNING"]) == 0
    assert main(["detect", "--input", str(simulated), "--output", str(from_flag), "--config", str(config),
                 "--lambda", "50", "--log-level", "WARNING"]) == 0

    file_result = json.loads(from_file.read_text(encoding="utf-8"))
    flag_result = json.loads(from_flag.read_text(encoding="utf-8"))
    assert file_result["lambda"] == 1000000.0
    assert file_result["k_hat"] == 0
    assert flag_result["lambda"] == 50.0


def test_unknown_config_key_rejected(tmp_path):
    config = tmp_path / "bad.env"
    config.write_text("threshold=3\n", encoding="utf-8")

    with pytest.raises(ValueError):
        load_settings(str(config))


def test_unexpected_key_error_is_internal_failure(simulated, tmp_path, monkeypatch, capsys):
    """내부 KeyError는 입력 오류(2)가 아니라 내부 오류(1)."""
    def broken(args, settings):
        raise KeyError("missing")

    monkeypatch.setitem(cli.COMMANDS, "detect", broken)

    code = main(["detect", "--input", str(simulated), "--output", str(tmp_path / "r.json")])

    assert code == 1
    payload = _error_payload(capsys)
    assert payload["error"] == "KeyError"
    assert payload["exit_code"] == 1


def test_unknown_preset_is_input_error(simulated, tmp_path, monkeypatch, capsys):
    def unknown(args, settings):
        raise UnknownPreset("알 수 없는 표: t9")

    monkeypatch.setitem(cli.COMMANDS, "detect", unknown)

    code = main(["detect", "--input", str(simulated), "--output", str(tmp_path / "r.json")])

    assert code == 2
    assert _error_payload(capsys)["error"] == "UnknownPreset"


def test_ci_result_without_lambda_is_input_error(simulated, tmp_path, capsys):
    """결과 JSON에 lambda가 없으면 종료 코드 2."""
    result = tmp_path / "result.json"
    result.write_text(json.dumps({"n": 1000, "changepoints": [333], "stats": [60.0]}), encoding="utf-8")

    code = main(["ci", "--input", str(simulated), "--result", str(result), "--output", str(tmp_path / "ci.json")])

    assert code == 2
    assert _error_payload(capsys)["error"] == "ValueError"

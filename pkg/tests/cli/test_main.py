import json

import pytest

from geodetect.core.config import load_settings
from geodetect.main import main
from geodetect.oracle.schemas import OracleReport


def run(capsys, *argv) -> tuple:
    code = main([str(arg) for arg in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture
def planted(tmp_path, capsys):
    out = tmp_path / "planted"
    code, _ = run(capsys, "generate", "--hypothesis", "H1", "--n", 1000, "--k", 300, "--seed", 5, "--out", out)
    assert code == 0
    return out


def _data_rows(path):
    return [line.split("\t") for line in path.read_text().splitlines() if not line.startswith("#")]


# ==================== generate ====================


def test_generate_writes_all_files(planted):
    weights = _data_rows(planted / "weights.tsv")
    truth = _data_rows(planted / "ground_truth.tsv")
    assert len(weights) == 1000 and all(len(row) == 2 for row in weights)
    assert len(truth) == 1000
    community = [row for row in truth if row[2] == "B"]
    assert len(community) == 300
    assert all(len(row) == 5 for row in community)
    assert (planted / "edges.txt").read_text().startswith("# geodetect v1 params: n=1000;k=300;")


def test_generate_is_deterministic(tmp_path, capsys):
    for name in ("first", "second"):
        code, _ = run(capsys, "generate", "--n", 400, "--seed", 8, "--out", tmp_path / name)
        assert code == 0
    for filename in ("edges.txt", "weights.tsv", "ground_truth.tsv"):
        assert (tmp_path / "first" / filename).read_bytes() == (tmp_path / "second" / filename).read_bytes()


def test_global_flags_before_or_after_command(tmp_path, capsys):
    run(capsys, "--seed", 3, "--out", tmp_path / "before", "generate", "--n", 300)
    run(capsys, "generate", "--n", 300, "--seed", 3, "--out", tmp_path / "after")
    before = (tmp_path / "before" / "edges.txt").read_bytes()
    assert before == (tmp_path / "after" / "edges.txt").read_bytes()


def test_generate_rejects_inconsistent_hypothesis(tmp_path, capsys):
    assert run(capsys, "generate", "--hypothesis", "H1", "--n", 100, "--k", 0, "--out", tmp_path)[0] == 1
    assert run(capsys, "generate", "--hypothesis", "H0", "--n", 100, "--k", 5, "--out", tmp_path)[0] == 1
    assert run(capsys, "generate", "--n", 100, "--tau", 3.5, "--out", tmp_path)[0] == 1


# ==================== stats ====================


def test_stats_with_per_vertex(planted, capsys):
    code, payload = run(
        capsys, "stats", "--graph", planted / "edges.txt", "--weights", planted / "weights.tsv",
        "--per-vertex", "--out", planted,
    )
    assert code == 0
    assert set(payload) == {"params", "seed", "n", "m", "triangle_count", "W", "runtime_ms"}
    assert payload["n"] == 1000
    assert json.loads((planted / "stats.json").read_text())["W"] == payload["W"]

    lines = (planted / "per_vertex.csv").read_text().splitlines()
    assert lines[0].startswith("# geodetect v1 params: n=1000;")
    assert lines[1] == "vertex,weight,W_a"
    assert len(lines) == 1002


def test_malformed_weights_exit_with_data_error(tmp_path, capsys):
    (tmp_path / "edges.txt").write_text("0 1\n1 2\n")
    (tmp_path / "weights.tsv").write_text("0\t1.0\n1\tabc\n2\t1.0\n")
    code, _ = run(
        capsys, "stats", "--graph", tmp_path / "edges.txt", "--weights", tmp_path / "weights.tsv",
        "--out", tmp_path,
    )
    assert code == 2


def test_missing_input_file_exits_with_data_error(tmp_path, capsys):
    code, _ = run(
        capsys, "stats", "--graph", tmp_path / "none.txt", "--weights", tmp_path / "none.tsv",
        "--out", tmp_path,
    )
    assert code == 2


# ==================== inference ====================


def test_detect_on_given_value(tmp_path, capsys):
    code, payload = run(capsys, "detect", "--w-value", 50, "--n", 10_000, "--out", tmp_path)
    assert code == 0
    assert payload["decision"] == "reject_H0"
    assert (tmp_path / "detection.json").exists()

    code, payload = run(capsys, "detect", "--w-value", 0.2, "--n", 10_000, "--out", tmp_path)
    assert payload["decision"] == "keep_H0"
    assert run(capsys, "detect", "--w-value", 1.0, "--out", tmp_path)[0] == 1


def test_detect_on_graph(planted, capsys):
    code, payload = run(
        capsys, "detect", "--graph", planted / "edges.txt", "--weights", planted / "weights.tsv",
        "--f-mode", "custom", "--f-custom", 1e12, "--out", planted,
    )
    assert code == 0
    assert payload["n"] == 1000
    assert payload["decision"] == "keep_H0"


def test_identify_then_estimate(planted, capsys):
    code, report = run(
        capsys, "identify", "--graph", planted / "edges.txt", "--weights", planted / "weights.tsv",
        "--truth", planted / "ground_truth.tsv", "--t-n", 3.0, "--out", planted,
    )
    assert code == 0
    assert report["t_n"] == 3.0
    assert "precision" in report and "weights" not in report
    csv_lines = (planted / "identification.csv").read_text().splitlines()
    assert csv_lines[1] == "vertex,weight,W_a,flag,truth"
    assert len(csv_lines) == 1002

    code, estimate = run(
        capsys, "estimate-k", "--weights", planted / "weights.tsv",
        "--identification", planted / "identification.json", "--M", 5, "--out", planted,
    )
    assert code == 0
    assert estimate["m_used"] == min(5, len(report["identified"]))


def test_estimate_rejects_foreign_report(tmp_path, capsys, planted):
    (tmp_path / "bad.json").write_text(json.dumps({"identified": [5000]}))
    code, _ = run(
        capsys, "estimate-k", "--weights", planted / "weights.tsv",
        "--identification", tmp_path / "bad.json", "--out", tmp_path,
    )
    assert code == 2


def test_calibration_needs_truth(planted, capsys):
    args = ["calibrate-C", "--graph", planted / "edges.txt", "--weights", planted / "weights.tsv",
            "--t-n", 3.0, "--out", planted]
    assert run(capsys, *args)[0] == 1
    code, payload = run(capsys, *args, "--truth", planted / "ground_truth.tsv")
    assert code == 0
    assert payload["threshold_constant"] > 0
    assert payload["restricted_community"] > 0


def test_pipeline(planted, capsys):
    code, payload = run(
        capsys, "pipeline", "--graph", planted / "edges.txt", "--weights", planted / "weights.tsv",
        "--truth", planted / "ground_truth.tsv", "--k", 300, "--M", 5, "--out", planted,
    )
    assert code == 0
    assert set(payload) == {"params", "seed", "detection", "identification", "size_estimate"}
    assert payload["size_estimate"]["m_requested"] == 5
    assert (planted / "pipeline.json").exists()


def test_every_json_output_names_params_and_seed(planted, capsys):
    graph, weights, truth = planted / "edges.txt", planted / "weights.tsv", planted / "ground_truth.tsv"
    inputs = ["--graph", graph, "--weights", weights]
    commands = [
        ("stats.json", ["stats", *inputs]),
        ("detection.json", ["detect", *inputs]),
        ("identification.json", ["identify", *inputs, "--truth", truth, "--t-n", 3.0]),
        ("calibration.json", ["calibrate-C", *inputs, "--truth", truth, "--t-n", 3.0]),
        ("size_estimate.json", ["estimate-k", "--weights", weights,
                                "--identification", planted / "identification.json"]),
        ("pipeline.json", ["pipeline", *inputs, "--k", 300]),
    ]
    canonical = (planted / "edges.txt").read_text().splitlines()[0].split(" params: ", 1)[1]
    for filename, argv in commands:
        code, payload = run(capsys, *argv, "--seed", 17, "--out", planted)
        assert code == 0
        written = json.loads((planted / filename).read_text())
        assert written == payload
        assert written["params"] == canonical
        assert written["seed"] == 17

    code, payload = run(capsys, "detect", "--w-value", 2.0, "--n", 100, "--out", planted)
    assert (payload["params"], payload["seed"]) == ("unspecified", 0)


def test_generate_reports_its_params(tmp_path, capsys):
    code, payload = run(capsys, "generate", "--n", 200, "--seed", 4, "--out", tmp_path)
    assert code == 0
    assert payload["seed"] == 4
    assert payload["params"].startswith("n=200;k=0;")
    assert "seed=4;" in payload["params"]


# ==================== experiment ====================


def test_experiment_command(tmp_path, capsys):
    code, summary = run(
        capsys, "experiment", "custom", "--n", 500, "--k", 30, "--replicas", 2, "--out", tmp_path,
    )
    assert code == 0
    assert summary["experiment"] == "custom"
    assert (tmp_path / "custom_summary.json").exists()
    written = json.loads((tmp_path / "custom_summary.json").read_text())
    assert written == summary
    assert written["seed"] == 0
    assert written["params"].startswith("custom;")
    assert (tmp_path / "experiments.db").exists()


# ==================== oracle-check ====================


def test_oracle_check_failure_exit_code(tmp_path, capsys, monkeypatch):
    reports = [
        OracleReport.from_estimate("fine", 1.0, 1.0, 0.1),
        OracleReport.from_estimate("broken", 2.0, 1.0, 0.1),
    ]
    monkeypatch.setattr("geodetect.oracle.router.run_suite", lambda seed, quick: reports)
    code, payload = run(capsys, "oracle-check", "--quick", "--out", tmp_path)
    assert code == 3
    assert payload["passed"] is False
    assert payload["failed"] == ["broken"]
    assert payload["checks"][0]["pass"] is True


def test_oracle_check_success(tmp_path, capsys, monkeypatch):
    calls = []

    def fake_suite(seed, quick):
        calls.append((seed, quick))
        return [OracleReport.from_estimate("fine", 1.0, 1.0, 0.1)]

    monkeypatch.setattr("geodetect.oracle.router.run_suite", fake_suite)
    code, payload = run(capsys, "--seed", 12, "oracle-check", "--out", tmp_path)
    assert code == 0
    assert calls == [(12, False)]
    assert json.loads((tmp_path / "oracle_report.json").read_text()) == payload
    assert payload["params"] == "oracle-check;quick=0"
    assert payload["seed"] == 12


# ==================== usage and configuration ====================


def test_unknown_command_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main(["bogus"])
    assert exit_info.value.code == 1


def test_missing_command_is_a_usage_error(capsys):
    with pytest.raises(SystemExit) as exit_info:
        main([])
    assert exit_info.value.code == 1


def test_config_file_and_overrides(tmp_path):
    config = tmp_path / "run.env"
    config.write_text("GEODETECT_SEED=11\nGEODETECT_JOBS=2\nGEODETECT_TAU=2.2\n")
    settings = load_settings(str(config), JOBS=4, OUT=None)
    assert settings.SEED == 11
    assert settings.JOBS == 4
    assert settings.TAU == 2.2
    assert settings.OUT == "out"


def test_invalid_config_file_is_a_usage_error(tmp_path, capsys):
    config = tmp_path / "run.env"
    config.write_text("GEODETECT_JOBS=many\n")
    assert run(capsys, "--config", config, "detect", "--w-value", 1.0, "--n", 10, "--out", tmp_path)[0] == 1

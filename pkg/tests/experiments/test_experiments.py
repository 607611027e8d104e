import csv
import json
import math
import time

import pytest

from geodetect.core.seeding import replica_seed
from geodetect.experiments.constants import STATUS_OK
from geodetect.experiments.schemas import ExperimentConfig, ExperimentKind, ReplicaOutcome
from geodetect.experiments.service import ExperimentService, preset_config
from geodetect.generators.schemas import ModelParams
from geodetect.generators.service import sample_model
from geodetect.triangles.service import compute_statistics


def _read_table(path):
    with open(path) as handle:
        header = handle.readline()
        rows = list(csv.DictReader(handle))
    return header, rows


# ==================== Configuration ====================


def test_preset_applies_overrides(tmp_path):
    config = preset_config("fig1", seed=9, output_dir=tmp_path, n=2000, ks=[10, 20], replicas=None)
    assert config.experiment is ExperimentKind.FIG1
    assert config.params.n == 2000
    assert config.params.seed == 9
    assert config.params.tau == 2.5
    assert config.ks == [10, 20]
    assert config.replicas == 200


def test_fig3_preset_uses_one_dimension(tmp_path):
    config = preset_config("fig3", output_dir=tmp_path)
    assert config.params.d == 1
    assert (config.params.n, config.params.k, config.M) == (100_000, 5_000, 20)


def test_invalid_configs(tmp_path):
    with pytest.raises(ValueError):
        preset_config("fig2", output_dir=tmp_path, k=0)
    with pytest.raises(ValueError):
        ExperimentConfig(
            experiment=ExperimentKind.FIG1, params=ModelParams(n=100), replicas=2, output_dir=tmp_path
        )
    with pytest.raises(ValueError):
        preset_config("custom", output_dir=tmp_path, replicas=0)


def test_run_key_names_every_parameter(tmp_path):
    config = preset_config("custom", output_dir=tmp_path, n=500, k=20, replicas=3)
    key = config.run_key()
    assert key.startswith("custom;scale=desk;replicas=3;")
    assert config.params.canonical() in key
    assert key != preset_config("custom", output_dir=tmp_path, n=500, k=21, replicas=3).run_key()


# ==================== Detection Runs ====================


def test_custom_run(service, repository, tmp_path):
    config = preset_config("custom", seed=4, output_dir=tmp_path, n=2000, k=100, replicas=4)
    summary = service.run(config)

    assert summary["experiment"] == "custom"
    assert summary["replicas_H0"] == 4 and summary["replicas_H1"] == 4
    assert summary["failed_replicas"] == 0
    assert summary["threshold"] == pytest.approx(7.6009, rel=1e-4)
    assert summary["risk"] is not None

    header, rows = _read_table(tmp_path / "custom_w_values.csv")
    assert header.startswith("# geodetect v1 params: custom;")
    assert len(rows) == 8
    assert {row["decision"] for row in rows} <= {"reject_H0", "keep_H0"}
    assert rows[0]["seed"] == str(replica_seed(4, 0))

    saved = json.loads((tmp_path / "custom_summary.json").read_text())
    assert saved == summary
    assert len(repository.list_for_run(config.run_key())) == 8


def test_fig1_run(service, tmp_path):
    config = preset_config("fig1", output_dir=tmp_path, n=2000, ks=[40, 80], replicas=3)
    summary = service.run(config)
    assert [cell["k"] for cell in summary["per_k"]] == [40, 80]
    assert summary["mean_W_H0"] is not None
    _, rows = _read_table(tmp_path / "fig1_w_values.csv")
    assert len(rows) == 9
    assert [row["hypothesis"] for row in rows[:3]] == ["H0"] * 3


def test_rerun_replaces_ledger_rows(service, repository, tmp_path):
    config = preset_config("custom", output_dir=tmp_path, n=500, k=30, replicas=2)
    service.run(config)
    service.run(config)
    assert len(repository.list_for_run(config.run_key())) == 4


def test_failed_replicas_are_counted_and_skipped(service, repository, tmp_path, monkeypatch):
    real = ExperimentService._statistics_worker
    poisoned = replica_seed(0, 1)

    def flaky(params: ModelParams) -> ReplicaOutcome:
        if params.seed == poisoned and params.k > 0:
            raise RuntimeError("sampler exploded")
        return real(params)

    monkeypatch.setattr(ExperimentService, "_statistics_worker", staticmethod(flaky))
    config = preset_config("custom", output_dir=tmp_path, n=500, k=30, replicas=3)
    summary = service.run(config)

    assert summary["failed_replicas"] == 1
    assert summary["replicas_H1"] == 2
    assert repository.count_failed(config.run_key()) == 1
    failed = [r for r in repository.list_for_run(config.run_key()) if r.status != STATUS_OK]
    assert failed[0].replica == 1 and "sampler exploded" in failed[0].error
    _, rows = _read_table(tmp_path / "custom_w_values.csv")
    assert len(rows) == 5


def test_outputs_do_not_depend_on_jobs(service, tmp_path):
    tables = []
    for jobs in (1, 3):
        out = tmp_path / f"jobs{jobs}"
        service.run(preset_config("custom", seed=2, output_dir=out, jobs=jobs, n=1500, k=60, replicas=5))
        tables.append((out / "custom_w_values.csv").read_bytes())
    assert tables[0] == tables[1]


# ==================== Identification Runs ====================


def test_fig2_run_with_fixed_constant(service, tmp_path):
    config = preset_config(
        "fig2", output_dir=tmp_path, n=3000, k=300, replicas=2, t_n=3.0, calib_c=1.0
    )
    summary = service.run(config)
    assert summary["threshold_constant"] == 1.0
    assert len(summary["per_replica"]) == 2

    _, vertices = _read_table(tmp_path / "fig2_vertices.csv")
    assert len(vertices) == 2 * 3000
    assert sum(int(row["truth"]) for row in vertices) == 2 * 300
    _, curve = _read_table(tmp_path / "fig2_threshold_curve.csv")
    thresholds = [float(row["threshold"]) for row in curve]
    assert thresholds == sorted(thresholds, reverse=True)


def test_fig2_run_calibrates(service, tmp_path):
    config = preset_config("fig2", output_dir=tmp_path, n=3000, k=300, replicas=1, t_n=3.0)
    summary = service.run(config)
    assert summary["threshold_constant"] > 0


def test_fig3_run(service, tmp_path):
    config = preset_config(
        "fig3", output_dir=tmp_path, n=3000, k=300, replicas=2, t_n=3.0, calib_c=1.0, M=5
    )
    summary = service.run(config)
    assert summary["k"] == 300
    assert len(summary["mean_k_hat"]) == 5

    _, means = _read_table(tmp_path / "fig3_means.csv")
    assert [int(row["m"]) for row in means] == [1, 2, 3, 4, 5]
    assert all(int(row["k"]) == 300 for row in means)


# ==================== Acceptance ====================


@pytest.mark.slow
def test_desk_fig1(service, tmp_path):
    summary = service.run(preset_config("fig1", output_dir=tmp_path, jobs=4))
    assert summary["failed_replicas"] == 0
    assert summary["h1_mean_increasing"]
    for cell in summary["per_k"]:
        assert cell["mean_W_H1"] > summary["mean_W_H0"]
    assert summary["per_k"][-1]["null_quantile_risk"] <= 0.2
    # f = log n sits far above every sampled W: the test never rejects
    for cell in summary["per_k"]:
        assert cell["f_mode"] == "log_n"
        assert cell["threshold"] == pytest.approx(math.log(10_000))
        assert cell["risk"] == 1.0


@pytest.mark.slow
def test_desk_fig2(service, tmp_path):
    summary = service.run(preset_config("fig2", output_dir=tmp_path, jobs=4))
    assert summary["failed_replicas"] == 0
    assert len(summary["per_replica"]) >= 5
    assert summary["mean_recall"] >= 0.8
    assert summary["mean_precision"] >= 0.7
    assert summary["mean_risk"] <= 0.25


@pytest.mark.slow
def test_desk_fig3(service, tmp_path):
    summary = service.run(preset_config("fig3", output_dir=tmp_path, jobs=4))
    assert summary["failed_replicas"] == 0
    assert 0.5 <= summary["median_ratio_m_ge_5"] <= 2.0


@pytest.mark.slow
def test_statistics_at_desk_scale_are_fast_and_thread_independent():
    graph, ws, _ = sample_model(ModelParams(n=100_000, k=5_000, seed=1))
    start = time.perf_counter()
    serial = compute_statistics(graph, ws, jobs=1)
    assert time.perf_counter() - start < 60.0
    parallel = compute_statistics(graph, ws, jobs=8)
    assert serial.w_global == parallel.w_global
    assert serial.per_vertex.tobytes() == parallel.per_vertex.tobytes()

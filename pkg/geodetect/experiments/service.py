"""
Experiments Service

Runs the reference experiments as seeded replica batches and writes
plot-ready CSV tables plus a JSON summary.

This module follows the feature layout of the package:
- Replicas run on a thread pool of ``jobs`` workers; outcomes are collected
  in replica order, so outputs do not depend on scheduling
- Replica seeds are seed XOR replica index
- Every replica is recorded in the results ledger; failed replicas are
  excluded from the summaries and counted
"""

import csv
import json
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from geodetect.core.provenance import header_line
from geodetect.core.seeding import replica_seed
from geodetect.experiments.constants import (
    BASE_MODEL,
    CALIBRATION_REPLICA,
    CUSTOM_VALUES_FILENAME,
    DEFAULT_T_N,
    FIG1_VALUES_FILENAME,
    FIG2_CURVE_FILENAME,
    FIG2_VERTICES_FILENAME,
    FIG3_ESTIMATES_FILENAME,
    FIG3_MEANS_FILENAME,
    HYPOTHESIS_H0,
    HYPOTHESIS_H1,
    PRESETS,
    STATUS_FAILED,
    STATUS_OK,
    SUMMARY_FILENAME,
    SUMMARY_MIN_M,
)
from geodetect.experiments.models import ReplicaRecord
from geodetect.experiments.repository import ReplicaRepository
from geodetect.experiments.schemas import ExperimentConfig, ExperimentKind, ReplicaOutcome, Scale
from geodetect.generators.schemas import ModelParams
from geodetect.generators.service import sample_model
from geodetect.inference.schemas import FMode
from geodetect.inference.service import (
    calibrate_constant,
    detect,
    detection_threshold,
    empirical_risk,
    estimate_k,
    identify,
    null_quantile_threshold,
    threshold_curve,
)
from geodetect.triangles.service import compute_statistics

logger = logging.getLogger(__name__)


def preset_config(
    experiment: str,
    scale: str = "desk",
    seed: int = 0,
    output_dir: Path = Path("out"),
    jobs: int = 1,
    **overrides,
) -> ExperimentConfig:
    """
    Builds an ExperimentConfig from a preset; overrides given as None are ignored.

    Model fields (n, k, tau, w0, d, gamma, weight_mode, sparse_mode,
    apply_correction) and run fields (replicas, ks, t_n, calib_c, M, f_mode,
    f_custom) can both be overridden.
    """
    kind, size = ExperimentKind(experiment), Scale(scale)
    values: Dict[str, Any] = {**BASE_MODEL, **PRESETS[kind.value][size.value]}
    values.update({key: value for key, value in overrides.items() if value is not None})

    model_fields = set(ModelParams.model_fields) - {"seed"}
    params = ModelParams(seed=seed, **{key: values.pop(key) for key in list(values) if key in model_fields})
    return ExperimentConfig(
        experiment=kind, scale=size, params=params, output_dir=Path(output_dir), jobs=jobs, **values
    )


class ExperimentService:
    """
    Runs one experiment configuration.

    Responsibilities:
    - Replica scheduling and failure bookkeeping
    - Per-experiment tables and summaries
    - Recording every replica in the results ledger
    """

    def __init__(self, repository: ReplicaRepository):
        self._repository = repository

    def run(self, config: ExperimentConfig) -> Dict[str, Any]:
        if config.scale is Scale.PAPER and config.experiment in (ExperimentKind.FIG2, ExperimentKind.FIG3):
            logger.warning(f"Paper-scale {config.experiment.value} (n={config.params.n}) runs for a long time")
        config.output_dir.mkdir(parents=True, exist_ok=True)
        self._repository.clear_run(config.run_key())

        handlers = {
            ExperimentKind.FIG1: self._run_fig1,
            ExperimentKind.FIG2: self._run_fig2,
            ExperimentKind.FIG3: self._run_fig3,
            ExperimentKind.CUSTOM: self._run_custom,
        }
        summary = handlers[config.experiment](config)
        summary = {
            "experiment": config.experiment.value,
            "params": config.run_key(),
            "seed": config.params.seed,
            **summary,
        }
        self._write_json(config.output_dir / SUMMARY_FILENAME.format(experiment=config.experiment.value), summary)
        logger.info(f"Experiment {config.experiment.value} finished: {summary.get('failed_replicas', 0)} failed")
        return summary

    # ==================== Replica Execution ====================

    def _run_replicas(
        self,
        config: ExperimentConfig,
        hypothesis: str,
        k: int,
        worker: Callable[[ModelParams], ReplicaOutcome],
    ) -> List[ReplicaOutcome]:
        """Runs ``config.replicas`` replicas of one (hypothesis, k) cell and records them."""
        tasks = [
            (index, config.params.model_copy(update={"k": k, "seed": replica_seed(config.params.seed, index)}))
            for index in range(config.replicas)
        ]

        def guarded(task):
            index, params = task
            try:
                outcome = worker(params)
                return outcome.model_copy(update={"hypothesis": hypothesis, "k": k, "replica": index})
            except Exception as e:
                logger.warning(f"Replica {hypothesis} k={k} #{index} failed: {e}")
                return ReplicaOutcome(
                    hypothesis=hypothesis, k=k, replica=index, seed=params.seed,
                    status=STATUS_FAILED, error=str(e),
                )

        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(guarded, tasks))

        self._record(config, outcomes)
        done = sum(outcome.status == STATUS_OK for outcome in outcomes)
        logger.info(f"{config.experiment.value}: {hypothesis} k={k}: {done}/{len(outcomes)} replicas ok")
        return outcomes

    def _record(self, config: ExperimentConfig, outcomes: Sequence[ReplicaOutcome]) -> None:
        self._repository.add_records([
            ReplicaRecord(
                experiment=config.experiment.value,
                run_key=config.run_key(),
                hypothesis=outcome.hypothesis,
                k=outcome.k,
                replica=outcome.replica,
                seed=str(outcome.seed),
                status=outcome.status,
                w_value=outcome.w_value,
                triangle_count=outcome.triangle_count,
                error=outcome.error,
            )
            for outcome in outcomes
        ])

    @staticmethod
    def _statistics_worker(params: ModelParams) -> ReplicaOutcome:
        graph, ws, truth = sample_model(params)
        stats = compute_statistics(graph, ws, jobs=1)
        return ReplicaOutcome(
            hypothesis="", k=params.k, replica=0, seed=params.seed, status=STATUS_OK,
            w_value=stats.w_global, triangle_count=stats.triangle_count,
            payload=(ws, stats, truth),
        )

    # ==================== Detection (fig1, custom) ====================

    def _run_fig1(self, config: ExperimentConfig) -> Dict[str, Any]:
        null = self._run_replicas(config, HYPOTHESIS_H0, 0, self._statistics_worker)
        planted = {k: self._run_replicas(config, HYPOTHESIS_H1, k, self._statistics_worker) for k in config.ks}

        rows = [self._value_row(outcome) for outcome in null if outcome.status == STATUS_OK]
        for k in config.ks:
            rows.extend(self._value_row(outcome) for outcome in planted[k] if outcome.status == STATUS_OK)
        self._write_csv(
            config.output_dir / FIG1_VALUES_FILENAME, config.run_key(),
            ["hypothesis", "k", "replica", "seed", "W", "triangle_count"], rows,
        )

        null_values = _ok_values(null)
        per_k = [self._detection_summary(config, null_values, _ok_values(planted[k]), k) for k in config.ks]
        means = [cell["mean_W_H1"] for cell in per_k]
        return {
            "per_k": per_k,
            "mean_W_H0": _mean(null_values),
            "h1_mean_increasing": all(a < b for a, b in zip(means, means[1:])),
            "failed_replicas": _failed(null) + sum(_failed(planted[k]) for k in config.ks),
        }

    def _run_custom(self, config: ExperimentConfig) -> Dict[str, Any]:
        k = config.params.k
        null = self._run_replicas(config, HYPOTHESIS_H0, 0, self._statistics_worker)
        planted = self._run_replicas(config, HYPOTHESIS_H1, k, self._statistics_worker)

        rows = []
        for outcome in null + planted:
            if outcome.status != STATUS_OK:
                continue
            decision = detect(outcome.w_value, config.params.n, config.f_mode, config.f_custom).decision
            rows.append(self._value_row(outcome) + [decision.value])
        self._write_csv(
            config.output_dir / CUSTOM_VALUES_FILENAME, config.run_key(),
            ["hypothesis", "k", "replica", "seed", "W", "triangle_count", "decision"], rows,
        )
        summary = self._detection_summary(config, _ok_values(null), _ok_values(planted), k)
        return {**summary, "failed_replicas": _failed(null) + _failed(planted)}

    def _detection_summary(
        self, config: ExperimentConfig, null_values: List[float], planted_values: List[float], k: int
    ) -> Dict[str, Any]:
        threshold = detection_threshold(config.params.n, config.f_mode, config.f_custom)
        summary: Dict[str, Any] = {
            "k": k,
            "replicas_H0": len(null_values),
            "replicas_H1": len(planted_values),
            "mean_W_H0": _mean(null_values),
            "std_W_H0": _std(null_values),
            "mean_W_H1": _mean(planted_values),
            "std_W_H1": _std(planted_values),
            "f_mode": FMode(config.f_mode).value,
            "threshold": threshold,
            "risk": None,
            "null_quantile_threshold": None,
            "null_quantile_risk": None,
        }
        if null_values and planted_values:
            quantile = null_quantile_threshold(null_values)
            summary.update(
                risk=empirical_risk(null_values, planted_values, threshold),
                null_quantile_threshold=quantile,
                null_quantile_risk=empirical_risk(null_values, planted_values, quantile),
            )
        return summary

    @staticmethod
    def _value_row(outcome: ReplicaOutcome) -> list:
        return [outcome.hypothesis, outcome.k, outcome.replica, outcome.seed, outcome.w_value, outcome.triangle_count]

    # ==================== Identification (fig2, fig3) ====================

    def _threshold_constant(self, config: ExperimentConfig, t_n: float) -> float:
        """The configured constant, or one fitted on a held-out labeled replica."""
        if config.calib_c is not None:
            return config.calib_c
        params = config.params.model_copy(
            update={"seed": replica_seed(config.params.seed, CALIBRATION_REPLICA)}
        )
        graph, ws, truth = sample_model(params)
        stats = compute_statistics(graph, ws, jobs=config.jobs)
        calibration = calibrate_constant(stats.per_vertex, ws, graph.n, truth.membership(graph.n), t_n)
        return calibration.threshold_constant

    def _run_fig2(self, config: ExperimentConfig) -> Dict[str, Any]:
        t_n = config.t_n if config.t_n is not None else DEFAULT_T_N
        constant = self._threshold_constant(config, t_n)
        n, k = config.params.n, config.params.k

        def worker(params: ModelParams) -> ReplicaOutcome:
            outcome = self._statistics_worker(params)
            ws, stats, truth = outcome.payload
            report = identify(stats.per_vertex, ws, n, constant, t_n, truth.membership(n))
            return outcome.model_copy(update={"payload": report})

        outcomes = self._run_replicas(config, HYPOTHESIS_H1, k, worker)
        completed = [outcome for outcome in outcomes if outcome.status == STATUS_OK]

        rows = []
        w_max = config.params.w0
        for outcome in completed:
            report = outcome.payload
            w_max = max(w_max, float(report.weights.max()))
            for vertex, weight, w_a, flag, truth in report.rows():
                rows.append([outcome.replica, vertex, weight, w_a, truth, flag])
        self._write_csv(
            config.output_dir / FIG2_VERTICES_FILENAME, config.run_key(),
            ["replica", "vertex", "weight", "W_a", "truth", "flag"], rows,
        )
        curve = threshold_curve(n, constant, config.params.w0, w_max)
        self._write_csv(
            config.output_dir / FIG2_CURVE_FILENAME, config.run_key(), ["weight", "threshold"], curve.tolist()
        )

        per_replica = [
            {
                "replica": outcome.replica,
                "precision": outcome.payload.precision,
                "recall": outcome.payload.recall,
                "risk": outcome.payload.risk,
                "restricted_identified": len(outcome.payload.restricted_identified),
                "restricted_truth": len(outcome.payload.restricted_truth or []),
            }
            for outcome in completed
        ]
        return {
            "threshold_constant": constant,
            "t_n": t_n,
            "per_replica": per_replica,
            "mean_precision": _mean([r["precision"] for r in per_replica if r["precision"] is not None]),
            "mean_recall": _mean([r["recall"] for r in per_replica if r["recall"] is not None]),
            "mean_risk": _mean([r["risk"] for r in per_replica if r["risk"] is not None]),
            "failed_replicas": _failed(outcomes),
        }

    def _run_fig3(self, config: ExperimentConfig) -> Dict[str, Any]:
        t_n = config.t_n if config.t_n is not None else DEFAULT_T_N
        constant = self._threshold_constant(config, t_n)
        n, k = config.params.n, config.params.k

        def worker(params: ModelParams) -> ReplicaOutcome:
            outcome = self._statistics_worker(params)
            ws, stats, _ = outcome.payload
            report = identify(stats.per_vertex, ws, n, constant, max(t_n, ws.w0))
            estimate = estimate_k(ws.values[report.identified], ws.tau, config.M)
            return outcome.model_copy(update={"payload": estimate})

        outcomes = self._run_replicas(config, HYPOTHESIS_H1, k, worker)
        completed = [outcome for outcome in outcomes if outcome.status == STATUS_OK]

        rows = []
        by_m: Dict[int, List[float]] = {m: [] for m in range(1, config.M + 1)}
        for outcome in completed:
            estimate = outcome.payload
            for m, (order_stat, k_hat) in enumerate(zip(estimate.order_stats, estimate.estimates), start=1):
                rows.append([outcome.replica, m, order_stat, k_hat])
                by_m[m].append(k_hat)
        self._write_csv(
            config.output_dir / FIG3_ESTIMATES_FILENAME, config.run_key(),
            ["replica", "m", "order_stat", "k_hat"], rows,
        )

        means = {m: _mean(values) for m, values in by_m.items()}
        self._write_csv(
            config.output_dir / FIG3_MEANS_FILENAME, config.run_key(),
            ["m", "mean_k_hat", "k"], [[m, means[m], k] for m in sorted(means)],
        )
        summarized = [means[m] / k for m in means if m >= SUMMARY_MIN_M and means[m] is not None]
        return {
            "threshold_constant": constant,
            "t_n": t_n,
            "k": k,
            "mean_k_hat": [means[m] for m in sorted(means)],
            "median_ratio_m_ge_5": float(np.median(summarized)) if summarized else None,
            "failed_replicas": _failed(outcomes),
        }

    # ==================== Output ====================

    @staticmethod
    def _write_csv(path: Path, canonical: str, columns: Sequence[str], rows: Sequence[Sequence]) -> Path:
        try:
            with open(path, "w", newline="") as handle:
                handle.write(header_line(canonical) + "\n")
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(columns)
                writer.writerows(rows)
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise
        return path

    @staticmethod
    def _write_json(path: Path, payload: Dict[str, Any]) -> Path:
        try:
            path.write_text(json.dumps(payload, indent=2) + "\n")
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise
        return path


def _ok_values(outcomes: Sequence[ReplicaOutcome]) -> List[float]:
    return [outcome.w_value for outcome in outcomes if outcome.status == STATUS_OK]


def _failed(outcomes: Sequence[ReplicaOutcome]) -> int:
    return sum(outcome.status == STATUS_FAILED for outcome in outcomes)


def _mean(values: Sequence[float]) -> Optional[float]:
    return float(np.mean(values)) if len(values) else None


def _std(values: Sequence[float]) -> Optional[float]:
    return float(np.std(values, ddof=1)) if len(values) > 1 else None

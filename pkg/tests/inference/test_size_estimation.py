import numpy as np
import pytest

from conftest import complete_graph, unit_weights
from geodetect.core.exceptions import ParameterError
from geodetect.generators.schemas import ModelParams
from geodetect.generators.service import sample_model
from geodetect.inference.constants import KEEP_H0_CAVEAT
from geodetect.inference.schemas import Decision, FMode
from geodetect.inference.service import estimate_k, run_pipeline


def test_single_order_statistic():
    report = estimate_k([100.0], 2.5, 1)
    assert report.m_used == 1
    assert report.estimates == [pytest.approx(1000.0)]
    assert report.warning is None


def test_estimates_use_decreasing_order_statistics():
    report = estimate_k([4.0, 16.0, 9.0], 2.5, 3)
    assert report.order_stats == [16.0, 9.0, 4.0]
    assert report.estimates == pytest.approx([64.0, 54.0, 24.0])


def test_fewer_identified_than_requested():
    report = estimate_k([5.0, 3.0, 2.0], 2.5, 5)
    assert report.m_requested == 5
    assert report.m_used == 3
    assert len(report.estimates) == 3
    assert "3" in report.warning and "M=5" in report.warning


def test_empty_identified_set():
    report = estimate_k([], 2.5, 4)
    assert report.m_used == 0
    assert report.estimates == []
    assert report.warning is not None


def test_invalid_size_estimation_inputs():
    with pytest.raises(ParameterError):
        estimate_k([1.0], 2.5, 0)
    with pytest.raises(ParameterError):
        estimate_k([1.0], 3.5, 1)


def test_estimates_track_true_size(rng):
    k, tau, M = 10_000, 2.5, 20
    ratios = []
    for _ in range(15):
        community = 1.0 + rng.pareto(tau - 1.0, size=k)
        report = estimate_k(community, tau, M)
        ratios.extend(np.asarray(report.estimates[4:]) / k)
    assert 0.5 <= float(np.median(ratios)) <= 2.0


# ==================== Pipeline ====================


def test_pipeline_keeps_null_with_caveat():
    report = run_pipeline(complete_graph(4), unit_weights(4), FMode.CUSTOM, 1e9, t_n=1.0, M=20)
    assert report.detection.decision is Decision.KEEP_H0
    assert report.identification.caveat == KEEP_H0_CAVEAT
    # W(a) = 4 * 3 lies above 4 / sqrt(log 4) for every vertex
    assert report.identification.identified == [0, 1, 2, 3]
    assert report.size_estimate.m_used == 4
    assert report.size_estimate.warning is not None


def test_pipeline_rejects_null():
    report = run_pipeline(complete_graph(4), unit_weights(4), FMode.CUSTOM, 1.0, t_n=1.0, M=2)
    assert report.detection.w_value == pytest.approx(4.0)
    assert report.detection.decision is Decision.REJECT_H0
    assert report.identification.caveat is None
    assert report.size_estimate.m_used == 2
    assert report.size_estimate.estimates == pytest.approx([1.0, 2.0])


def test_pipeline_on_generated_samples():
    null_graph, null_ws, _ = sample_model(ModelParams(n=3000, seed=21))
    planted = ModelParams(n=3000, k=600, seed=21)
    graph, ws, truth = sample_model(planted)
    membership = truth.membership(planted.n)

    null_report = run_pipeline(null_graph, null_ws, t_n=2.0, M=5)
    assert null_report.detection.decision is Decision.KEEP_H0
    assert null_report.identification.caveat == KEEP_H0_CAVEAT
    assert null_report.identification.recall is None

    report = run_pipeline(graph, ws, FMode.CUSTOM, 1e-9, t_n=2.0, k=600, M=5, truth=membership)
    assert report.detection.decision is Decision.REJECT_H0
    assert report.detection.w_value > null_report.detection.w_value

    identification = report.identification
    eligible = np.flatnonzero(ws.values >= 2.0)
    assert identification.restricted_truth == [v for v in eligible.tolist() if v < planted.k]
    assert set(identification.restricted_identified) <= set(eligible.tolist())
    assert identification.recall is not None and 0.0 <= identification.recall <= 1.0

    expected_order = sorted(ws.values[identification.identified].tolist(), reverse=True)[:5]
    assert report.size_estimate.order_stats == expected_order

"""
Inference Service

The three statistical procedures and their risk metrics.

- Detection: reject H0 when W(G) >= f(n)
- Identification: vertex a is flagged when W(a) > C n / (w_a sqrt(log n));
  recovery is assessed on vertices with weight >= t_n
- Size estimation: k_m = m X_(m)^(tau - 1) from the identified weights
"""

import logging
import math
from typing import Iterable, Optional, Sequence, Set

import numpy as np

from geodetect.core.exceptions import InfeasibleWindowError, ParameterError
from geodetect.graph.structure import Graph
from geodetect.inference.constants import (
    CALIBRATION_MIN_PRECISION,
    DEFAULT_CALIBRATION_CONSTANT,
    DEFAULT_M,
    FEWER_THAN_M_WARNING,
    KEEP_H0_CAVEAT,
    MIN_IDENTIFICATION_N,
    NULL_QUANTILE_LEVEL,
    THRESHOLD_CURVE_POINTS,
    UNKNOWN_K_T_N_FACTOR,
)
from geodetect.inference.schemas import (
    CalibrationReport,
    Decision,
    DetectionReport,
    FMode,
    IdentificationReport,
    PipelineReport,
    SizeEstimateReport,
)
from geodetect.triangles.service import compute_statistics
from geodetect.weights.schemas import WeightSequence, validate_power_law

logger = logging.getLogger(__name__)


# ==================== Detection ====================


def detection_threshold(n: int, f_mode: FMode = FMode.LOG_N, custom: Optional[float] = None) -> float:
    f_mode = FMode(f_mode)
    if f_mode is FMode.LOG_N:
        return math.log(n)
    if f_mode is FMode.SQRT_N:
        return math.sqrt(n)
    if custom is None or not custom > 0:
        raise ParameterError(f"custom threshold must be positive, got {custom}")
    return float(custom)


def detect(
    w_value: float,
    n: int,
    f_mode: FMode = FMode.LOG_N,
    custom: Optional[float] = None,
) -> DetectionReport:
    """Weighted-triangle test: reject H0 iff W >= f(n)."""
    if w_value < 0:
        raise ParameterError(f"W must be non-negative, got {w_value}")
    if n < 2:
        raise ParameterError(f"n must be >= 2, got {n}")
    threshold = detection_threshold(n, f_mode, custom)
    decision = Decision.REJECT_H0 if w_value >= threshold else Decision.KEEP_H0
    return DetectionReport(
        n=n, w_value=float(w_value), f_mode=FMode(f_mode), threshold=threshold, decision=decision
    )


def null_quantile_threshold(h0_values: Sequence[float], level: float = NULL_QUANTILE_LEVEL) -> float:
    """Empirical threshold: the ``level`` quantile of W over null replicas."""
    values = np.asarray(h0_values, dtype=np.float64)
    if values.size == 0:
        raise ParameterError("at least one null replica is needed for a quantile threshold")
    if not 0 < level < 1:
        raise ParameterError(f"level must lie in (0, 1), got {level}")
    return float(np.quantile(values, level, method="higher"))


def empirical_risk(h0_values: Sequence[float], h1_values: Sequence[float], threshold: float) -> float:
    """Type-I plus type-II error frequency of the test W >= threshold."""
    h0 = np.asarray(h0_values, dtype=np.float64)
    h1 = np.asarray(h1_values, dtype=np.float64)
    if h0.size == 0 or h1.size == 0:
        raise ParameterError("risk needs replicas under both hypotheses")
    return float(np.mean(h0 >= threshold) + np.mean(h1 < threshold))


# ==================== Identification ====================


def identification_threshold(weights: np.ndarray, n: int, constant: float) -> np.ndarray:
    """The curve C n / (w sqrt(log n)) evaluated at each weight."""
    return constant * n / (np.asarray(weights, dtype=np.float64) * math.sqrt(math.log(n)))


def threshold_curve(n: int, constant: float, w_min: float, w_max: float,
                    points: int = THRESHOLD_CURVE_POINTS) -> np.ndarray:
    """(points, 2) array of (weight, threshold) on a log grid, for plotting."""
    grid = np.geomspace(w_min, max(w_max, w_min * (1 + 1e-9)), points)
    return np.column_stack([grid, identification_threshold(grid, n, constant)])


def identify(
    w_local: np.ndarray,
    ws: WeightSequence,
    n: int,
    constant: float,
    t_n: float,
    truth: Optional[np.ndarray] = None,
) -> IdentificationReport:
    """
    Flags vertices whose W(a) lies strictly above the threshold curve.

    Args:
        w_local: W(a) per vertex
        ws: Vertex weights
        n: Vertex count
        constant: Threshold constant C > 0
        t_n: Weight cutoff of the restricted view, >= w0
        truth: Optional boolean community mask; enables risk, precision, recall

    Returns:
        IdentificationReport
    """
    if n < MIN_IDENTIFICATION_N:
        raise ParameterError(f"identification needs n >= {MIN_IDENTIFICATION_N}, got {n}")
    if not constant > 0:
        raise ParameterError(f"threshold constant must be positive, got {constant}")
    if t_n < ws.w0:
        raise ParameterError(f"t_n must be >= w0={ws.w0}, got {t_n}")
    w_local = np.asarray(w_local, dtype=np.float64)
    if w_local.shape != (ws.n,) or ws.n != n:
        raise ParameterError(f"expected {n} statistics and weights, got {w_local.size} and {ws.n}")

    flags = w_local > identification_threshold(ws.values, n, constant)
    eligible = ws.values >= t_n
    identified = np.flatnonzero(flags)
    restricted_identified = np.flatnonzero(flags & eligible)

    report = dict(
        n=n,
        threshold_constant=float(constant),
        t_n=float(t_n),
        identified=identified.tolist(),
        restricted_identified=restricted_identified.tolist(),
        weights=ws.values,
        w_local=w_local,
        flags=flags,
    )
    if truth is not None:
        truth = np.asarray(truth, dtype=bool)
        restricted_truth = np.flatnonzero(truth & eligible)
        true_positive = int(np.count_nonzero(flags & eligible & truth))
        report.update(
            truth=truth,
            restricted_truth=restricted_truth.tolist(),
            risk=risk_metrics(set(identified.tolist()), set(np.flatnonzero(truth).tolist()),
                              ws.values, t_n),
            precision=(true_positive / restricted_identified.size) if restricted_identified.size else None,
            recall=(true_positive / restricted_truth.size) if restricted_truth.size else None,
        )
    logger.info(
        f"Identified {identified.size} vertices ({restricted_identified.size} with w >= {t_n:g})"
    )
    return IdentificationReport(**report)


def default_t_n(n: int, k: Optional[int], tau: float) -> float:
    """
    Weight cutoff inside the window (n log n / k)^(1/tau) << t_n << k^(1/(tau-1)).

    Geometric mean of the bounds when k is known, 2 (n log n)^(1/tau) otherwise.
    """
    if n < MIN_IDENTIFICATION_N:
        raise ParameterError(f"t_n needs n >= {MIN_IDENTIFICATION_N}, got {n}")
    validate_power_law(tau, 1.0)
    n_log_n = n * math.log(n)
    if k is None:
        return UNKNOWN_K_T_N_FACTOR * n_log_n ** (1.0 / tau)
    if k < 1:
        raise ParameterError(f"k must be >= 1, got {k}")
    lower = (n_log_n / k) ** (1.0 / tau)
    upper = k ** (1.0 / (tau - 1.0))
    if lower >= upper:
        raise InfeasibleWindowError(lower, upper)
    return math.sqrt(lower * upper)


def risk_metrics(
    identified: Set[int],
    ground_truth: Set[int],
    weights: np.ndarray,
    cutoff: float,
) -> Optional[float]:
    """
    |V_hat delta V_C| / (2 |V_C|) over vertices with weight >= cutoff.

    Returns 0.0 when both restricted sets are empty and None (not applicable)
    when only the restricted truth is empty.
    """
    eligible = set(np.flatnonzero(np.asarray(weights) >= cutoff).tolist())
    found = set(identified) & eligible
    true = set(ground_truth) & eligible
    if not true:
        return 0.0 if not found else None
    return len(found ^ true) / (2 * len(true))


def calibrate_constant(
    w_local: np.ndarray,
    ws: WeightSequence,
    n: int,
    truth: np.ndarray,
    t_n: float,
    min_precision: float = CALIBRATION_MIN_PRECISION,
) -> CalibrationReport:
    """
    Fits C on one labeled replica.

    On the restricted set the flag is ratio_a > C with ratio_a =
    W(a) w_a sqrt(log n) / n. Flagging the top j of the decreasing ratios,
    the cut with the highest recall whose precision is at least
    ``min_precision`` is kept, the smallest such j on ties. Without a
    feasible cut the one with the fewest errors (FP + FN) is used. C is the
    geometric midpoint of the ratios on both sides of the cut.
    """
    if not 0.0 < min_precision <= 1.0:
        raise ParameterError(f"min_precision must lie in (0, 1], got {min_precision}")
    if n < MIN_IDENTIFICATION_N:
        raise ParameterError(f"calibration needs n >= {MIN_IDENTIFICATION_N}, got {n}")
    eligible = ws.values >= t_n
    ratios = np.asarray(w_local)[eligible] * ws.values[eligible] * math.sqrt(math.log(n)) / n
    labels = np.asarray(truth, dtype=bool)[eligible]
    if ratios.size == 0:
        raise ParameterError(f"no vertex has weight >= t_n={t_n}")

    order = np.argsort(-ratios, kind="stable")
    ratios, labels = ratios[order], labels[order]
    flagged = np.arange(ratios.size + 1)
    true_positive = np.concatenate([[0], np.cumsum(labels)])
    positives = int(labels.sum())
    errors = (flagged - true_positive) + (positives - true_positive)
    precision = np.divide(
        true_positive, flagged, out=np.zeros(flagged.size, dtype=np.float64), where=flagged > 0
    )
    feasible = (flagged > 0) & (precision >= min_precision)
    if positives and feasible.any():
        best = true_positive[feasible].max()
        cut = int(np.flatnonzero(feasible & (true_positive == best))[0])
    else:
        logger.warning(f"No cut reaches precision {min_precision:g}; falling back to fewest errors")
        cut = int(np.argmin(errors))

    upper = ratios[cut - 1] if cut > 0 else None
    lower = ratios[cut] if cut < ratios.size else None
    constant = _cut_constant(upper, lower)
    recall = true_positive[cut] / positives if positives else None
    logger.info(
        f"Calibrated threshold constant {constant:.6g}: {cut} flagged, "
        f"{int(errors[cut])} errors, recall={recall}"
    )
    return CalibrationReport(
        threshold_constant=constant,
        t_n=float(t_n),
        restricted_size=int(ratios.size),
        restricted_community=int(labels.sum()),
        errors=int(errors[cut]),
        min_precision=float(min_precision),
        precision=float(precision[cut]) if cut > 0 else None,
        recall=float(recall) if recall is not None else None,
    )


def _cut_constant(upper: Optional[float], lower: Optional[float]) -> float:
    """A constant strictly between the last flagged and the first unflagged ratio."""
    if upper is None and lower is None:
        return 1.0
    if upper is None:
        return lower * 2.0 if lower > 0 else 1.0
    if lower is None or lower <= 0:
        return upper / 2.0 if upper > 0 else 1.0
    return math.sqrt(upper * lower)


# ==================== Size Estimation ====================


def estimate_k(identified_weights: Iterable[float], tau: float, M: int) -> SizeEstimateReport:
    """k_m = m X_(m)^(tau - 1) for m = 1..min(M, available)."""
    validate_power_law(tau, 1.0)
    if M < 1:
        raise ParameterError(f"M must be >= 1, got {M}")
    ordered = np.sort(np.asarray(list(identified_weights), dtype=np.float64))[::-1]
    m_used = min(M, ordered.size)
    top = ordered[:m_used]
    estimates = np.arange(1, m_used + 1) * top ** (tau - 1.0)

    warning = None
    if m_used < M:
        warning = FEWER_THAN_M_WARNING.format(available=m_used, requested=M)
        logger.warning(warning)
    return SizeEstimateReport(
        tau=tau,
        m_requested=M,
        m_used=m_used,
        order_stats=top.tolist(),
        estimates=estimates.tolist(),
        warning=warning,
    )


# ==================== Pipeline ====================


def run_pipeline(
    graph: Graph,
    ws: WeightSequence,
    f_mode: FMode = FMode.LOG_N,
    f_custom: Optional[float] = None,
    constant: float = DEFAULT_CALIBRATION_CONSTANT,
    t_n: Optional[float] = None,
    k: Optional[int] = None,
    M: int = DEFAULT_M,
    truth: Optional[np.ndarray] = None,
    jobs: int = 1,
) -> PipelineReport:
    """detect -> identify -> estimate_k; estimate_k consumes the identified set."""
    stats = compute_statistics(graph, ws, jobs)
    detection = detect(stats.w_global, graph.n, f_mode, f_custom)
    cutoff = t_n if t_n is not None else max(default_t_n(graph.n, k, ws.tau), ws.w0)
    identification = identify(stats.per_vertex, ws, graph.n, constant, cutoff, truth)
    if detection.decision is Decision.KEEP_H0:
        logger.warning(KEEP_H0_CAVEAT)
        identification = identification.model_copy(update={"caveat": KEEP_H0_CAVEAT})
    size_estimate = estimate_k(ws.values[identification.identified], ws.tau, M)
    return PipelineReport(
        detection=detection, identification=identification, size_estimate=size_estimate
    )

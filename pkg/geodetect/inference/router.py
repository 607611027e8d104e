"""
Inference Router

Commands:
- detect: weighted-triangle test on a graph, or on a given W value
- identify: per-vertex flags, identification.json and identification.csv
- calibrate-C: threshold constant fitted on a labeled sample
- estimate-k: community size from the weights of identified vertices
- pipeline: detect, identify and estimate-k chained on one graph
"""

import csv
import json
import logging
from pathlib import Path

from geodetect.core.config import Settings
from geodetect.core.deps import emit, get_output_dir, input_params, load_graph_and_weights
from geodetect.core.exceptions import DataFormatError, ParameterError
from geodetect.core.provenance import UNSPECIFIED_PARAMS, header_line
from geodetect.core.routing import CommandRouter, argument
from geodetect.inference.constants import (
    CALIBRATION_MIN_PRECISION,
    CALIBRATION_JSON,
    DETECTION_JSON,
    IDENTIFICATION_CSV,
    IDENTIFICATION_JSON,
    PIPELINE_JSON,
    SIZE_ESTIMATE_JSON,
)
from geodetect.inference.schemas import FMode, IdentificationReport
from geodetect.inference.service import (
    calibrate_constant,
    default_t_n,
    detect,
    estimate_k,
    identify,
    run_pipeline,
)
from geodetect.triangles.service import compute_statistics, weighted_triangles
from geodetect.weights.file_operations import WeightFileOperations
from geodetect.weights.schemas import WeightSequence

logger = logging.getLogger(__name__)

router = CommandRouter()

INPUT_ARGUMENTS = (
    argument("--graph", help="edge-list file"),
    argument("--weights", help="weights file"),
    argument("--truth", help="ground-truth file with the A/B type column"),
    argument("--tau", type=float),
    argument("--w0", type=float),
)
DETECTION_ARGUMENTS = (
    argument("--f-mode", choices=[mode.value for mode in FMode]),
    argument("--f-custom", type=float, help="threshold for --f-mode custom"),
)
IDENTIFICATION_ARGUMENTS = (
    argument("--calib-C", dest="calib_c", type=float, help="threshold constant C"),
    argument("--t-n", dest="t_n", type=float, help="weight cutoff of the restricted view"),
    argument("--k", type=int, help="community size, used only for the default t_n"),
)


def _load_inputs(args, settings: Settings):
    if not args.graph or not args.weights:
        raise ParameterError("--graph and --weights are required")
    return load_graph_and_weights(
        args.graph, args.weights, _pick(args.tau, settings.TAU), _pick(args.w0, settings.W0), args.truth
    )


def _pick(value, default):
    return default if value is None else value


def _resolve_t_n(args, settings: Settings, ws: WeightSequence) -> float:
    explicit = _pick(args.t_n, settings.T_N)
    if explicit is not None:
        return explicit
    return max(default_t_n(ws.n, args.k, ws.tau), ws.w0)


def _write_identification_csv(report: IdentificationReport, path: Path, canonical: str) -> None:
    columns = ["vertex", "weight", "W_a", "flag"] + (["truth"] if report.truth is not None else [])
    try:
        with open(path, "w", newline="") as handle:
            handle.write(header_line(canonical) + "\n")
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(columns)
            writer.writerows(report.rows())
    except OSError as e:
        logger.error(f"Failed to write {path}: {e}")
        raise


@router.command(
    "detect",
    *INPUT_ARGUMENTS,
    *DETECTION_ARGUMENTS,
    argument("--w-value", type=float, help="test a given W instead of a graph"),
    argument("--n", type=int, help="vertex count for --w-value"),
    help="weighted-triangle detection test",
)
def detect_command(args, settings: Settings) -> int:
    if args.w_value is not None:
        if args.n is None:
            raise ParameterError("--w-value needs --n")
        w_value, n = args.w_value, args.n
        params = UNSPECIFIED_PARAMS
    else:
        graph, ws, _ = _load_inputs(args, settings)
        w_value, n = weighted_triangles(graph, ws, settings.JOBS), graph.n
        params = input_params(args.graph)

    report = detect(w_value, n, _pick(args.f_mode, settings.F_MODE), _pick(args.f_custom, settings.F_CUSTOM))
    emit(
        report.model_dump(mode="json"), get_output_dir(settings) / DETECTION_JSON,
        params=params, seed=settings.SEED,
    )
    return 0


@router.command(
    "identify",
    *INPUT_ARGUMENTS,
    *IDENTIFICATION_ARGUMENTS,
    help="flag community vertices by their localized statistic",
)
def identify_command(args, settings: Settings) -> int:
    graph, ws, truth = _load_inputs(args, settings)
    stats = compute_statistics(graph, ws, settings.JOBS)
    t_n = _resolve_t_n(args, settings, ws)
    report = identify(stats.per_vertex, ws, graph.n, _pick(args.calib_c, settings.CALIB_C), t_n, truth)

    out = get_output_dir(settings)
    canonical = input_params(args.graph)
    _write_identification_csv(report, out / IDENTIFICATION_CSV, canonical)
    emit(report.model_dump(mode="json"), out / IDENTIFICATION_JSON, params=canonical, seed=settings.SEED)
    return 0


@router.command(
    "calibrate-C",
    *INPUT_ARGUMENTS,
    argument("--t-n", dest="t_n", type=float),
    argument("--k", type=int, help="community size, used only for the default t_n"),
    argument(
        "--min-precision",
        dest="min_precision",
        type=float,
        default=CALIBRATION_MIN_PRECISION,
        help="precision floor of the calibrated cut",
    ),
    help="fit the identification constant on a labeled sample",
)
def calibrate_command(args, settings: Settings) -> int:
    graph, ws, truth = _load_inputs(args, settings)
    if truth is None:
        raise ParameterError("calibration needs ground truth (--truth or a typed weights file)")
    stats = compute_statistics(graph, ws, settings.JOBS)
    report = calibrate_constant(
        stats.per_vertex, ws, graph.n, truth, _resolve_t_n(args, settings, ws), args.min_precision
    )
    emit(
        report.model_dump(mode="json"), get_output_dir(settings) / CALIBRATION_JSON,
        params=input_params(args.graph), seed=settings.SEED,
    )
    return 0


@router.command(
    "estimate-k",
    argument("--weights", required=True, help="weights file"),
    argument("--identification", required=True, help=f"{IDENTIFICATION_JSON} written by identify"),
    argument("--tau", type=float),
    argument("--M", dest="M", type=int, help="number of order statistics"),
    help="estimate the community size from identified weights",
)
def estimate_k_command(args, settings: Settings) -> int:
    values = WeightFileOperations().load(Path(args.weights)).values
    try:
        document = json.loads(Path(args.identification).read_text())
        identified = document["identified"]
        params = document.get("params", UNSPECIFIED_PARAMS)
    except OSError as e:
        logger.error(f"Failed to read {args.identification}: {e}")
        raise
    except (ValueError, KeyError, TypeError) as e:
        raise DataFormatError(args.identification, None, f"not an identification report: {e}")
    if any(not isinstance(v, int) or not 0 <= v < values.size for v in identified):
        raise DataFormatError(args.identification, None, f"identified ids must lie in [0, {values.size})")

    report = estimate_k(values[identified], _pick(args.tau, settings.TAU), _pick(args.M, settings.M))
    emit(
        report.model_dump(mode="json"), get_output_dir(settings) / SIZE_ESTIMATE_JSON,
        params=params, seed=settings.SEED,
    )
    return 0


@router.command(
    "pipeline",
    *INPUT_ARGUMENTS,
    *DETECTION_ARGUMENTS,
    *IDENTIFICATION_ARGUMENTS,
    argument("--M", dest="M", type=int),
    help="detect, identify and estimate-k on one graph",
)
def pipeline_command(args, settings: Settings) -> int:
    graph, ws, truth = _load_inputs(args, settings)
    report = run_pipeline(
        graph,
        ws,
        f_mode=_pick(args.f_mode, settings.F_MODE),
        f_custom=_pick(args.f_custom, settings.F_CUSTOM),
        constant=_pick(args.calib_c, settings.CALIB_C),
        t_n=_pick(args.t_n, settings.T_N),
        k=args.k,
        M=_pick(args.M, settings.M),
        truth=truth,
        jobs=settings.JOBS,
    )
    emit(
        report.model_dump(mode="json"), get_output_dir(settings) / PIPELINE_JSON,
        params=input_params(args.graph), seed=settings.SEED,
    )
    return 0

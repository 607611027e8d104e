"""
Command Dependencies

Shared helpers the feature routers resolve their inputs with: output
directory, model parameters from flags and settings, input files, and the
JSON result echo.
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from geodetect.core.config import Settings
from geodetect.core.exceptions import DataFormatError
from geodetect.core.provenance import UNSPECIFIED_PARAMS
from geodetect.core.routing import argument
from geodetect.generators.schemas import ModelParams
from geodetect.graph.file_operations import EdgeListFileOperations
from geodetect.graph.structure import Graph
from geodetect.weights.constants import TYPE_B
from geodetect.weights.file_operations import WeightFileOperations
from geodetect.weights.schemas import WeightMode, WeightSequence

logger = logging.getLogger(__name__)

# Model flags shared by `generate` and `experiment`; unset flags fall back to the settings
MODEL_ARGUMENTS = (
    argument("--tau", type=float, help="power-law exponent in (2, 3)"),
    argument("--w0", type=float, help="minimum weight"),
    argument("--d", type=int, help="torus dimension"),
    argument("--gamma", help="distance decay exponent > 1, or inf for the threshold rule"),
    argument("--weight-mode", choices=[mode.value for mode in WeightMode]),
    argument("--sparse", action="store_true", help="sparse community rule, no correction factor"),
    argument("--no-correction", action="store_true", help="drop the 1/(1+C1) factor (debug)"),
    argument("--correct-type-a-pairs", action="store_true", help="also scale non-community pairs"),
)


def get_output_dir(settings: Settings) -> Path:
    out = Path(settings.OUT)
    out.mkdir(parents=True, exist_ok=True)
    return out


def get_results_db_path(settings: Settings) -> Path:
    return Path(settings.OUT) / settings.RESULTS_DB


def model_params_from_args(args, settings: Settings, k: int = 0) -> ModelParams:
    """Model record from CLI flags, falling back to the settings defaults."""

    def pick(name: str, default):
        value = getattr(args, name, None)
        return default if value is None else value

    return ModelParams(
        n=args.n,
        k=k,
        tau=pick("tau", settings.TAU),
        w0=pick("w0", settings.W0),
        d=pick("d", settings.D),
        gamma=pick("gamma", settings.GAMMA),
        seed=settings.SEED,
        sparse_mode=bool(getattr(args, "sparse", False)),
        weight_mode=WeightMode(pick("weight_mode", settings.WEIGHT_MODE)),
        apply_correction=not getattr(args, "no_correction", False),
        correct_type_a_pairs=bool(getattr(args, "correct_type_a_pairs", False)),
    )


def load_graph_and_weights(
    graph_path: Path,
    weights_path: Path,
    tau: float,
    w0: float,
    truth_path: Optional[Path] = None,
) -> Tuple[Graph, WeightSequence, Optional[np.ndarray]]:
    """
    Reads an edge list and the weights file of the same vertices.

    Args:
        graph_path: Edge-list file
        weights_path: Weights file; its type column, if any, is the ground truth
        tau: Power-law exponent of the weights
        w0: Minimum weight; lowered to the smallest weight in the file
        truth_path: Optional ground-truth file, overrides the weights type column

    Returns:
        (graph, weights, community mask or None)
    """
    file_ops = WeightFileOperations()
    contents = file_ops.load(Path(weights_path))
    graph = EdgeListFileOperations().load(Path(graph_path), n=len(contents.values))
    ws = WeightSequence(values=contents.values, tau=tau, w0=min(w0, float(np.min(contents.values))))

    types = contents.types
    if truth_path is not None:
        truth_contents = file_ops.load(Path(truth_path))
        if len(truth_contents.values) != graph.n or truth_contents.types is None:
            raise DataFormatError(truth_path, None, f"ground truth must label all {graph.n} vertices")
        types = truth_contents.types
    truth = None if types is None else np.array([t == TYPE_B for t in types], dtype=bool)

    logger.info(f"Loaded graph n={graph.n}, m={graph.m} with weights from {weights_path}")
    return graph, ws, truth


def input_params(graph_path: Path) -> str:
    """Canonical parameter string from the header of an input edge list."""
    return EdgeListFileOperations().read_header(Path(graph_path)) or UNSPECIFIED_PARAMS


def emit(payload: Dict[str, Any], path: Optional[Path] = None, *, params: str, seed: int) -> None:
    """
    Prints the JSON result on stdout and, when given, writes it to ``path``.

    The document always starts with the canonical parameter string and the
    seed of the run.
    """
    text = json.dumps({"params": params, "seed": seed, **payload}, indent=2)
    if path is not None:
        try:
            Path(path).write_text(text + "\n")
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise
    print(text)

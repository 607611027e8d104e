"""
Generators Router

`generate`: samples one graph and writes the edge list, the weights file and
the ground-truth file under --out.
"""

import logging

from geodetect.core.config import Settings
from geodetect.core.deps import MODEL_ARGUMENTS, emit, get_output_dir, model_params_from_args
from geodetect.core.exceptions import ParameterError
from geodetect.core.routing import CommandRouter, argument
from geodetect.generators.constants import EDGES_FILENAME, GROUND_TRUTH_FILENAME, WEIGHTS_FILENAME
from geodetect.generators.service import sample_model
from geodetect.graph.file_operations import EdgeListFileOperations
from geodetect.weights.constants import TYPE_A, TYPE_B
from geodetect.weights.file_operations import WeightFileOperations

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command(
    "generate",
    argument("--hypothesis", choices=["H0", "H1"], default="H0"),
    argument("--n", type=int, required=True, help="vertex count"),
    argument("--k", type=int, default=0, help="community size (H1 only)"),
    *MODEL_ARGUMENTS,
    help="sample a graph under H0 or H1",
)
def generate_command(args, settings: Settings) -> int:
    if args.hypothesis == "H1" and args.k < 1:
        raise ParameterError("H1 needs a community size k >= 1; use --hypothesis H0 for the null model")
    if args.hypothesis == "H0" and args.k != 0:
        raise ParameterError(f"H0 has no community, got k={args.k}; use --hypothesis H1")

    params = model_params_from_args(args, settings, k=args.k)
    graph, ws, truth = sample_model(params)
    canonical = params.canonical()
    out = get_output_dir(settings)

    edges_path = EdgeListFileOperations().save(graph, out / EDGES_FILENAME, canonical)
    weight_ops = WeightFileOperations()
    weights_path = weight_ops.save(out / WEIGHTS_FILENAME, ws.values, canonical)
    k = truth.k if truth is not None else 0
    types = [TYPE_B if vertex < k else TYPE_A for vertex in range(graph.n)]
    truth_path = weight_ops.save(
        out / GROUND_TRUTH_FILENAME,
        ws.values,
        canonical,
        types=types,
        positions=truth.positions if truth is not None else None,
    )

    logger.info(f"Generated {args.hypothesis} graph with n={graph.n}, m={graph.m}, k={k}")
    emit({
        "hypothesis": args.hypothesis,
        "n": graph.n,
        "m": graph.m,
        "k": k,
        "files": [str(edges_path), str(weights_path), str(truth_path)],
    }, params=canonical, seed=params.seed)
    return 0

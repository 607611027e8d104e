"""
Triangles Router

`stats`: triangle count, W(G) and optionally every W(a) of a graph file.
"""

import csv
import logging

from geodetect.core.config import Settings
from geodetect.core.deps import emit, get_output_dir, input_params, load_graph_and_weights
from geodetect.core.provenance import header_line
from geodetect.core.routing import CommandRouter, argument
from geodetect.triangles.constants import PER_VERTEX_COLUMNS, PER_VERTEX_FILENAME, STATS_FILENAME
from geodetect.triangles.service import compute_statistics

logger = logging.getLogger(__name__)

router = CommandRouter()


@router.command(
    "stats",
    argument("--graph", required=True, help="edge-list file"),
    argument("--weights", required=True, help="weights file"),
    argument("--tau", type=float),
    argument("--w0", type=float),
    argument("--per-vertex", action="store_true", help=f"also write {PER_VERTEX_FILENAME}"),
    help="weighted triangle statistics of a graph",
)
def stats_command(args, settings: Settings) -> int:
    tau = args.tau if args.tau is not None else settings.TAU
    w0 = args.w0 if args.w0 is not None else settings.W0
    graph, ws, _ = load_graph_and_weights(args.graph, args.weights, tau, w0)
    stats = compute_statistics(graph, ws, jobs=settings.JOBS)
    out = get_output_dir(settings)
    canonical = input_params(args.graph)

    if args.per_vertex:
        path = out / PER_VERTEX_FILENAME
        try:
            with open(path, "w", newline="") as handle:
                handle.write(header_line(canonical) + "\n")
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(PER_VERTEX_COLUMNS)
                for vertex, (weight, w_a) in enumerate(zip(ws.values.tolist(), stats.per_vertex.tolist())):
                    writer.writerow([vertex, repr(weight), repr(w_a)])
        except OSError as e:
            logger.error(f"Failed to write {path}: {e}")
            raise

    emit(stats.summary(), out / STATS_FILENAME, params=canonical, seed=settings.SEED)
    return 0

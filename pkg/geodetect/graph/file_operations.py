"""
Edge List File Operations

Edge-list files hold one edge per line as ``u v`` (u < v, 0-indexed,
lexicographically sorted) under a provenance header. Lines starting with
``#`` are comments; ``# vertices: <n>`` fixes the vertex count.
"""

import logging
from pathlib import Path
from typing import Optional

import numpy as np

from geodetect.core.exceptions import DataFormatError, ParameterError
from geodetect.core.provenance import (
    COMMENT_PREFIX,
    VERTICES_TEMPLATE,
    header_line,
    parse_header,
    parse_vertex_count,
)
from geodetect.graph.structure import Graph

logger = logging.getLogger(__name__)


class EdgeListFileOperations:
    """Handles edge-list files."""

    def save(self, graph: Graph, path: Path, canonical: str = "unspecified") -> Path:
        path = Path(path)
        lines = [header_line(canonical), VERTICES_TEMPLATE.format(n=graph.n)]
        lines.extend(f"{u} {v}" for u, v in graph.edges().tolist())
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text("\n".join(lines) + "\n")
        except OSError as e:
            logger.error(f"Failed to write edge list {path}: {e}")
            raise
        logger.debug(f"Wrote {graph.m} edges to {path}")
        return path

    def load(self, path: Path, n: Optional[int] = None) -> Graph:
        """
        Loads an edge list into canonical form.

        Args:
            path: Edge-list file
            n: Vertex count; overrides the ``# vertices`` comment. When neither
                is present, n is one more than the largest id.

        Returns:
            Graph
        """
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            logger.error(f"Failed to read edge list {path}: {e}")
            raise

        declared_n = None
        edges = []
        line_numbers = []
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith(COMMENT_PREFIX):
                if declared_n is None:
                    declared_n = parse_vertex_count(line)
                continue
            edges.append(self._parse_edge(path, line_number, line))
            line_numbers.append(line_number)

        vertex_count = n if n is not None else declared_n
        if vertex_count is None:
            vertex_count = (max(max(u, v) for u, v in edges) + 1) if edges else 0

        for (u, v), line_number in zip(edges, line_numbers):
            if max(u, v) >= vertex_count:
                raise DataFormatError(
                    path, line_number, f"vertex id {max(u, v)} outside [0, {vertex_count})"
                )

        try:
            return Graph.from_edge_list(vertex_count, np.array(edges, dtype=np.int64).reshape(-1, 2))
        except ParameterError as e:
            raise DataFormatError(path, None, str(e))

    def read_header(self, path: Path) -> Optional[str]:
        """Canonical parameter string from the first header line, if any."""
        with open(path) as handle:
            for raw in handle:
                if not raw.startswith(COMMENT_PREFIX):
                    return None
                canonical = parse_header(raw.strip())
                if canonical is not None:
                    return canonical
        return None

    @staticmethod
    def _parse_edge(path: Path, line_number: int, line: str):
        fields = line.split()
        if len(fields) != 2:
            raise DataFormatError(path, line_number, f"expected 'u v', got {line!r}")
        try:
            u, v = int(fields[0]), int(fields[1])
        except ValueError:
            raise DataFormatError(path, line_number, f"non-integer vertex id in {line!r}")
        if u < 0 or v < 0:
            raise DataFormatError(path, line_number, f"negative vertex id in {line!r}")
        if u == v:
            raise DataFormatError(path, line_number, f"self-loop {line!r}")
        return u, v

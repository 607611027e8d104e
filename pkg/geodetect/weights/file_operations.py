"""
Weight File Operations

Reads and writes weights files (``id<TAB>weight[<TAB>A|B]``) and
ground-truth files (weights format plus ``x_1 ... x_d`` for community rows).
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from geodetect.core.exceptions import DataFormatError
from geodetect.core.provenance import COMMENT_PREFIX, header_line, parse_header
from geodetect.weights.constants import FIELD_SEPARATOR, TYPE_B, VERTEX_TYPES
from geodetect.weights.schemas import WeightFileContents

logger = logging.getLogger(__name__)


class WeightFileOperations:
    """
    Handles weights and ground-truth files.

    Floats are written with repr() so a load after a save reproduces every
    weight bit-exactly.
    """

    def save(
        self,
        path: Path,
        values: np.ndarray,
        canonical: str,
        types: Optional[Sequence[str]] = None,
        positions: Optional[np.ndarray] = None,
    ) -> Path:
        """
        Writes one row per vertex.

        Args:
            path: Target file
            values: Weight per vertex id
            canonical: Canonical parameter string for the header
            types: Optional A/B label per vertex
            positions: Optional (k, d) array; row v is the position of vertex v,
                written only on rows labelled B

        Returns:
            The written path
        """
        path = Path(path)
        lines = [header_line(canonical)]
        for vertex, weight in enumerate(np.asarray(values, dtype=np.float64).tolist()):
            fields = [str(vertex), repr(weight)]
            if types is not None:
                fields.append(types[vertex])
                if positions is not None and types[vertex] == TYPE_B:
                    fields.extend(repr(x) for x in positions[vertex].tolist())
            lines.append(FIELD_SEPARATOR.join(fields))

        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text("\n".join(lines) + "\n")
        except OSError as e:
            logger.error(f"Failed to write weights file {path}: {e}")
            raise
        return path

    def load(self, path: Path) -> WeightFileContents:
        """Parses a weights or ground-truth file; ids must cover 0..n-1 exactly once."""
        path = Path(path)
        try:
            text = path.read_text()
        except OSError as e:
            logger.error(f"Failed to read weights file {path}: {e}")
            raise

        header = None
        rows = {}
        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith(COMMENT_PREFIX):
                header = header or parse_header(line)
                continue
            vertex, row = self._parse_row(path, line_number, line)
            if vertex in rows:
                raise DataFormatError(path, line_number, f"duplicate vertex id {vertex}")
            rows[vertex] = row

        if not rows:
            raise DataFormatError(path, None, "no weight rows found")
        n = len(rows)
        if set(rows) != set(range(n)):
            raise DataFormatError(path, None, f"vertex ids must cover 0..{n - 1} exactly")

        ordered = [rows[v] for v in range(n)]
        values = np.array([row[0] for row in ordered], dtype=np.float64)
        types = self._collect_types(path, ordered)
        positions = self._collect_positions(path, ordered, types)
        return WeightFileContents(values=values, types=types, positions=positions, header=header)

    # ==================== Parsing Helpers ====================

    @staticmethod
    def _parse_row(path: Path, line_number: int, line: str):
        fields = line.split()
        if len(fields) < 2:
            raise DataFormatError(path, line_number, f"expected 'id weight', got {line!r}")
        try:
            vertex = int(fields[0])
            weight = float(fields[1])
        except ValueError:
            raise DataFormatError(path, line_number, f"non-numeric id or weight in {line!r}")
        if vertex < 0:
            raise DataFormatError(path, line_number, f"negative vertex id {vertex}")
        if not np.isfinite(weight) or weight <= 0:
            raise DataFormatError(path, line_number, f"weight must be positive, got {fields[1]}")

        kind = None
        coords: List[float] = []
        if len(fields) >= 3:
            kind = fields[2]
            if kind not in VERTEX_TYPES:
                raise DataFormatError(path, line_number, f"type must be A or B, got {kind!r}")
            try:
                coords = [float(x) for x in fields[3:]]
            except ValueError:
                raise DataFormatError(path, line_number, f"non-numeric position in {line!r}")
            if any(not (0.0 <= x < 1.0) for x in coords):
                raise DataFormatError(path, line_number, "positions must lie in [0, 1)")
        return vertex, (weight, kind, coords)

    @staticmethod
    def _collect_types(path: Path, ordered) -> Optional[List[str]]:
        kinds = [row[1] for row in ordered]
        if all(kind is None for kind in kinds):
            return None
        if any(kind is None for kind in kinds):
            raise DataFormatError(path, None, "type column must be present on every row or none")
        return kinds

    @staticmethod
    def _collect_positions(path: Path, ordered, types) -> Optional[np.ndarray]:
        if types is None:
            return None
        community = [row[2] for row, kind in zip(ordered, types) if kind == TYPE_B]
        if not community or not community[0]:
            return None
        d = len(community[0])
        if any(len(coords) != d for coords in community):
            raise DataFormatError(path, None, "community rows must all carry d coordinates")
        community_ids = [v for v, kind in enumerate(types) if kind == TYPE_B]
        if community_ids != list(range(len(community_ids))):
            raise DataFormatError(path, None, "community vertices must occupy ids 0..k-1")
        return np.array(community, dtype=np.float64)

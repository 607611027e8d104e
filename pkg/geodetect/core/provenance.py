"""
Provenance Headers

Every emitted file starts with a comment line naming the format version and
the canonical parameter string of the run that produced it.
"""

from typing import Optional


FORMAT_VERSION = "v1"
COMMENT_PREFIX = "#"
HEADER_TEMPLATE = "# geodetect {version} params: {canonical}"
VERTICES_TEMPLATE = "# vertices: {n}"
UNSPECIFIED_PARAMS = "unspecified"


def header_line(canonical: str, version: str = FORMAT_VERSION) -> str:
    return HEADER_TEMPLATE.format(version=version, canonical=canonical)


def parse_header(line: str) -> Optional[str]:
    """Returns the canonical parameter string of a header line, or None."""
    marker = " params: "
    if not line.startswith("# geodetect ") or marker not in line:
        return None
    return line.split(marker, 1)[1].strip()


def parse_vertex_count(line: str) -> Optional[int]:
    prefix = "# vertices:"
    if not line.startswith(prefix):
        return None
    try:
        return int(line[len(prefix):].strip())
    except ValueError:
        return None

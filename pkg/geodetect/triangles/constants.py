"""
Triangles Constants

Centralized output names for the `stats` command.
"""

STATS_FILENAME = "stats.json"
PER_VERTEX_FILENAME = "per_vertex.csv"
PER_VERTEX_COLUMNS = ("vertex", "weight", "W_a")

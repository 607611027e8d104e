"""
Weights Constants

Centralized constants for power-law weight sequences.
"""

# Admissible tail exponent (open interval)
TAU_MIN = 2.0
TAU_MAX = 3.0

# Assumption check on the empirical tail
TAIL_LOWER_FACTOR = 2.0  # scan starts at 2 * w0
TAIL_TOLERANCE = 0.05
TAIL_GRID_POINTS = 200

# Vertex types in weights / ground-truth files
TYPE_A = "A"  # outside the community
TYPE_B = "B"  # community member
VERTEX_TYPES = (TYPE_A, TYPE_B)

FIELD_SEPARATOR = "\t"

"""
Generators Constants

Centralized limits for the graph samplers.
"""

# Naive O(n^2) pair enumeration is only allowed up to this size
NAIVE_MAX_N = 2000

# Initial capacity of the edge buffers grown inside the numba kernels
INITIAL_EDGE_CAPACITY = 1024

# Output file names written by `generate`
EDGES_FILENAME = "edges.txt"
WEIGHTS_FILENAME = "weights.tsv"
GROUND_TRUTH_FILENAME = "ground_truth.tsv"

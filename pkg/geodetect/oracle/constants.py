"""
Oracle Constants

Pre-registered sizes, replica counts and pass thresholds of the checks.
"""

# Pass rule
Z_THRESHOLD = 3.0
R_SQUARED_THRESHOLD = 0.99
DEGREE_SLACK = 0.10

# Brute-force guards
NAIVE_TRIANGLE_MAX_N = 2000
EXACT_MEAN_MAX_N = 400

# Replica minimums
MIN_MARGINAL_REPLICAS = 10_000
MIN_DEGREE_REPLICAS = 100

# Marginal-probability suite
MARGINAL_REPLICAS = 100_000
MARGINAL_K = 1_000
LINEARITY_GRID = (0.02, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4)  # values of 2^d w_i w_j / (mu k)

# Expected-degree suite
DEGREE_PROBES = (10.0, 30.0, 100.0)
DEGREE_REPLICAS = 100
DEGREE_N = 1_000_000
DEGREE_K = 20_000
QUICK_DEGREE_N = 100_000
QUICK_DEGREE_K = 2_000
QUICK_DEGREE_PROBES = (10.0, 30.0)

# Triangle and exact-mean suite
EQUIVALENCE_GRAPHS = 50
EQUIVALENCE_N = 200
EXACT_MEAN_N = 300
EXACT_MEAN_REPLICAS = 2000
QUICK_EXACT_MEAN_REPLICAS = 200

REPORT_FILENAME = "oracle_report.json"

ORACLE_FAILURE_EXIT_CODE = 3

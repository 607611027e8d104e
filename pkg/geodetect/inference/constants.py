"""
Inference Constants

Centralized defaults for detection, identification and size estimation.
"""

# Detection
NULL_QUANTILE_LEVEL = 0.95

# Identification
DEFAULT_CALIBRATION_CONSTANT = 1.0
CALIBRATION_MIN_PRECISION = 0.75
MIN_IDENTIFICATION_N = 3
UNKNOWN_K_T_N_FACTOR = 2.0
THRESHOLD_CURVE_POINTS = 100

# Size estimation
DEFAULT_M = 20

# Caveats and warnings
KEEP_H0_CAVEAT = "detection kept H0; identified vertices may be spurious"
FEWER_THAN_M_WARNING = "only {available} identified vertices for M={requested}"

# Output file names
IDENTIFICATION_CSV = "identification.csv"
IDENTIFICATION_JSON = "identification.json"
DETECTION_JSON = "detection.json"
CALIBRATION_JSON = "calibration.json"
SIZE_ESTIMATE_JSON = "size_estimate.json"
PIPELINE_JSON = "pipeline.json"

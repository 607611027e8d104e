"""
Experiments Constants

Parameter presets of the three reference experiments at desk and paper scale.
"""

# Model parameters shared by every preset
BASE_MODEL = {"tau": 2.5, "w0": 1.0, "d": 2, "gamma": 5.0}

PRESETS = {
    "fig1": {
        "desk": {"n": 10_000, "ks": [100, 200, 300], "replicas": 200},
        "paper": {"n": 10_000, "ks": [100, 200, 300], "replicas": 10_000},
    },
    "fig2": {
        "desk": {"n": 100_000, "k": 5_000, "replicas": 5, "t_n": 20.0},
        "paper": {"n": 1_000_000, "k": 10_000, "replicas": 1, "t_n": 20.0},
    },
    "fig3": {
        "desk": {"n": 100_000, "k": 5_000, "d": 1, "replicas": 15, "t_n": 20.0, "M": 20},
        "paper": {"n": 1_000_000, "k": 10_000, "d": 1, "replicas": 15, "t_n": 20.0, "M": 20},
    },
    "custom": {
        "desk": {"n": 10_000, "k": 300, "replicas": 50},
        "paper": {"n": 10_000, "k": 300, "replicas": 1_000},
    },
}

# Replica index of the labeled calibration sample, disjoint from evaluation indices
CALIBRATION_REPLICA = 1 << 40

# m range used to summarize size estimates
SUMMARY_MIN_M = 5

STATUS_OK = "ok"
STATUS_FAILED = "failed"
HYPOTHESIS_H0 = "H0"
HYPOTHESIS_H1 = "H1"

SUMMARY_FILENAME = "{experiment}_summary.json"
FIG1_VALUES_FILENAME = "fig1_w_values.csv"
FIG2_VERTICES_FILENAME = "fig2_vertices.csv"
FIG2_CURVE_FILENAME = "fig2_threshold_curve.csv"
FIG3_ESTIMATES_FILENAME = "fig3_estimates.csv"
FIG3_MEANS_FILENAME = "fig3_means.csv"
CUSTOM_VALUES_FILENAME = "custom_w_values.csv"

# Identification cutoff when a run does not set t_n
DEFAULT_T_N = 20.0

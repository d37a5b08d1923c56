"""
Application constants and configuration defaults
"""

APP_NAME = "discourse-dynamics"

# File names written to the output directory
LOG_FILE = "discourse-dynamics.log"
SERIES_DIR = "series"
PLOTS_DIR = "plots"
REPORT_CSV_FILE = "report.csv"
REPORT_JSON_FILE = "report.json"
SUMMARY_JSON_FILE = "summary.json"
AFA_RESULT_FILE = "afa.json"
AFA_SCALING_FILE = "afa_scaling.csv"
GRANGER_RESULT_FILE = "granger.json"

# Series construction, bi-annual bins and a five year smoothing window
DEFAULT_BIN_WIDTH_DAYS = 730
DEFAULT_SMOOTHING_WINDOW_YEARS = 5.0
DAYS_PER_YEAR = 365.25

# Significance level used by every test
DEFAULT_ALPHA = 0.005

# Adaptive fractal analysis
DEFAULT_POLY_ORDER = 1
MIN_WINDOW_SIZE = 5
MIN_SERIES_LENGTH = 8
MIN_FIT_WINDOWS = 3

# Granger causality
DEFAULT_MAX_LAG = 8

# No-memory baseline for the Hurst exponent
NO_MEMORY_HURST = 0.5

# 95% normal quantile used for confidence bands and intervals
Z_95 = 1.96

DEFAULT_SEED = 20240101
DEFAULT_WORKERS = 4
DEFAULT_OUTPUT_DIR = "out"

# Random source recorded in synthetic output metadata
RNG_ALGORITHM = "PCG64"
VAR_BURN_IN = 500

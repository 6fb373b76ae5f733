# config.py
# ============================================================================
# Configuration and Constants
# ============================================================================

# APPLICATION SETTINGS
APP_TITLE = "SynergyReport"
APP_VERSION = "1.0"
APP_DESCRIPTION = "Redundant, unique and synergistic information among discrete predictors"
VERBOSE = False         # Emoji status lines on stderr (CLI --verbose)

# DISTRIBUTION NUMERICS
NORMALIZATION_TOLERANCE = 1e-9    # Tables must sum to 1 within this
ZERO_PROBABILITY = 1e-15          # Below this a mass counts as an exact zero
NEGATIVE_SLACK = 1e-12            # Rounding slack for "nonnegative" quantities

# OPTIMIZER DEFAULTS
DEFAULT_RESTARTS = 16
DEFAULT_MAX_ITERATIONS = 5000
DEFAULT_TOLERANCE_BITS = 1e-10
DEFAULT_FEASIBILITY_TOLERANCE = 1e-10
DEFAULT_SEED = 0
DEFAULT_WORKERS = 1
MAX_TOLERANCE_BITS = 1e-6

# OPTIMIZER INTERNALS
MAX_PROJECTION_ROUNDS = 200       # Alternating projection budget
ARMIJO_C1 = 1e-4
INITIAL_STEP = 1.0
MIN_STEP = 1e-12                  # Backtracking floor
STALL_ITERATIONS = 10             # Consecutive small changes before stopping
GRADIENT_ZERO_FLOOR = 1e-12       # Entries below this are held at 0
DIRECTION_FLOOR = 1e-14           # Projected directions shorter than this mean stationarity
RANK_TOLERANCE = 1e-10            # Relative pivot size for rank decisions
RAKE_ROUNDS = 500                 # Iterative proportional fitting sweeps
RAKE_TOLERANCE = 1e-13
DIRICHLET_CONCENTRATION = 1.0     # Restart perturbation strength

# UNION INFORMATION
MAX_INTERSECTION_PREDICTORS = 3   # 2^n - 1 optimizer calls
LOWER_BOUND_SLACK = 1e-6          # I_VK >= I_max - slack

# CIRCUIT DSL
CIRCUIT_EXTENSION = ".circ"
MAX_CIRCUIT_STATES = 2 ** 20
CIRCUITS_DIR = "circuits"

# FILE FORMATS
TSV_EXTENSION = ".tsv"
TSV_TARGET_COLUMN = "target"
TSV_PROBABILITY_COLUMN = "p"
RENORMALIZE_WINDOW = 1e-3         # --renormalize only rescales sums this close to 1
TABLE_DECIMALS = 6
JSON_INDENT = 2

# EXIT CODES
EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

# OUTPUT FORMATS
OUTPUT_FORMATS = ["table", "json"]
OUTPUT_FORMAT_DEFAULT = OUTPUT_FORMATS[0]

# EXAMPLE SUITE EXPECTATIONS (table1 --check)
# (s_max, wms, delta_i, s_vk); s_vk None means only an interval is known
TABLE1_EXPECTED = {
    "Rdn": (0.0, -1.0, 0.0, 0.0),
    "Unq": (1.0, 0.0, 0.0, 0.0),
    "Xor": (1.0, 1.0, 1.0, 1.0),
    "XorDuplicate": (1.0, 1.0, 1.0, 1.0),
    "XorLoses": (0.0, 0.0, 0.0, 0.0),
    "RdnXor": (1.0, 0.0, 1.0, 1.0),
    "And": (0.5, 0.189, 0.104, None),
    "RdnUnqXor": (2.0, 0.0, 1.0, 1.0),
    "AndDuplicate": (0.5, -0.123, 0.038, None),
    "XorMultiCoal": (1.0, 1.0, 1.0, 1.0),
}
TABLE1_TOLERANCE = 1e-3
TABLE1_INTERVAL_LOWER = 0.2704
TABLE1_INTERVAL_LOWER_TOLERANCE = 1e-4
TABLE1_INTERVAL_UPPER = 0.5
TABLE1_INTERVAL_UPPER_TOLERANCE = 1e-6

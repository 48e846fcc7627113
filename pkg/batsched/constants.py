import numpy as np

# numpy indexing code is written for np.intp
INT_DTYPE = np.intp

# absolute tolerance used for deadline comparisons and float equality checks
ERROR_TOLERANCE = 1.0e-9

ENABLE_JIT_CACHE = True
ENABLE_JIT = True

# number of terms of the correction series in the analytical battery model
DEFAULT_SERIES_TERMS = 10

# safety cap on the number of sequencing/allocation passes
DEFAULT_MAX_ITERATIONS = 50

# initial list-scheduling weight, either "current" or "energy"
DEFAULT_WEIGHT_MODE = "current"
WEIGHT_MODES = ("current", "energy")

# lifetime search: coarse scan followed by bisection down to LIFETIME_RESOLUTION minutes
LIFETIME_RESOLUTION = 1.0e-3
LIFETIME_SCAN_STEPS = 256
SURVIVES_PROFILE = "survives-profile"

# time discretization (minutes) of the min-energy knapsack
TIME_QUANTUM = 0.1

# maximum number of (sequence, assignment) pairs the exhaustive oracle will visit
ORACLE_BUDGET = 1_000_000
ORACLE_MAX_TASKS = 8
ORACLE_MAX_DESIGN_POINTS = 5

# synthetic design points: voltage scaling factors relative to the fastest design point
G3_SCALING_FACTORS = (1.0, 0.85, 0.68, 0.51, 0.33)

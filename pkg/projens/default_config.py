# -*- coding: utf-8 -*-

"""
 (c) 2026 - Copyright the projens contributors

Default configuration. Every key a run configuration may set is declared
here; any other key in a configuration file is rejected.

"""


# Master seed, every random stream of a run is derived from it
SEED = 0

# Folder receiving the run directory (config snapshot, CSV/JSON outputs)
OUTPUT_DIR = 'results'

# Number of independent (size, seed, variant) jobs run in parallel
JOBS = 1

# Level of the console and run-file log handlers
LOG_LEVEL = 'INFO'

# When set, errors are also sent by email to this address
MAIL_ADMIN = None
SMTP_SERVER = 'localhost'


# -- audit ------------------------------------------------------------------

# Audits run by the audit subcommand, among contraction, optimism,
# propagation and residuals
AUDIT_NAMES = ['contraction', 'optimism', 'propagation', 'residuals']

# Number of random MDPs for the contraction audit
AUDIT_TRIALS = 100
# Random return-table pairs drawn per MDP in the contraction audit
AUDIT_TABLE_PAIRS = 20
# Randomized (estimate, truth) cell pairs of the optimism audit
AUDIT_OPTIMISM_PAIRS = 10000
# Number of random MDPs for the propagation and residual audits
AUDIT_PROPAGATION_TRIALS = 50
AUDIT_RESIDUAL_TRIALS = 10

# Shape of the sampled MDPs; rewards live in [0, 1]
AUDIT_N_STATES = 5
AUDIT_N_ACTIONS = 2
AUDIT_REWARD_ATOMS = 3
AUDIT_GAMMA = 0.9

# Atoms of the categorical and quantile members in the contraction and
# propagation audits
AUDIT_ATOMS = 11
# Resolutions compared by the residual audit
AUDIT_K_VALUES = [11, 51, 101]
# Support size of the categorical reference return distribution
AUDIT_REFERENCE_RESOLUTION = 2001
# Order of the Wasserstein metric used by the contraction audit
AUDIT_P = 1.0
# Fixed-point iteration tolerance (sup w_1 residual) and iteration cap
AUDIT_TOLERANCE = 1e-10
AUDIT_MAX_ITER = 5000
# Write the projected fixed point, the disagreement of its members and the
# propagated bonus of the first propagation MDP as CSV tables
AUDIT_DUMP_TABLES = False


# -- deep sea ---------------------------------------------------------------

DEEPSEA_SIZES = [10]
DEEPSEA_SEEDS = [0, 1, 2, 3, 4]
# Training-episode budget per (size, seed, variant)
DEEPSEA_EPISODES = 500
# Any of: pe-dqn, qr-qr, c51-c51, ind, no-bonus
DEEPSEA_VARIANTS = ['pe-dqn']
# Stochastic deep sea inverts the executed move with probability 1/N
DEEPSEA_STOCHASTIC = False

DEEPSEA_HIDDEN = [64]
DEEPSEA_ATOMS = 51
DEEPSEA_LR = 5e-4
DEEPSEA_BATCH_SIZE = 128
DEEPSEA_ADAM_EPS = 0.001 / 128
DEEPSEA_BUFFER_CAPACITY = 10000
DEEPSEA_TARGET_UPDATE_FREQ = 4
DEEPSEA_GAMMA = 0.99
DEEPSEA_BETA_INIT = 5.0
DEEPSEA_PRIOR_SCALE_QUANTILE = 20.0
DEEPSEA_PRIOR_SCALE_CATEGORICAL = 0.0
# Categorical value support; deep-sea returns lie in [-0.01, 0.99]
DEEPSEA_V_MIN = -1.0
DEEPSEA_V_MAX = 1.0
# Upper end of the categorical bonus support. When unset it is
# (V_MAX - V_MIN) times the discounted length of an N-step episode.
DEEPSEA_BONUS_V_MAX = None

# A greedy evaluation episode runs after every EVAL_EVERY training episodes
DEEPSEA_EVAL_EVERY = 1
# An evaluation return at or above this marks the size as solved
DEEPSEA_SOLVE_THRESHOLD = 0.9
# A training episode below this return counts as regret
DEEPSEA_REGRET_THRESHOLD = 0.5
# Write the final agent parameters of every job into the run directory
DEEPSEA_CHECKPOINT = False


# -- toy regression ---------------------------------------------------------

# Generator: x is drawn uniformly inside one of the clusters given as
# consecutive (low, high) bounds, cluster chosen uniformly; then
# y = sin(3x) + (TOYREG_NOISE + TOYREG_NOISE_SLOPE * |x|) * N(0, 1).
TOYREG_SAMPLES = 200
TOYREG_CLUSTERS = [-1.0, -0.3, 0.3, 1.0]
TOYREG_NOISE = 0.05
TOYREG_NOISE_SLOPE = 0.2

TOYREG_STEPS = 2000
TOYREG_BATCH_SIZE = 32
TOYREG_ATOMS = 51
TOYREG_HIDDEN = [64, 64]
TOYREG_LR = 1e-3
TOYREG_ADAM_EPS = 0.001 / 32
TOYREG_PRIOR_SCALE_QUANTILE = 0.0
TOYREG_PRIOR_SCALE_CATEGORICAL = 0.0
TOYREG_V_MIN = -2.5
TOYREG_V_MAX = 2.5

# The learned quantile lines are evaluated on this grid of x values
TOYREG_GRID_MIN = -2.0
TOYREG_GRID_MAX = 2.0
TOYREG_GRID_POINTS = 81

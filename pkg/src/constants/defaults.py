"""
Numeric defaults for circuits, decoders, training and evaluation
"""
import math

# Interferometer
PREP_ANGLE = math.pi / 2
READOUT_ANGLE = math.pi / 2
PARAMS_PER_LAYER = 5
QUANTUM_INIT_SCALE = 0.1

# Decoder
HIDDEN_LAYERS = (64, 64)
DEFAULT_ACTIVATION = "Softsign"

# Training (Adam + early stopping)
N_PHI = 100
LEARNING_RATE = 1e-2
ADAM_BETAS = (0.9, 0.999)
ADAM_EPSILON = 1e-8
MAX_ITERS = 2000
PATIENCE = 200
MIN_ITERS = 300
EVAL_INTERVAL = 10

# Narrow Gaussian prior for the BMSE baseline
PRIOR_MEAN = 0.0
PRIOR_STD = math.pi / 20
PRIOR_GRID_POINTS = 41
PRIOR_GRID_WIDTH = 4.0

# Evaluation
EVAL_GRID_SIZE = 512
SHOTS = 10 ** 6
RUNS = 20
SWPE_FLOOR_DB = -160.0
JACOBIAN_MIN_POINTS = 16
CLOSURE_THRESHOLD = 0.1

"""constants.py"""

DefaultError = 23001
DimensionErrorCode = 23002
StateErrorCode = 23003
DomainErrorCode = 23004
ParameterErrorCode = 23005
ConstructionErrorCode = 23006
DivergedErrorCode = 23007
MalformedImageErrorCode = 23008
SerializationErrorCode = 23009
ConfigValidationErrorCode = 23010

# Interval problem defaults
CASE1_A = 20
CASE1_K = 26
CASE1_EPSILON = 1e-2
CASE1_DELTA = 1e-4
CASE1_GRID_N = 2000

# Experiment II image geometry
IMAGE_SIZE = 32
STRIPE_WIDTH = 3
STRIPE_POSITIONS = IMAGE_SIZE - STRIPE_WIDTH + 1
STRIPE_PIXELS = STRIPE_WIDTH * IMAGE_SIZE
PIXEL_SUM_THRESHOLD = float(STRIPE_PIXELS)
TRAINING_A = 0.01
TABLE1_ROWS: tuple[tuple[float, float], ...] = (
    (0.009, 0.01),
    (0.008, 0.009),
    (0.007, 0.008),
    (0.006, 0.007),
)

# Adam defaults
ADAM_LR = 1e-3
ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPSILON = 1e-8

ATTRIBUTION_THRESHOLD = 0.9

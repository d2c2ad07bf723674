from collections import defaultdict

CURRENT = "current"
VOLTAGE = "voltage"

IMPEDANCE = "impedance"
ADMITTANCE = "admittance"

SERIES = "series"
PARALLEL = "parallel"
RESISTOR = "resistor"
NEGATIVE_RESISTOR = "negative_resistor"
DIODE = "diode"
PWL_RESISTOR = "pwl_resistor"
CAPACITOR = "capacitor"
INDUCTOR = "inductor"

ELEMENT_KINDS = (RESISTOR, NEGATIVE_RESISTOR, DIODE, PWL_RESISTOR, CAPACITOR, INDUCTOR)
COMPOSITE_KINDS = (SERIES, PARALLEL)

SCHEMA_VERSION = 1


class Algorithm:
    FORWARD_STEP = "forward-step"
    DOUGLAS_RACHFORD = "douglas-rachford"
    AUTO = "auto"
    LINEAR_SOLVE = "linear-solve"
    DIRECT = "direct"


ALGORITHM_BY_FLAG = defaultdict(
    lambda: Algorithm.AUTO,
    {
        "forward": Algorithm.FORWARD_STEP,
        "forward-step": Algorithm.FORWARD_STEP,
        "dr": Algorithm.DOUGLAS_RACHFORD,
        "douglas-rachford": Algorithm.DOUGLAS_RACHFORD,
        "auto": Algorithm.AUTO,
    },
)


class ExitCode:
    OK = 0
    VIOLATIONS = 1
    INVALID_INPUT = 2
    NOT_CONVERGED = 3
    DOMAIN_VIOLATION = 4


# Zero-mean tolerance of the integral domain: ZERO_MEAN_RTOL * (||u|| + 1)
ZERO_MEAN_RTOL = 1e-9

# Solver defaults
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 10000
DEFAULT_LAMBDA = 1.0
DIVERGENCE_FACTOR = 10.0
DIVERGENCE_WINDOW = 50
CONTRACTION_BURN_IN = 5

# Nested inverse evaluation
INNER_TOL = 1e-12
INNER_MAX_ITER = 20000

# Scalar root finding
NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 200
BRACKET_MAX_EXPANSIONS = 1200
# Relative distance kept from an open domain edge: x >= edge * (1 - DOMAIN_GUARD)
DOMAIN_GUARD = 1e-12

# Diagnostics
ABS_TOL = 1e-10
RESOLVENT_TOL = 1e-8
DEFAULT_TRIALS = 1000
DEFAULT_SEED = 20210
DEFAULT_LAMBDAS = (0.1, 1.0, 10.0)

# Reference envelope detector
SATURATION_CURRENT = 1e-14
IDEALITY_FACTOR = 1.0
THERMAL_VOLTAGE = 0.02585

# CSV output
CSV_HEADER = ("t", "i", "v")
CSV_FLOAT_FORMAT = "{:.17g}"

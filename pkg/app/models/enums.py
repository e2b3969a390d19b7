"""Solver enumerations"""
from enum import Enum


class SolitonMethod(str, Enum):
    """How a scalar soliton profile was obtained"""
    SHOOTING = "shooting"
    GRADIENT_FLOW = "gradient-flow"
    CLOSED_FORM = "closed-form"


class Branch(str, Enum):
    """Synchronized solution branches (sign patterns of the amplitudes)"""
    Z1 = "z1"  # (+, +)
    Z2 = "z2"  # (-, -)
    Z3 = "z3"  # (+, -)
    Z4 = "z4"  # (-, +)


class Parity(str, Enum):
    """Function class used for N=1 spectral problems"""
    EVEN = "even"
    FULL = "full"


class Verdict(str, Enum):
    """Nondegeneracy verdict for a synchronized solution"""
    NONDEGENERATE = "nondegenerate"
    INCONCLUSIVE = "inconclusive"


class Conclusion(str, Enum):
    """Outcome of the ground-state comparison criteria"""
    EXISTS = "ground-state-exists"
    UNDETERMINED = "undetermined"


class Hypothesis(str, Enum):
    """Which bound-state hypothesis the limit couplings satisfy"""
    BETA_LARGE = "beta0>=3"
    PEAK_BOUND = "w0-bound"
    PEAK_BOUND_SMALL_PARAMETERS = "w0-bound-small-parameters"
    NONE = "none"


class InitKind(str, Enum):
    """Initial data for ground-state solves"""
    SECH = "sech"
    RANDOM = "random"


class PerturbationKind(str, Enum):
    """Perturbation profile sources accepted in run configs"""
    GAUSSIAN = "gaussian"
    FILE = "file"


class Command(str, Enum):
    """CLI subcommands"""
    SCALAR = "scalar"
    GROUND = "ground"
    SWEEP_KAPPA = "sweep-kappa"
    SPECTRUM = "spectrum"
    BARYCENTER = "barycenter"
    GAMMA = "gamma"
    THRESHOLD = "threshold"
    COMPARE = "compare"
    BOUND = "bound"

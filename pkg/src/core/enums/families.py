from enum import Enum


class MusielakFamily(str, Enum):
    CONSTANT_POWER = "constant_power"
    AFFINE_POWER = "affine_power"
    CUSTOM = "custom"


class PsiFamily(str, Enum):
    LINEAR = "linear"
    EXPONENTIAL = "exponential"
    POWER = "power"
    CUSTOM = "custom"


class NonlinearityFamily(str, Enum):
    POWER = "power"
    ZERO = "zero"
    CUSTOM = "custom"


class Side(str, Enum):
    """Side of a fractional operator: ``left`` integrates over [0, x], ``right`` over [x, T]."""

    LEFT = "left"
    RIGHT = "right"


class ConvexityPolicy(str, Enum):
    WARN = "warn"
    FAIL = "fail"


class FracOperator(str, Enum):
    INTEGRAL_LEFT = "integral-left"
    INTEGRAL_RIGHT = "integral-right"
    RL_LEFT = "rl-left"
    RL_RIGHT = "rl-right"
    HILFER_LEFT = "hilfer-left"
    HILFER_RIGHT = "hilfer-right"


class StudyCase(str, Enum):
    POWER_RULE = "power_rule"
    FTC = "ftc"
    ZERO = "zero"

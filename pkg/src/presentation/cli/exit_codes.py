from enum import IntEnum


class ExitCode(IntEnum):
    OK = 0
    CHECKS_FAILED = 1
    CONFIG_ERROR = 2
    GEOMETRY_FAILURE = 3
    NOT_CONVERGED = 4
    NUMERICAL_FAILURE = 5

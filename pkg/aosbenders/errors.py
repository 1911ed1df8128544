'''
Exception hierarchy. Every error carries the process exit code the
command line maps it to.
'''


class AosError(Exception):
    exit_code = 1


class InputError(AosError):
    """Malformed problem data, configuration or flags."""
    exit_code = 3


class ModelError(AosError):
    """A two-stage modelling assumption does not hold.

    Raised for second-stage infeasibility (relatively complete recourse),
    unbounded subproblems or masters (finite solution) and empty X.
    """
    exit_code = 4


class NotConvergedError(AosError):
    """Benders loop stopped before the theta gap closed."""
    exit_code = 2

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class InvalidBasisError(AosError):
    pass


class WarmStartError(AosError):
    pass


class IterationLimitError(AosError):
    pass


class PreconditionError(AosError):
    pass


class ReconstructionError(AosError):
    pass


class UnboundedSublevelError(AosError):
    exit_code = 4

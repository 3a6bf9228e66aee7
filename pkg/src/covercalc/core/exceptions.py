class CoreException(Exception):
    """Base class for all exceptions in covercalc. Inherit from this class
    if you want an exception to be logged as an error instead of critical.

    The `exit_code` is returned to the shell by the command line interface.
    """

    exit_code: int = 1


class CoreParseError(CoreException, ValueError):
    """Exception raised when a scenario file or a flag cannot be parsed.

    It is also a `ValueError` so argparse reports it as a usage error when it
    is raised from a `type=` callable.
    """

    exit_code: int = 2


class CoreValueError(CoreException):
    """Exception raised when a value is invalid."""

    exit_code: int = 3


class InfeasibleError(CoreValueError):
    """Exception raised when a premium target lies below the premium floor."""


class NonMonotoneFOCError(CoreValueError):
    """Exception raised when a first-order condition is not monotone."""


class QuadratureError(CoreValueError):
    """Exception raised when a numerical integral does not converge."""


class NoRootError(CoreException):
    """Exception raised when a bracket contains no sign change."""

    exit_code: int = 4

"""Exception taxonomy and the process exit codes the CLI maps it to."""

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERICAL = 3
EXIT_PROPERTY = 4


class TriphotonError(Exception):
    """Base class for every error raised by this package."""

    exit_code = EXIT_NUMERICAL


class InvalidArgumentError(TriphotonError, ValueError):
    """An argument violates a documented precondition."""


class SchemaError(TriphotonError):
    """A configuration document does not match the schema."""

    exit_code = EXIT_USAGE


class UsageError(TriphotonError):
    """The command-line invocation is not valid."""

    exit_code = EXIT_USAGE


class ConfigurationError(TriphotonError):
    """Numerical settings violate a solver precondition (e.g. too small an
    integration span for the requested filters)."""


class DegenerateInputError(TriphotonError):
    """Input is structurally valid but numerically empty, e.g. an all-zero
    amplitude tensor or an all-zero surface."""


class AmbiguousWidthError(TriphotonError):
    """A width measurement found no unique pair of half-maximum crossings."""

    def __init__(self, message: str, crossings=()):
        super().__init__(message)
        self.crossings = tuple(float(c) for c in crossings)


class PropertyViolationError(TriphotonError):
    """A physics property the run was required to certify does not hold."""

    exit_code = EXIT_PROPERTY

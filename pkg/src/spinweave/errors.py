"""Exception types raised by spinweave."""


class SpinweaveError(ValueError):
    """Base class for all spinweave errors."""


class InvalidSizeError(SpinweaveError):
    pass


class InvalidBranchingError(SpinweaveError):
    pass


class TimingViolationError(SpinweaveError):
    """Output paths from the first hub have different lengths."""


class ShapeError(SpinweaveError):
    """Network does not have the shape an operation requires."""


class NotProjectableError(SpinweaveError):
    pass


class InvalidParameterError(SpinweaveError):
    pass


class DimensionMismatchError(SpinweaveError):
    pass


class NumericalValidityError(SpinweaveError):
    """A computed quantity violates a physical constraint beyond round-off."""


class ResourceLimitError(SpinweaveError):
    pass


class ScenarioError(SpinweaveError):
    """Malformed or semantically invalid scenario text.

    ``line`` is the 1-based line number of the offending line, when known.
    """

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)

"""Exception types shared across the simulator."""


class InvalidArgumentError(ValueError):
    """Raised for malformed inputs: bad indices, length mismatches, bad tables."""


class InvalidStateError(ValueError):
    """Raised when a state fails a validity guard, e.g. it is not normalized."""


class CapacityError(InvalidArgumentError):
    """Raised when a register or operator exceeds the desk-scale size cap."""


class ExtractionFailure(RuntimeError):
    """Raised when period extraction produces no certified candidate."""

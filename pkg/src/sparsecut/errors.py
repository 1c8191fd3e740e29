"""Exception types shared across the package."""


class SparseCutError(Exception):
    """Base class for all package errors."""


class InputError(SparseCutError):
    """Invalid argument or malformed data supplied by the caller."""


class ParseError(InputError):
    """Malformed instance or matrix text."""


class ConvergenceError(SparseCutError):
    """Solver exhausted its iteration budget with residuals above tolerance.

    Carries the partial solution and the offending residuals so callers can
    inspect how far the solve got.
    """

    def __init__(self, message, partial=None, residuals=None):
        super().__init__(message)
        self.partial = partial
        self.residuals = dict(residuals or {})


class PropertyViolationError(SparseCutError):
    """A certified inequality failed beyond its allowed slack.

    Signals an infeasible input configuration, not a bug in the audit.
    """

    def __init__(self, message, witness=None, violation=None):
        super().__init__(message)
        self.witness = witness
        self.violation = violation


class DegenerateDirectionError(SparseCutError):
    """The direction pair has (numerically) coincident endpoints; skip it."""


class RoundingError(SparseCutError):
    """No proper cut with positive demand crossing exists in the sweep family."""

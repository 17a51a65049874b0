"""Exception hierarchy.

Every rejected input gets a typed error so callers can distinguish "the math
does not apply here" (vacuous bound, bad domain) from "the data is malformed"
(CSV parsing, panel consistency).
"""


class BvconcError(Exception):
    """Base class for all library errors."""


class DomainError(BvconcError, ValueError):
    """An argument is outside the mathematical domain of an operation.

    Raised for x <= 1 where a bound argument must exceed one, alpha outside
    (0, 1), negative epsilon, degenerate ranges, and similar violations.
    Callers must fix the input; nothing is clamped silently.
    """


class VacuousBoundError(DomainError):
    """The coefficient product c * d is <= 1, so no bound applies."""


class ConvergenceError(BvconcError, RuntimeError):
    """A numeric search failed to bracket or refine a minimum."""


class DataFormatError(BvconcError, ValueError):
    """An input file or data panel violates its declared format.

    Messages carry row / column positions where applicable.
    """


class LipschitzConsistencyError(DataFormatError):
    """Trajectory data moves faster than its declared Lipschitz constant."""

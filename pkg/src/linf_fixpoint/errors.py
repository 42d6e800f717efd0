"""Exception types shared across the package.

Everything raised on purpose derives from LinfFixpointError so callers
(and the command line front end) can catch one root type and map it to a
machine-readable error report.
"""

from __future__ import annotations


class LinfFixpointError(Exception):
    """Root of the package exception hierarchy."""

    code = "error"

    def payload(self) -> dict:
        return {"error": self.code, "message": str(self)}


class DimensionMismatchError(LinfFixpointError):
    """Vectors, operators or spaces with incompatible dimensions."""

    code = "dimension-mismatch"


class ZeroDirectionError(LinfFixpointError):
    """A direction vector was identically zero where a nonzero one is required."""

    code = "zero-direction"


class EmptyInteriorError(LinfFixpointError):
    """A polytope or search space has no interior (volume zero)."""

    code = "empty-interior"


class PullPreconditionError(LinfFixpointError):
    """A pull request asked for a mass outside the feasible range."""

    code = "pull-precondition"


class BalanceIterationError(LinfFixpointError):
    """Balancing did not reach its potential target within the iteration cap."""

    code = "balance-iterations"


class IterationLimitError(LinfFixpointError):
    """A solver exceeded its iteration budget; the declared contraction factor
    is probably wrong for the supplied map."""

    code = "iteration-limit"


class InstanceFormatError(LinfFixpointError):
    """An instance or search-space description failed validation."""

    code = "instance-format"


class RangeViolationError(LinfFixpointError):
    """A map returned a value outside its declared range."""

    code = "range-violation"

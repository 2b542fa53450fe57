"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class KronbrsError(Exception):
    """Base class for every error raised by this package."""


class DomainError(KronbrsError, ValueError):
    """An argument lies outside the domain of the operation."""


class PrecisionError(KronbrsError):
    """Stored digits or series coefficients do not cover the request."""


class DimensionError(KronbrsError, ValueError):
    """Shapes of matrices, points or blocks do not fit together."""


class AdmissibilityError(KronbrsError):
    """The sequence is not weakly admissible at the depth, or tau_m < 1."""


class EnumerationTooLarge(KronbrsError):
    """An exhaustive enumeration would exceed its configured cap."""


class InfeasibleError(KronbrsError):
    """A linear system that should have a nontrivial solution has none."""


class SearchFailed(KronbrsError):
    """The exhaustive digit search found no admissible tuple."""


class SpacingError(KronbrsError):
    """No selection of dual vectors satisfies the spacing requirement."""


class InconclusiveError(KronbrsError):
    """The experiment range is too short to separate the two behaviours."""


class EndConditionFailed(KronbrsError):
    """Some residue class has no block offset A within the scan limit."""

    def __init__(self, unmatched, a_max: int):
        self.unmatched = list(unmatched)
        self.a_max = a_max
        shown = ", ".join(str(w) for w in self.unmatched[:8])
        more = "" if len(self.unmatched) <= 8 else f" (+{len(self.unmatched) - 8} more)"
        super().__init__(
            f"{len(self.unmatched)} class(es) not reached with A <= {a_max}: {shown}{more}"
        )


class InternalCheckError(KronbrsError):
    """A computed identity that must hold exactly was violated."""

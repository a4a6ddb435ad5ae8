"""Solve status taxonomy shared across the pipeline."""

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
COVER_UNAVAILABLE = "cover-unavailable"
NUMERICAL_ERROR = "numerical-error"

ALL_STATUSES = (OPTIMAL, INFEASIBLE, COVER_UNAVAILABLE, NUMERICAL_ERROR)

# CLI exit codes (0 reserved for optimal, 1 for usage errors).
EXIT_CODES = {
    OPTIMAL: 0,
    COVER_UNAVAILABLE: 2,
    INFEASIBLE: 3,
    NUMERICAL_ERROR: 4,
}


class NumericalError(Exception):
    """A numerical procedure gave up (iteration caps, overflow, ...)."""

"""Exception types raised by the inequality toolkit."""


class OverlapBoundsError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(OverlapBoundsError, ValueError):
    """States or operators live on different spaces or have mismatched sizes."""


class DegenerateStateError(OverlapBoundsError, ValueError):
    """A state has (numerically) zero norm where a normalizable one is needed."""


class UnnormalizedStateError(OverlapBoundsError, ValueError):
    pass


class NotHermitianError(OverlapBoundsError, ValueError):
    pass


class NumericalConsistencyError(OverlapBoundsError, ArithmeticError):
    """A quantity that must be real/nonnegative came out otherwise beyond tolerance."""


class OrthogonalityRequiredError(OverlapBoundsError, ValueError):
    """An inequality that only holds under exact orthogonality was applied off-condition."""


class DegenerateUncertaintyError(OverlapBoundsError, ValueError):
    """Zero standard deviation: the state is an eigenstate of the operator."""


class DomainError(OverlapBoundsError, ValueError):
    """An argument lies outside the window where a formula is valid."""

"""Exception and warning types raised across the package."""


class PreconditionError(ValueError):
    """An argument violates the documented precondition of an operation."""


class DomainError(ValueError):
    """A closed form is evaluated outside the region where it is defined."""


class DivergentSeriesError(DomainError):
    """A regularised sum was requested at a point where it diverges."""


class DegenerateMeasureError(DomainError):
    """The phase-space measure weight |f(t)|^2 fell below the configured floor."""


class GridResolutionError(PreconditionError):
    """A quadrature grid has too few nodes for the requested band."""


class TruncationWarning(UserWarning):
    """The Fock cutoff is too small for the requested amplitude."""

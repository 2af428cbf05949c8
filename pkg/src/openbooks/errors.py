"""Exception types shared across the toolkit."""


class GeometryError(Exception):
    """Base class for all numerical-geometry failures."""


class DimensionMismatch(GeometryError):
    """Objects defined on incompatible ambient spaces or degrees."""


class DegenerateSystem(GeometryError):
    """A linear system that should be full rank is not.

    Carries the singular values of the offending system so the caller can
    see how close to rank deficiency the point was.
    """

    def __init__(self, message, singular_values=None):
        super().__init__(message)
        self.singular_values = singular_values


class BindingPoint(GeometryError):
    """An operation that requires a point off the binding got one on it."""


class OffManifold(GeometryError):
    """A point failed the constraint-residual test of a submanifold."""


class DomainError(GeometryError):
    """Evaluation requested outside the domain of a coefficient function."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class FlowAborted(GeometryError):
    """A trajectory entered the excluded band around the binding."""


class NonConvergence(GeometryError):
    """An iterative procedure (projection, step-halving check) failed."""

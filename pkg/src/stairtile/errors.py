"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class NotConvex(GeometryError):
    pass


class NotMonotone(GeometryError):
    pass


class BadDomain(GeometryError):
    pass


class NegativeHeight(GeometryError):
    pass


class OutOfDomain(GeometryError):
    pass


class Degenerate(GeometryError):
    pass


class NotConvexQuad(GeometryError):
    pass


class NoFeasibleAssignment(GeometryError):
    pass


class BadAbscissas(GeometryError):
    pass


class NotRectilinear(GeometryError):
    pass


class NotSimple(GeometryError):
    pass


class NotStair(GeometryError):
    pass


class UnsupportedSignature(GeometryError):
    pass


class InvalidBudget(GeometryError):
    pass


class BudgetTooLarge(GeometryError):
    pass


class DegenerateLattice(GeometryError):
    pass


class PointOutside(GeometryError):
    pass


class DisjointCopies(GeometryError):
    pass


class AmbiguousOrientation(GeometryError):
    pass


class NotACovering(GeometryError):
    pass


class IdenticalCopies(GeometryError):
    pass


class GenerationFailed(RuntimeError):
    pass

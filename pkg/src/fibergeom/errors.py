"""Errors raised by the fibergeom app."""
from utils.errors import MonoForgeError


class FiberGeomError(MonoForgeError):
    """Base class for fibergeom errors."""


class RankDeficiencyError(FiberGeomError):
    """Raised when the gradients of the equations are dependent at a point."""


class NotOnManifoldError(FiberGeomError):
    """Raised when a point misses the equations or an inequality of a manifold."""


class FrameDegenerateError(FiberGeomError):
    """Raised when the symbolic fiber frame vanishes identically."""


class StratifyFirstError(FiberGeomError):
    """Raised when the projection rank is not constant on the samples.

    details["ranks"] lists the ranks seen; rank_at locates where they change.
    """


class FiberCutPreconditionError(FiberGeomError):
    """Raised when fiber cutting has no fiber direction to cut along."""

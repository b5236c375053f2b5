"""Exception types shared across the package.

Each failure mode that callers are expected to distinguish gets its own
class; the CLI maps them to exit codes.
"""


class PMCError(Exception):
    """Base class for all package errors."""


class ExprSyntaxError(PMCError):
    """Malformed expression source; carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class DomainError(PMCError):
    """Evaluation left the domain of a function (log/sqrt/division)."""


class InvalidArgument(PMCError):
    """Argument violates a documented precondition."""


class OverflowArgument(PMCError):
    """Argument would overflow (e.g. cosh of a huge ratio)."""


class PoleSingularity(PMCError):
    """Curvature requested at a pole sample without an analytic tag."""


class SelfIntersection(PMCError):
    """Normal graph produced a non-embedded curve (parameter reversal)."""


class QuadratureNonconvergence(PMCError):
    """Doubling the quadrature order moved the result too much."""


class NoRoot(PMCError):
    """No sign change found in the search bracket."""


class DegenerateRoot(PMCError):
    """Root found but the derivative there is numerically zero."""


class FitFailure(PMCError):
    """Neck fitting mismatch exceeds the matching-order sanity bound."""


class OutOfRange(PMCError):
    """Value outside the tabulated/invertible range."""


class EmbeddingFailure(PMCError):
    """Assembled profile self-intersects."""


class GeometryTooTight(PMCError):
    """Cutoff radii cannot satisfy their support constraints."""


class IllConditioned(PMCError):
    """Probed constants spread too widely across probes."""


class EigenSolveFailure(PMCError):
    """Eigenvalue solver failed to converge."""


class NewtonDivergence(PMCError):
    """Newton iteration diverged or exceeded its iteration budget."""


class MaxIterations(PMCError):
    """Fixed-point iteration exceeded its iteration budget."""

"""Exception hierarchy shared across the package."""


class CommonLinesError(Exception):
    """Base class for all errors raised by this package."""


class DegenerateInput(CommonLinesError):
    """Input vectors are (numerically) linearly dependent or zero."""


class NotIsometric(CommonLinesError):
    """Source and target triples have different Gram matrices."""


class TriangleInequalityViolated(CommonLinesError):
    """Arc lengths do not admit a non-degenerate spherical triangle."""


class CoincidentPlanes(CommonLinesError):
    """Two frames span the same plane, so no unique intersection line exists."""


class NotGeneric(CommonLinesError):
    """A frame set fails the genericity requirements (distinct planes and
    pairwise distinct intersection lines)."""


class DegenerateAngle(CommonLinesError):
    """Two common lines coincide (angle at 0 or pi) within tolerance."""


class NormMismatch(CommonLinesError):
    """The two halves of a common-line quadruple have unequal norms."""


class DegenerateConfiguration(CommonLinesError):
    """A 2x2 determinant needed for the compatibility sign vanished."""


class IncompatibleTriples(CommonLinesError):
    """No orthogonal map glues two triple reconstructions on their shared pair."""


class InvalidData(CommonLinesError):
    """Common lines data failed certification; carries the report if present."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class RankDeficient(CommonLinesError):
    """The stacked frame matrix has numerical rank below 3."""


class UndefinedProjection(CommonLinesError):
    """All four minors of a pair vanish, so its line coordinates are undefined."""


class InitializationFailed(CommonLinesError):
    """No usable triple was found to seed the projection optimizer."""

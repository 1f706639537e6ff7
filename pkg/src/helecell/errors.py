"""Exception hierarchy shared by all helecell modules."""


class HeleCellError(Exception):
    """Base class; any pipeline failure that aborts a time step."""


class DegenerateEdgeError(HeleCellError):
    pass


class CuspError(HeleCellError):
    pass


class CurveInvariantError(HeleCellError):
    """Vertex list violates a PolygonalCurve invariant (size, orientation)."""


class SingularMatrixError(HeleCellError):
    pass


class DimensionMismatchError(HeleCellError, ValueError):
    pass


class PlacementError(HeleCellError):
    """A singular point landed inside or on the polygon."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class EvaluationAtSingularityError(HeleCellError):
    pass


class EmptyInteriorError(HeleCellError):
    pass


class SpecError(HeleCellError, ValueError):
    """Initial curve specification produces a non-positive radius."""


class ParseError(HeleCellError, ValueError):
    pass


class ValidationError(HeleCellError, ValueError):
    pass

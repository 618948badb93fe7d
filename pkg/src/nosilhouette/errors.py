"""Exception types raised by the geometry pipelines."""


class GeometryError(ValueError):
    """Base class for all library errors."""


class DegenerateInputError(GeometryError):
    """A point coincides with a singular location (inversion center, pole, line)."""


class ImmersionError(GeometryError):
    """The curve derivative vanishes, so the curve is not an immersion there."""


class InconsistencyError(GeometryError):
    """Two constructions that must agree do not (e.g. a seed that is not interior)."""


class EmptyIntersectionError(GeometryError):
    """A half-plane intersection that must be non-empty came out empty."""


class ChartError(GeometryError):
    """A spherical point or set leaves the open northern hemisphere chart."""


class PreconditionError(GeometryError):
    """A documented precondition of an operation does not hold."""


class ConfigError(GeometryError):
    """A job configuration could not be parsed or validated."""

"""Regions missed by rotated tangent lines of closed plane curves.

For a closed curve ``r`` and an angle ``theta``, every tangent line is turned
by ``theta`` about its point of tangency; the package computes the part of
the plane avoided by all of these lines, follows it as ``theta`` grows until
it vanishes, and checks the surrounding convex-geometry and spherical
duality facts numerically.
"""

from .curve import ParametricCurve, curvature, evaluate, inflection_points, sample, tangent_line
from .errors import (
    ChartError,
    ConfigError,
    DegenerateInputError,
    EmptyIntersectionError,
    GeometryError,
    ImmersionError,
    InconsistencyError,
    PreconditionError,
)
from .geom2d import ConvexPolygon, HalfPlane, Line2, clip, convex_hull, foot_of_perpendicular, invert, rotate, signed_distance
from .metric import CompactSet2, dist_point_to_set, dist_set_to_set, hausdorff
from .silhouette import (
    RegionApprox,
    SupportFn,
    dual_curve,
    find_seed,
    membership,
    pedal_curve,
    region_by_clipping,
    region_by_support,
    support_function,
)

__version__ = "0.1.0"

__all__ = [
    "ParametricCurve", "curvature", "evaluate", "inflection_points", "sample", "tangent_line",
    "ChartError", "ConfigError", "DegenerateInputError", "EmptyIntersectionError", "GeometryError",
    "ImmersionError", "InconsistencyError", "PreconditionError",
    "ConvexPolygon", "HalfPlane", "Line2", "clip", "convex_hull", "foot_of_perpendicular", "invert",
    "rotate", "signed_distance",
    "CompactSet2", "dist_point_to_set", "dist_set_to_set", "hausdorff",
    "RegionApprox", "SupportFn", "dual_curve", "find_seed", "membership", "pedal_curve",
    "region_by_clipping", "region_by_support", "support_function",
]

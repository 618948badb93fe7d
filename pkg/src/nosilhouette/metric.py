"""Pompeiu-Hausdorff distance between compact plane sets.

A set is either a solid convex polygon or a finite point cloud.  Directed
distances from a polygon are evaluated on its boundary, subdivided at a step
of ``1e-3 * scale``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import shapely

from .geom2d import ConvexPolygon, point_segment_distance

RESOLUTION = 1e-3
_CHUNK = 2048


@dataclass(frozen=True)
class CompactSet2:
    polygon: ConvexPolygon | None = None
    cloud: np.ndarray | None = None

    def __post_init__(self):
        if (self.polygon is None) == (self.cloud is None):
            raise ValueError("give exactly one of polygon or cloud")
        if self.cloud is not None:
            c = np.asarray(self.cloud, float).reshape(-1, 2)
            if len(c) == 0:
                raise ValueError("empty point cloud")
            object.__setattr__(self, "cloud", c)

    @classmethod
    def of(cls, x) -> "CompactSet2":
        if isinstance(x, CompactSet2):
            return x
        if isinstance(x, ConvexPolygon):
            return cls(polygon=x)
        if hasattr(x, "polygon") and isinstance(x.polygon, ConvexPolygon):
            return cls(polygon=x.polygon)
        return cls(cloud=x)

    @property
    def points(self) -> np.ndarray:
        return self.polygon.vertices if self.polygon is not None else self.cloud

    @property
    def scale(self) -> float:
        p = self.points
        return float(np.max(np.ptp(p, axis=0))) if len(p) > 1 else 0.0

    def samples(self, step: float) -> np.ndarray:
        """Cloud points, or polygon vertices plus edge subdivision points."""
        if self.polygon is None:
            return self.cloud
        v = self.polygon.vertices
        if len(v) == 1 or step <= 0:
            return v
        e = np.roll(v, -1, axis=0) - v
        k = np.maximum(1, np.ceil(np.hypot(e[:, 0], e[:, 1]) / step).astype(int))
        idx = np.repeat(np.arange(len(v)), k)
        t = np.concatenate([np.arange(m) / m for m in k])
        return v[idx] + t[:, None] * e[idx]


def _dist_to(points: np.ndarray, b: CompactSet2) -> np.ndarray:
    points = np.asarray(points, float).reshape(-1, 2)
    out = np.zeros(len(points))
    if b.polygon is not None:
        poly = b.polygon
        v = poly.vertices
        if not poly.degenerate:
            geom = shapely.Polygon(v)
            shapely.prepare(geom)
            return shapely.distance(shapely.points(points), geom)
        a, bb = (v, v) if len(v) == 1 else (v, np.roll(v, -1, axis=0))
        for i in range(0, len(points), _CHUNK):
            out[i:i + _CHUNK] = point_segment_distance(points[i:i + _CHUNK], a, bb).min(axis=1)
        return out
    c = b.cloud
    for i in range(0, len(points), _CHUNK):
        d = points[i:i + _CHUNK, None, :] - c[None, :, :]
        out[i:i + _CHUNK] = np.sqrt(np.min(np.sum(d * d, axis=-1), axis=1))
    return out


def dist_point_to_set(x, b) -> float:
    return float(_dist_to(np.asarray(x, float).reshape(1, 2), CompactSet2.of(b))[0])


def dist_set_to_set(a, b, step: float | None = None) -> float:
    """Directed distance ``sup_{x in a} d(x, b)``."""
    a, b = CompactSet2.of(a), CompactSet2.of(b)
    if step is None:
        step = RESOLUTION * max(a.scale, b.scale, 1e-300)
    return float(np.max(_dist_to(a.samples(step), b)))


def hausdorff(a, b, step: float | None = None) -> float:
    a, b = CompactSet2.of(a), CompactSet2.of(b)
    if step is None:
        step = RESOLUTION * max(a.scale, b.scale, 1e-300)
    return max(dist_set_to_set(a, b, step), dist_set_to_set(b, a, step))

"""Wulff shapes: support functions, convex-body checks, duals and corner diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ChartError, PreconditionError
from .geom2d import ConvexPolygon, convex_hull
from .silhouette import RegionApprox, SupportFn, wulff_polygon
from .sphere import central_project, central_unproject, polar_set


@dataclass(frozen=True)
class WulffShape:
    """Convex body about the origin with its sampled support function."""

    polygon: ConvexPolygon
    support: SupportFn

    @classmethod
    def from_polygon(cls, poly: ConvexPolygon, m: int = 2048) -> "WulffShape":
        if not convex_body_check(poly):
            raise PreconditionError("polygon must be convex with the origin strictly inside")
        a = 2 * np.pi * np.arange(m) / m
        h = poly.support(np.column_stack([np.cos(a), np.sin(a)]))
        return cls(poly, SupportFn(np.zeros(2), h))

    @classmethod
    def from_region(cls, region: RegionApprox, m: int = 2048) -> "WulffShape":
        """The region translated so that its seed sits at the origin."""
        return cls.from_polygon(region.polygon.translated(-region.seed), m)

    @property
    def scale(self) -> float:
        return self.polygon.scale


def wulff_from_support(h: SupportFn, m: int | None = None) -> WulffShape:
    """Intersection of ``{x : x . u_j <= h(u_j)}`` over ``m`` uniform directions."""
    if m is not None:
        if m < 256:
            raise ValueError("need at least 256 directions")
        h = h.resampled(m)
    sf = SupportFn(np.zeros(2), h.values, h.theta)
    return WulffShape(wulff_polygon(sf), sf)


def convex_body_check(poly: ConvexPolygon) -> bool:
    """Bounded, convex, non-degenerate, with the origin strictly inside."""
    if poly.degenerate or len(poly) < 3 or not np.all(np.isfinite(poly.vertices)):
        return False
    if not poly.is_convex(1e-12) or poly.area <= 0:
        return False
    return poly.inner_margin(np.zeros(2)) > 1e-9 * poly.scale


def boundary_samples(poly: ConvexPolygon, m: int) -> np.ndarray:
    """``m`` points equally spaced in arc length, starting at the first vertex."""
    v = poly.vertices
    w = np.vstack([v, v[:1]])
    seg = np.hypot(*np.diff(w, axis=0).T)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    t = cum[-1] * np.arange(m) / m
    return np.column_stack([np.interp(t, cum, w[:, 0]), np.interp(t, cum, w[:, 1])])


def dual_wulff(w: WulffShape, m: int = 2048) -> WulffShape:
    """Lift to the sphere, take the polar set, project back to the chart.

    In chart coordinates this is the polar body of ``-W``.
    """
    poly = w.polygon
    if not convex_body_check(poly):
        raise PreconditionError("dual Wulff shape needs the origin strictly inside")
    pts = np.vstack([poly.vertices, boundary_samples(poly, m)])
    polar = polar_set(central_unproject(pts))
    if polar.kind != "polygon":
        raise ChartError(f"polar set is a {polar.kind}, not a cap inside the upper hemisphere")
    if np.any(polar.vertices[:, 2] <= 1e-12):
        raise ChartError("polar set meets the equator")
    return WulffShape.from_polygon(convex_hull(central_project(polar.vertices)), max(m, 256))


@dataclass(frozen=True)
class ShapeDiagnostics:
    vertex_count: int
    max_turning_angle: float
    edge_flat_runs: int
    smoothness_score: float
    corner_angles: tuple = ()


def _cyclic_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """(start, length) of maximal cyclic runs of True."""
    n = len(mask)
    if mask.all():
        return [(0, n)]
    if not mask.any():
        return []
    k = int(np.argmin(mask))  # rotate so index 0 is False
    m = np.roll(mask, -k)
    runs, start = [], None
    for i, b in enumerate(np.append(m, False)):
        if b and start is None:
            start = i
        elif not b and start is not None:
            runs.append(((start + k) % n, i - start))
            start = None
    return runs


def turning_angles(points: np.ndarray) -> np.ndarray:
    """Exterior turning angle at each point of a closed polyline."""
    e_in = points - np.roll(points, 1, axis=0)
    e_out = np.roll(points, -1, axis=0) - points
    c = e_in[:, 0] * e_out[:, 1] - e_in[:, 1] * e_out[:, 0]
    d = np.sum(e_in * e_out, axis=1)
    return np.abs(np.arctan2(c, d))


def diagnose_shape(w, m: int = 4096) -> ShapeDiagnostics:
    """Corner and flat-edge counts from turning angles of ``m`` boundary samples.

    A corner is a sample turning by more than ``5 * 2 pi / m``; adjacent corner
    samples form one vertex.  A flat run is at least ``0.05 m`` consecutive
    samples each turning by less than ``(2 pi / m) / 5``.
    """
    if m < 1024:
        raise ValueError("need at least 1024 boundary samples")
    poly = w.polygon if hasattr(w, "polygon") else w
    turn = turning_angles(boundary_samples(poly, m))
    unit = 2 * np.pi / m
    corners = _cyclic_runs(turn > 5 * unit)
    flats = [r for r in _cyclic_runs(turn < unit / 5) if r[1] >= 0.05 * m]
    angles = tuple(float(turn[(s + np.arange(L)) % m].sum()) for s, L in corners)
    mx = float(turn.max())
    return ShapeDiagnostics(len(corners), mx, len(flats), mx / unit, angles)

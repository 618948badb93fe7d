"""Floating-point 2D kernel: rotations, lines, half-planes, convex polygons.

Points and vectors are plain ``numpy`` arrays of shape ``(2,)`` (or ``(n, 2)``
for batches).  Tolerances are relative to a length ``scale`` supplied by the
caller; it defaults to 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateInputError

EPS_UNIT = 1e-12


def as_point(p) -> np.ndarray:
    """Coerce to a finite float array of shape (2,)."""
    a = np.asarray(p, dtype=float).reshape(2)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"non-finite point {a!r}")
    return a


def cross(a, b):
    """z-component of the 3D cross product; broadcasts over leading axes."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def rotate(v, theta: float) -> np.ndarray:
    """Rotate vector(s) counterclockwise by ``theta`` radians."""
    v = np.asarray(v, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    x, y = v[..., 0], v[..., 1]
    return np.stack([c * x - s * y, s * x + c * y], axis=-1)


@dataclass(frozen=True)
class Line2:
    """Line through ``base`` with unit direction ``dir``.

    The normal is the direction turned clockwise by a quarter turn, so the
    normal form is ``normal . x = offset``.
    """

    base: np.ndarray
    dir: np.ndarray

    def __post_init__(self):
        base = as_point(self.base)
        d = as_point(self.dir)
        if abs(np.hypot(*d) - 1.0) > EPS_UNIT:
            raise ValueError(f"line direction must be unit, got norm {np.hypot(*d)!r}")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dir", d)

    @classmethod
    def through(cls, base, direction) -> "Line2":
        d = np.asarray(direction, dtype=float)
        n = np.hypot(d[0], d[1])
        if n == 0.0:
            raise DegenerateInputError("zero direction vector")
        return cls(base, d / n)

    @property
    def normal(self) -> np.ndarray:
        return np.array([self.dir[1], -self.dir[0]])

    @property
    def offset(self) -> float:
        return float(self.normal @ self.base)


@dataclass(frozen=True)
class HalfPlane:
    """Closed half-plane ``{p : side * signed_distance(line, p) >= 0}``."""

    line: Line2
    side: int

    def __post_init__(self):
        if self.side not in (1, -1):
            raise ValueError("side must be +1 or -1")

    @classmethod
    def containing(cls, line: Line2, p) -> "HalfPlane":
        return cls(line, 1 if signed_distance(line, p) >= 0 else -1)

    @classmethod
    def from_inequality(cls, normal, offset: float) -> "HalfPlane":
        """The half-plane ``normal . x <= offset``."""
        n = np.asarray(normal, dtype=float)
        n = n / np.hypot(n[0], n[1])
        line = Line2(n * offset, np.array([-n[1], n[0]]))
        # Line2.normal is (dir_y, -dir_x) == n, so keep the non-positive side
        return cls(line, -1)

    def inequality(self) -> tuple[np.ndarray, float]:
        """Return ``(a, b)`` such that the half-plane is ``a . x <= b``."""
        a = -self.side * self.line.normal
        return a, float(-self.side * self.line.offset)

    def contains(self, p, tol: float = 0.0) -> bool:
        return self.side * signed_distance(self.line, p) >= -tol


def signed_distance(line: Line2, p) -> float:
    p = np.asarray(p, dtype=float)
    return line.normal @ p - line.offset


def foot_of_perpendicular(line: Line2, p) -> np.ndarray:
    p = as_point(p)
    return p - signed_distance(line, p) * line.normal


def invert(q, center, scale: float = 1.0) -> np.ndarray:
    """Plane inversion ``center - (q - center) / |q - center|^2``.

    The minus sign puts the image on the opposite side of ``center``; the map
    is still an involution.
    """
    q = np.asarray(q, dtype=float)
    center = np.asarray(center, dtype=float)
    d = q - center
    r2 = np.sum(d * d, axis=-1)
    if np.any(r2 <= (EPS_UNIT * scale) ** 2):
        raise DegenerateInputError("inversion of the center point")
    return center - d / r2[..., None]


@dataclass(frozen=True)
class ConvexPolygon:
    """Convex polygon with counterclockwise vertices.

    ``degenerate`` marks hulls of fewer than three affinely independent points.
    """

    vertices: np.ndarray
    degenerate: bool = field(default=False)

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=float).reshape(-1, 2)
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite polygon vertex")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        if len(v) < 3 and not self.degenerate:
            object.__setattr__(self, "degenerate", True)

    def __len__(self):
        return len(self.vertices)

    @classmethod
    def square(cls, center, side: float) -> "ConvexPolygon":
        c = as_point(center)
        h = side / 2.0
        return cls(c + np.array([[-h, -h], [h, -h], [h, h], [-h, h]]))

    @classmethod
    def regular(cls, n: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0):
        t = phase + 2 * np.pi * np.arange(n) / n
        return cls(np.asarray(center, float) + radius * np.column_stack([np.cos(t), np.sin(t)]))

    @property
    def edges(self) -> np.ndarray:
        return np.roll(self.vertices, -1, axis=0) - self.vertices

    @property
    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        v = v - v[0]
        return 0.5 * float(np.sum(cross(v, np.roll(v, -1, axis=0))))

    @property
    def perimeter(self) -> float:
        if len(self.vertices) < 2:
            return 0.0
        return float(np.sum(np.hypot(*self.edges.T)))

    @property
    def centroid(self) -> np.ndarray:
        v = self.vertices
        a = self.area
        if len(v) < 3 or a <= 0.0:
            return v.mean(axis=0)
        # shift to the first vertex for conditioning on small, far-away regions
        o = v[0]
        vs = v - o
        ws = np.roll(vs, -1, axis=0)
        c = cross(vs, ws)
        return o + ((vs + ws) * c[:, None]).sum(axis=0) / (6.0 * a)

    @property
    def diameter(self) -> float:
        v = self.vertices
        n = len(v)
        if n < 4 or self.degenerate:
            d = v[:, None, :] - v[None, :, :]
            return float(np.sqrt(np.max(np.sum(d * d, axis=-1))))
        # rotating calipers over antipodal vertex pairs
        e = self.edges
        best, j = 0.0, 1
        vl = v.tolist()
        el = e.tolist()
        for i in range(n):
            ex, ey = el[i]
            while j < i + 2 * n:
                a = vl[j % n]
                b = vl[(j + 1) % n]
                if ex * (b[1] - a[1]) - ey * (b[0] - a[0]) > 0:
                    j += 1
                else:
                    break
            for k in (i, (i + 1) % n):
                a = vl[j % n]
                best = max(best, (vl[k][0] - a[0]) ** 2 + (vl[k][1] - a[1]) ** 2)
        return float(np.sqrt(best))

    @property
    def scale(self) -> float:
        return max(self.diameter, 1e-300)

    def translated(self, offset) -> "ConvexPolygon":
        return ConvexPolygon(self.vertices + np.asarray(offset, float), self.degenerate)

    def edge_margins(self, p) -> np.ndarray:
        """Signed inward distances from point(s) ``p`` to every edge line.

        Shape ``(..., n_edges)``; all non-negative iff inside.
        """
        v = self.vertices
        e = self.edges
        L = np.hypot(e[:, 0], e[:, 1])
        keep = L > 0
        v, e, L = v[keep], e[keep], L[keep]
        p = np.asarray(p, dtype=float)
        return cross(e, p[..., None, :] - v) / L

    def contains(self, p, tol: float = 0.0) -> bool | np.ndarray:
        if self.degenerate:
            raise ValueError("containment undefined for a degenerate polygon")
        return np.all(self.edge_margins(p) >= -tol, axis=-1)

    def inner_margin(self, p) -> float:
        """Distance from ``p`` to the boundary, negative when outside."""
        return float(np.min(self.edge_margins(p)))

    def support(self, directions) -> np.ndarray:
        """Support values ``max_v v . u`` for unit directions ``u`` of shape (m, 2)."""
        return np.max(np.asarray(directions, float) @ self.vertices.T, axis=1)

    def is_convex(self, tol: float = 1e-12) -> bool:
        v = self.vertices
        if len(v) < 3:
            return False
        e = self.edges
        c = cross(e, np.roll(e, -1, axis=0))
        return bool(np.all(c >= -tol * self.scale ** 2))


def _dedupe_cyclic(v: np.ndarray, tol: float) -> np.ndarray:
    if len(v) < 2:
        return v
    d = np.hypot(*(np.roll(v, -1, axis=0) - v).T)
    keep = d > tol
    if not np.any(keep):
        return v[:1]
    return v[keep]


def clip_array(v: np.ndarray, a: np.ndarray, b: float, tol: float) -> np.ndarray | None:
    """Clip the ccw vertex array ``v`` to ``a . x <= b`` (``a`` unit).

    Vertices within ``tol`` outside the boundary count as inside.
    """
    d = v @ a - b
    inside = d <= tol
    if inside.all():
        return v
    if not inside.any():
        return None
    starts = np.flatnonzero(~inside & np.roll(inside, 1))
    if len(starts) == 1:
        # convex case: the outside vertices form one cyclic run; splice it out
        n = len(v)
        s = int(starts[0])
        ends = np.flatnonzero(~inside & np.roll(inside, -1))
        e = int(ends[0])
        run = (e - s) % n + 1
        p, q = (s - 1) % n, (e + 1) % n
        t1 = min(max(d[p] / (d[p] - d[s]), 0.0), 1.0)
        t2 = min(max(d[e] / (d[e] - d[q]), 0.0), 1.0)
        x1 = v[p] + t1 * (v[s] - v[p])
        x2 = v[e] + t2 * (v[q] - v[e])
        w = np.roll(v, -q, axis=0)[: n - run]
        new = [x for x, ref in ((x1, w[-1]), (x2, x1)) if np.hypot(*(x - ref)) > tol]
        if new and np.hypot(*(new[-1] - w[0])) <= tol:
            new.pop()
        out = np.vstack([w] + new) if new else w
        return out if len(out) >= 3 else None
    nxt = np.roll(inside, -1)
    dn = np.roll(d, -1)
    vn = np.roll(v, -1, axis=0)
    crossing = inside != nxt
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(crossing, d / (d - dn), 0.0)
    x = v + t[:, None] * (vn - v)
    # snap crossings that land on vertices treated as inside
    cand = np.stack([v, x], axis=1).reshape(-1, 2)
    mask = np.stack([inside, crossing], axis=1).reshape(-1)
    out = _dedupe_cyclic(cand[mask], tol)
    if len(out) < 3:
        return None
    return out


def clip(poly: ConvexPolygon, hp: HalfPlane, scale: float | None = None) -> ConvexPolygon | None:
    """Intersect a convex polygon with a closed half-plane.

    Returns ``None`` for an empty (or zero-area) intersection.
    """
    s = poly.scale if scale is None else scale
    a, b = hp.inequality()
    out = clip_array(poly.vertices, a, b, EPS_UNIT * s)
    if out is None:
        return None
    if out is poly.vertices:
        return poly
    return ConvexPolygon(out)


def intersect_halfplanes(normals, offsets, center, side: float, order=None) -> ConvexPolygon | None:
    """Intersect ``{x : normals[i] . x <= offsets[i]}`` inside a bounding square.

    ``normals`` must be unit rows.  ``order`` optionally gives the clipping
    order; tightest-first keeps the working polygon small.
    """
    normals = np.asarray(normals, dtype=float)
    offsets = np.asarray(offsets, dtype=float)
    v = ConvexPolygon.square(center, side).vertices.copy()
    tol = EPS_UNIT * side
    idx = range(len(offsets)) if order is None else order
    for i in idx:
        v = clip_array(v, normals[i], offsets[i], tol)
        if v is None:
            return None
    return ConvexPolygon(v)


def convex_hull(points) -> ConvexPolygon:
    """Andrew's monotone chain; collinear and interior points are dropped."""
    p = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(p) == 0:
        raise ValueError("convex hull of no points")
    p = np.unique(p, axis=0)  # lexicographic sort
    if len(p) < 3:
        return ConvexPolygon(p, degenerate=True)
    span = float(np.max(np.ptp(p, axis=0)))
    pts = [tuple(q) for q in p]

    def half(seq):
        out: list[tuple[float, float]] = []
        for q in seq:
            while len(out) >= 2:
                (ox, oy), (ax, ay) = out[-2], out[-1]
                if (ax - ox) * (q[1] - oy) - (ay - oy) * (q[0] - ox) <= 0.0:
                    out.pop()
                else:
                    break
            out.append(q)
        return out

    hull = np.array(half(pts)[:-1] + half(reversed(pts))[:-1])
    # drop vertices lying on the segment between their hull neighbours
    tol = EPS_UNIT * span
    while len(hull) >= 3:
        a, c = np.roll(hull, 1, axis=0), np.roll(hull, -1, axis=0)
        ac = c - a
        L = np.hypot(ac[:, 0], ac[:, 1])
        dist = np.abs(cross(ac, hull - a)) / np.where(L > 0, L, 1.0)
        flat = dist <= tol
        flat &= ~np.roll(flat, 1)
        if not flat.any():
            break
        hull = hull[~flat]
    if len(hull) < 3:
        return ConvexPolygon(hull, degenerate=True)
    return ConvexPolygon(hull)


def point_segment_distance(p, a, b) -> np.ndarray:
    """Distances from points ``p`` (m, 2) to segments ``a``-``b`` (k, 2); shape (m, k)."""
    p = np.asarray(p, float)[:, None, :]
    a = np.asarray(a, float)[None, :, :]
    ab = np.asarray(b, float)[None, :, :] - a
    L2 = np.sum(ab * ab, axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(L2 > 0, np.sum((p - a) * ab, axis=-1) / L2, 0.0)
    t = np.clip(t, 0.0, 1.0)
    d = p - (a + t[..., None] * ab)
    return np.hypot(d[..., 0], d[..., 1])

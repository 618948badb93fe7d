"""The no-silhouette region of a curve with tangent lines rotated by theta.

Two independent constructions are provided:

* :func:`region_by_clipping` intersects, around an interior seed, the closed
  half-planes bounded by the rotated tangent lines.
* :func:`support_function` / :func:`region_by_support` go through the pedal
  curve, its inversion (the dual curve), a convex hull and the resulting
  support function, then rebuild the region as a Wulff shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .curve import TWO_PI, ParametricCurve
from .errors import DegenerateInputError, EmptyIntersectionError, InconsistencyError, PreconditionError
from .geom2d import EPS_UNIT, ConvexPolygon, convex_hull, cross, intersect_halfplanes, invert, rotate

EPS_MEMBERSHIP = 1e-7  # times curve scale
EPS_EMPTY = 1e-4  # times curve scale
DEFAULT_SAMPLES = 2048
DEFAULT_DIRECTIONS = 1024

_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class LineFamily:
    """Rotated tangent lines sampled at ``params``.

    ``normals`` is the direction turned clockwise by a quarter turn; it varies
    continuously with ``s`` so a region of the complement lies on one fixed
    side of every line.
    """

    theta: float
    params: np.ndarray
    points: np.ndarray
    directions: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray

    def signed(self, p) -> np.ndarray:
        """Signed distances, shape ``p.shape[:-1] + (n_lines,)``."""
        return np.asarray(p, float) @ self.normals.T - self.offsets

    def distances(self, p) -> np.ndarray:
        return np.abs(self.signed(p))


def _frame(curve: ParametricCurve, theta: float, s):
    p = curve.point(s)
    d = curve.derivative(s)
    d = rotate(d / np.hypot(d[..., 0], d[..., 1])[..., None], theta)
    n = np.stack([d[..., 1], -d[..., 0]], axis=-1)
    return p, d, n


def line_family(curve: ParametricCurve, theta: float, n: int = DEFAULT_SAMPLES) -> LineFamily:
    s = np.linspace(0.0, TWO_PI, n, endpoint=False)
    p, d, nrm = _frame(curve, theta, s)
    return LineFamily(float(theta), s, p, d, nrm, np.sum(nrm * p, axis=1))


def _line_signed(curve, theta, p, s):
    q, _, nrm = _frame(curve, theta, s)
    return np.sum(nrm * (p - q), axis=-1)


def _line_distance(curve, theta, p, s):
    return np.abs(_line_signed(curve, theta, p, s))


def _bisect_roots(f, a, b, fa, iters: int = 60):
    """Vectorised bisection of ``f`` on brackets ``[a_i, b_i]`` with sign change."""
    for _ in range(iters):
        m = 0.5 * (a + b)
        fm = f(m)
        left = np.sign(fm) == np.sign(fa)
        a, fa = np.where(left, m, a), np.where(left, fm, fa)
        b = np.where(left, b, m)
    return 0.5 * (a + b)


def _golden_min(f, a, b, iters: int = 60):
    """Vectorised golden-section minimisation of ``f`` on ``[a_i, b_i]``."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        a = np.where(left, a, c)
        b = np.where(left, d, b)
        keep = np.where(left, c, d)
        fkeep = np.where(left, fc, fd)
        new = np.where(left, b - _INVPHI * (b - a), a + _INVPHI * (b - a))
        fnew = f(new)
        c = np.where(left, new, keep)
        fc = np.where(left, fnew, fkeep)
        d = np.where(left, keep, new)
        fd = np.where(left, fkeep, fnew)
    return np.minimum(fc, fd)


def margin(curve: ParametricCurve, theta: float, p, n: int = DEFAULT_SAMPLES, family: LineFamily | None = None) -> float:
    """Minimum distance from ``p`` to the rotated tangent lines.

    Sampled at ``n`` parameters, then refined by golden-section search
    around the five closest samples and by bisection wherever the signed
    distance changes sign between neighbouring samples.
    """
    p = np.asarray(p, dtype=float)
    fam = family if family is not None else line_family(curve, theta, n)
    f = fam.signed(p)
    dist = np.abs(f)
    k = min(5, len(dist))
    idx = np.argpartition(dist, k - 1)[:k]
    h = TWO_PI / len(dist)
    s0 = fam.params[idx]
    best = min(dist[idx].min(), _golden_min(lambda s: _line_distance(curve, theta, p, s), s0 - h, s0 + h).min())
    flip = np.nonzero(np.sign(f) * np.sign(np.roll(f, -1)) < 0)[0]
    if len(flip):
        a = fam.params[flip]
        root = _bisect_roots(lambda s: _line_signed(curve, theta, p, s), a, a + h, f[flip])
        best = min(best, _line_distance(curve, theta, p, root).min())
    return float(best)


def membership(curve: ParametricCurve, theta: float, p, n: int = DEFAULT_SAMPLES) -> tuple[bool, float]:
    """Whether ``p`` lies on none of the rotated tangent lines, and its margin."""
    if n < 512:
        raise ValueError("membership needs at least 512 samples")
    m = margin(curve, theta, p, n)
    return m > EPS_MEMBERSHIP * curve.scale, m


def _grid_margins(fam: LineFamily, pts: np.ndarray) -> np.ndarray:
    out = np.empty(len(pts))
    step = max(1, 2_000_000 // len(fam.offsets))
    for i in range(0, len(pts), step):
        out[i:i + step] = fam.distances(pts[i:i + step]).min(axis=1)
    return out


def chebyshev_center(fam: LineFamily, orientation: int, box: tuple[np.ndarray, np.ndarray]):
    """Largest disk on the ``orientation`` side of every sampled line.

    Returns ``(center, radius)`` or ``None`` if the linear program fails.
    The radius is negative when that side has an empty intersection.
    """
    lo, hi = box
    A = np.column_stack([-orientation * fam.normals, np.ones(len(fam.offsets))])
    b = -orientation * fam.offsets
    span = float(np.max(hi - lo))
    res = linprog(
        [0.0, 0.0, -1.0], A_ub=A, b_ub=b,
        bounds=[(lo[0], hi[0]), (lo[1], hi[1]), (-span, span)],
        method="highs",
    )
    if res.status != 0:
        return None
    return res.x[:2].copy(), float(res.x[2])


def find_seed(
    curve: ParametricCurve,
    theta: float,
    grid: int = 32,
    n: int = DEFAULT_SAMPLES,
    hint=None,
) -> tuple[np.ndarray, float] | None:
    """Locate a point of the region with maximal margin, or ``None`` if empty.

    A ``grid`` x ``grid`` lattice over the curve's bounding box is scanned,
    the best point is improved by coordinate descent, and the result is
    polished with the Chebyshev center of the sampled half-plane system for
    both orientations.  The region is declared empty when the best refined
    margin is below ``1e-4 * scale``.
    """
    if grid < 32:
        raise ValueError("seed grid must be at least 32")
    scale = curve.scale
    fam = line_family(curve, theta, n)
    lo, hi = curve.bbox
    pad = 0.05 * (hi - lo) + 1e-3 * scale
    lo, hi = lo - pad, hi + pad
    xs = np.linspace(lo[0], hi[0], grid)
    ys = np.linspace(lo[1], hi[1], grid)
    pts = np.stack(np.meshgrid(xs, ys, indexing="xy"), axis=-1).reshape(-1, 2)
    if hint is not None:
        pts = np.vstack([pts, np.asarray(hint, float).reshape(1, 2)])
    vals = _grid_margins(fam, pts)
    best = int(np.argmax(vals))
    p, val = pts[best].copy(), vals[best]

    step = max(xs[1] - xs[0], ys[1] - ys[0])
    moves = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    for _ in range(40):
        cand = p + step * moves
        cv = fam.distances(cand).min(axis=1)
        j = int(np.argmax(cv))
        if cv[j] > val:
            p, val = cand[j], cv[j]
        else:
            step *= 0.5

    candidates = [p]
    wide = (lo - 0.5 * scale, hi + 0.5 * scale)
    for orient in (1, -1):
        cc = chebyshev_center(fam, orient, wide)
        if cc is not None and cc[1] > 0:
            candidates.append(cc[0])
    scored = [(margin(curve, theta, c, n, fam), i) for i, c in enumerate(candidates)]
    m, i = max(scored)
    if m < EPS_EMPTY * scale:
        return None
    return np.asarray(candidates[i], float), m


@dataclass(frozen=True)
class RegionApprox:
    """Convex polygon approximating the closed region at angle ``theta``."""

    theta: float
    seed: np.ndarray
    polygon: ConvexPolygon
    margin: float

    def __post_init__(self):
        if not self.margin > 0:
            raise ValueError("region margin must be positive")


def region_by_clipping(curve: ParametricCurve, theta: float, seed, n: int = DEFAULT_SAMPLES) -> RegionApprox:
    """Intersect the half-planes of the sampled lines that contain ``seed``."""
    seed = np.asarray(seed, dtype=float)
    scale = curve.scale
    fam = line_family(curve, theta, n)
    inside, m = membership(curve, theta, seed, max(n, 512))
    if not inside:
        raise PreconditionError(f"seed {seed} is not in the region at theta={theta} (margin {m:.3g})")
    f = fam.signed(seed)
    side = np.sign(f)
    # keep side*(n.x - c) >= 0, i.e. (-side*n).x <= -side*c
    poly = intersect_halfplanes(
        -side[:, None] * fam.normals, -side * fam.offsets, seed, 8.0 * scale, order=np.argsort(np.abs(f))
    )
    if poly is None:
        raise InconsistencyError(f"clipping emptied the region at theta={theta}; seed not interior")
    return RegionApprox(float(theta), seed, poly, m)


def interior_check(curve: ParametricCurve, region: RegionApprox, n: int = DEFAULT_SAMPLES, count: int = 16) -> bool:
    """Points pulled 10% from the boundary toward the seed must be members.

    Detects a complement that is not a single convex cell.
    """
    v = region.polygon.vertices
    pick = v[np.linspace(0, len(v) - 1, min(count, len(v))).astype(int)]
    pts = region.seed + 0.9 * (pick - region.seed)
    return all(membership(curve, region.theta, q, n)[0] for q in pts)


def pedal_curve(curve: ParametricCurve, theta: float, seed, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Feet of the perpendiculars from ``seed`` to the sampled lines."""
    seed = np.asarray(seed, dtype=float)
    fam = line_family(curve, theta, n)
    f = fam.signed(seed)
    if np.any(np.abs(f) <= EPS_UNIT * curve.scale):
        raise DegenerateInputError("seed lies on a rotated tangent line")
    return seed - f[:, None] * fam.normals


def dual_curve(curve: ParametricCurve, theta: float, seed, n: int = DEFAULT_SAMPLES) -> np.ndarray:
    """Image of the pedal curve under inversion about ``seed``."""
    seed = np.asarray(seed, dtype=float)
    return invert(pedal_curve(curve, theta, seed, n), seed, curve.scale)


@dataclass(frozen=True)
class SupportFn:
    """Support values at ``M`` uniform directions ``(cos 2 pi j/M, sin 2 pi j/M)``."""

    center: np.ndarray
    values: np.ndarray
    theta: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if len(v) < 256:
            raise ValueError(f"support function needs at least 256 samples, got {len(v)}")
        if not np.all(np.isfinite(v)) or np.any(v <= 0):
            raise ValueError("support values must be finite and positive")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "center", np.asarray(self.center, dtype=float).reshape(2))

    @property
    def angles(self) -> np.ndarray:
        return TWO_PI * np.arange(len(self.values)) / len(self.values)

    @property
    def directions(self) -> np.ndarray:
        a = self.angles
        return np.column_stack([np.cos(a), np.sin(a)])

    def resampled(self, m: int) -> "SupportFn":
        if m == len(self.values):
            return self
        a = TWO_PI * np.arange(m) / m
        v = np.interp(a, self.angles, self.values, period=TWO_PI)
        return SupportFn(self.center, v, self.theta)


def radial_hits(poly: ConvexPolygon, origin, angles) -> np.ndarray:
    """Distance from ``origin`` to the boundary of ``poly`` along each angle.

    ``origin`` must be strictly inside; the edge is located by binary search
    over the vertices' polar angles, which increase monotonically for a
    star-shaped boundary.
    """
    rel = poly.vertices - np.asarray(origin, float)
    if poly.degenerate or poly.inner_margin(origin) <= 0:
        raise InconsistencyError("ray origin is not interior to the hull")
    ang = np.arctan2(rel[:, 1], rel[:, 0])
    k0 = int(np.argmin(ang))
    rel, ang = np.roll(rel, -k0, axis=0), np.roll(ang, -k0)
    if np.any(np.diff(ang) <= 0):
        raise InconsistencyError("hull boundary is not star-shaped about the origin")
    q = np.mod(np.asarray(angles, float) - ang[0], TWO_PI) + ang[0]
    k = np.searchsorted(ang, q, side="right") - 1
    a = rel[k]
    b = rel[(k + 1) % len(rel)]
    w = np.column_stack([np.cos(q), np.sin(q)])
    e = b - a
    rho = cross(a, e) / cross(w, e)
    tau = cross(a, w) / cross(w, e)
    bad = ~np.isfinite(rho) | (rho <= 0) | (tau < -1e-9) | (tau > 1 + 1e-9)
    if np.any(bad):
        raise InconsistencyError("ray failed to meet the hull boundary exactly once")
    return rho


def support_function(
    curve: ParametricCurve,
    theta: float,
    seed,
    n: int = DEFAULT_SAMPLES,
    m: int = DEFAULT_DIRECTIONS,
) -> SupportFn:
    """Support function of the region about ``seed`` via pedal/dual/hull.

    The inverted hull boundary meets the ray from ``seed`` in direction
    ``u`` at distance ``1 / rho`` where ``rho`` is the hull's radial
    distance in direction ``-u`` (the inversion reverses rays).
    """
    seed = np.asarray(seed, dtype=float)
    hull = convex_hull(dual_curve(curve, theta, seed, n))
    angles = TWO_PI * np.arange(m) / m
    rho = radial_hits(hull, seed, angles + np.pi)
    return SupportFn(seed, 1.0 / rho, float(theta))


def wulff_polygon(sf: SupportFn) -> ConvexPolygon:
    """Polygon ``{x : x . u_j <= h_j}`` about the origin."""
    h = sf.values
    poly = intersect_halfplanes(sf.directions, h, np.zeros(2), 4.0 * float(h.max()), order=np.argsort(h))
    if poly is None:
        raise EmptyIntersectionError("support half-planes have an empty intersection")
    return poly


def region_by_support(sf: SupportFn) -> RegionApprox:
    """Wulff shape of ``sf`` translated back to its center."""
    poly = wulff_polygon(sf).translated(sf.center)
    return RegionApprox(float(sf.theta) if sf.theta is not None else float("nan"), sf.center, poly, float(sf.values.min()))

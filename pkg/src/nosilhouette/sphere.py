"""Unit-sphere side of the construction.

Central projection to the plane ``z = 1``, the map ``psi_N``, spherical polar
sets, hemisphericity, spherical convex hulls and spherical Frenet frames of
lifted plane curves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import linprog, minimize

from .curve import TWO_PI, ParametricCurve
from .errors import ChartError, DegenerateInputError, PreconditionError
from .geom2d import ConvexPolygon, clip_array, convex_hull, point_segment_distance

NORTH = np.array([0.0, 0.0, 1.0])
TOL = 1e-12


def _unit_rows(w) -> np.ndarray:
    w = np.asarray(w, dtype=float).reshape(-1, 3)
    n = np.linalg.norm(w, axis=1)
    if np.any(n == 0):
        raise DegenerateInputError("zero vector is not a sphere point")
    return w / n[:, None]


def central_project(p) -> np.ndarray:
    """Chart coordinates ``(P1/P3, P2/P3)`` of points in the open upper hemisphere."""
    p = np.asarray(p, dtype=float)
    if np.any(p[..., 2] <= TOL):
        raise ChartError("central projection needs P3 > 0")
    return p[..., :2] / p[..., 2:3]


def central_unproject(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    v = np.concatenate([q, np.ones(q.shape[:-1] + (1,))], axis=-1)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def psi_N(p) -> np.ndarray:
    """``(N - (N.P) P) / sqrt(1 - (N.P)^2)`` for ``P != +-N``."""
    p = np.asarray(p, dtype=float)
    c = p[..., 2]
    if np.any(np.abs(c) >= 1.0 - TOL):
        raise DegenerateInputError("psi_N is undefined at the poles")
    out = NORTH - c[..., None] * p
    return out / np.sqrt(1.0 - c * c)[..., None]


def tangent_basis(c) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal ``e1, e2`` with ``(e1, e2, c)`` right-handed."""
    c = np.asarray(c, float)
    a = np.array([1.0, 0.0, 0.0]) if abs(c[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = a - (a @ c) * c
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(c, e1)


def gnomonic(points, center) -> np.ndarray:
    """Chart coordinates about ``center``; points must satisfy ``P . center > 0``."""
    p = np.asarray(points, float)
    e1, e2 = tangent_basis(center)
    z = p @ center
    if np.any(z <= TOL):
        raise ChartError("point outside the open hemisphere of the chart center")
    return np.stack([p @ e1, p @ e2], axis=-1) / z[..., None]


def ungnomonic(q, center) -> np.ndarray:
    q = np.asarray(q, float)
    e1, e2 = tangent_basis(center)
    v = q[..., :1] * e1 + q[..., 1:2] * e2 + np.asarray(center, float)
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def slerp_arc(p, q, k: int) -> np.ndarray:
    """``k`` points on the minor arc from ``p`` to ``q`` (``q`` excluded)."""
    t = np.arange(k)[:, None] / k
    v = (1 - t) * np.asarray(p, float) + t * np.asarray(q, float)
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@dataclass(frozen=True)
class Hemisphere:
    """Closed hemisphere ``H(P) = {Q : P . Q >= 0}``."""

    pole: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "pole", _unit_rows(self.pole)[0])

    def contains(self, q, tol: float = 0.0):
        return np.asarray(q, float) @ self.pole >= -tol


@dataclass(frozen=True)
class SphericalPolygon:
    """Spherically convex polygon inside the open hemisphere about ``center``.

    Boundary arcs are minor great-circle arcs between consecutive vertices,
    counterclockwise seen from outside the sphere.
    """

    vertices: np.ndarray
    center: np.ndarray

    @property
    def chart(self) -> ConvexPolygon:
        return ConvexPolygon(gnomonic(self.vertices, self.center))

    def contains(self, q, tol: float = 1e-12):
        q = np.asarray(q, float)
        z = q @ self.center
        ok = z > TOL
        chart = self.chart
        out = np.zeros(q.shape[:-1], dtype=bool)
        if not np.any(ok):
            return out if out.ndim else bool(out)
        qc = np.where(ok[..., None], q, self.center)
        g = gnomonic(qc, self.center)
        if chart.degenerate:
            v = chart.vertices
            flat = g.reshape(-1, 2)
            d = point_segment_distance(flat, v, np.roll(v, -1, axis=0)).min(axis=1)
            inside = d.reshape(g.shape[:-1]) <= tol
        else:
            inside = np.all(chart.edge_margins(g) >= -tol, axis=-1)
        out = ok & inside
        return out if out.ndim else bool(out)

    def boundary_samples(self, per_arc: int = 64) -> np.ndarray:
        v = self.vertices
        if len(v) == 1:
            return v.copy()
        return np.vstack([slerp_arc(v[i], v[(i + 1) % len(v)], per_arc) for i in range(len(v))])

    def is_spherically_convex(self, tol: float = 1e-9) -> bool:
        # great-circle arcs are chart segments, so chart convexity is equivalent
        c = self.chart
        return c.degenerate or c.is_convex(tol)


@dataclass(frozen=True)
class PolarSet:
    """``{Q : P_i . Q >= 0 for all i}``.

    ``kind`` is one of ``polygon``, ``lune``, ``hemisphere``, ``great_circle``,
    ``arc``, ``point``, ``points`` or ``empty``; ``vertices`` lists polygon
    corners, lune tips or arc endpoints as applicable.
    """

    normals: np.ndarray
    kind: str
    vertices: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    polygon: SphericalPolygon | None = None

    def contains(self, q, tol: float = 1e-12):
        return np.min(np.asarray(q, float) @ self.normals.T, axis=-1) >= -tol

    @property
    def is_empty(self) -> bool:
        return self.kind == "empty"


def _interior_lp(P: np.ndarray):
    """max t s.t. P x >= t, |x|_inf <= 1."""
    k = len(P)
    res = linprog([0, 0, 0, -1.0], A_ub=np.column_stack([-P, np.ones(k)]), b_ub=np.zeros(k),
                  bounds=[(-1, 1)] * 3 + [(None, 1)], method="highs")
    return res.x[:3], float(res.x[3])


def _implicit_equalities(P: np.ndarray, tol: float) -> np.ndarray:
    k = len(P)
    eq = np.zeros(k, dtype=bool)
    for i in range(k):
        c = np.zeros(k)
        c[i] = -1.0
        res = linprog(c, A_eq=P.T, b_eq=np.zeros(3), bounds=[(0, 1)] * k, method="highs")
        eq[i] = res.status == 0 and -res.fun > tol
    return eq


def polar_set(W) -> PolarSet:
    """Spherical polar set of a finite point set."""
    P = np.unique(np.round(_unit_rows(W), 15), axis=0)
    P = _unit_rows(P)
    x, t = _interior_lp(P)
    rank = np.linalg.matrix_rank(P, tol=1e-10)
    if t > 1e-10:
        if rank == 1:
            return PolarSet(P, "hemisphere", P[:1].copy())
        if rank == 2:
            a = null_space(P, rcond=1e-10)[:, 0]
            return PolarSet(P, "lune", np.vstack([a, -a]))
        d = P.sum(axis=0)
        d /= np.linalg.norm(d)
        poly = _chart_intersection(P, d, x / np.linalg.norm(x))
        return PolarSet(P, "polygon", poly.vertices, poly)

    eq = _implicit_equalities(P, 1e-10)
    B = null_space(P[eq], rcond=1e-10)
    rest = P[~eq]
    if B.shape[1] == 0:
        return PolarSet(P, "empty")
    if B.shape[1] == 1:
        d = B[:, 0]
        pts = [v for v in (d, -d) if np.all(rest @ v >= -1e-10)]
        if not pts:
            return PolarSet(P, "empty")
        return PolarSet(P, "point" if len(pts) == 1 else "points", np.array(pts))
    # a great circle through the plane spanned by B, cut by the remaining constraints
    proj = rest @ B
    proj = proj[np.linalg.norm(proj, axis=1) > 1e-10]
    if len(proj) == 0:
        return PolarSet(P, "great_circle")
    # each constraint keeps the half circle of angles within pi/2 of its direction
    phi = np.arctan2(proj[:, 1], proj[:, 0])
    lo, hi = phi[0] - np.pi / 2, phi[0] + np.pi / 2
    for f in phi[1:]:
        f = lo + np.mod(f - lo, TWO_PI)
        if f - np.pi / 2 > hi:
            f -= TWO_PI
        lo, hi = max(lo, f - np.pi / 2), min(hi, f + np.pi / 2)
    if hi < lo - 1e-12:
        return PolarSet(P, "empty")
    ends = np.array([B @ [np.cos(a), np.sin(a)] for a in (lo, hi)])
    return PolarSet(P, "arc" if hi - lo > 1e-12 else "point", ends if hi - lo > 1e-12 else ends[:1])


def _chart_intersection(P: np.ndarray, center: np.ndarray, interior: np.ndarray) -> SphericalPolygon:
    e1, e2 = tangent_basis(center)
    # P . (x e1 + y e2 + c) >= 0  <=>  -(P.e1, P.e2) . (x, y) <= P . c
    a = -np.column_stack([P @ e1, P @ e2])
    b = P @ center
    na = np.linalg.norm(a, axis=1)
    g0 = gnomonic(interior, center)
    side = 4.0 * (1.0 + np.linalg.norm(g0))
    for _ in range(60):
        v = ConvexPolygon.square(g0, side).vertices.copy()
        for i in np.argsort(b / np.where(na > 0, na, 1.0)):
            if na[i] <= 0:
                continue
            v = clip_array(v, a[i] / na[i], b[i] / na[i], 1e-12 * side)
            if v is None:
                raise ChartError("polar set vanished in the chart")
        if np.max(np.abs(v - g0)) < 0.49 * side:
            return SphericalPolygon(ungnomonic(v, center), center)
        side *= 4.0
    raise ChartError("polar set is unbounded in the chosen chart")


def _fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(1 - z * z)
    a = np.pi * (1 + 5 ** 0.5) * i
    return np.column_stack([r * np.cos(a), r * np.sin(a), z])


def hemispherical_check(W, grid: int = 4000) -> np.ndarray | None:
    """A point ``P`` with ``P . w < 0`` for every ``w`` in ``W``, or ``None``.

    Maximises ``min_w (-P . w)`` on a Fibonacci grid, then refines with SLSQP
    over the unit ball.
    """
    W = _unit_rows(W)
    G = _fibonacci_sphere(grid)
    vals = np.min(-(G @ W.T), axis=1)
    p0 = G[int(np.argmax(vals))]
    best = p0, float(vals.max())
    x0 = np.append(p0, best[1])
    res = minimize(
        lambda x: -x[3], x0, method="SLSQP",
        constraints=[{"type": "ineq", "fun": lambda x: -(W @ x[:3]) - x[3]},
                     {"type": "ineq", "fun": lambda x: 1.0 - x[:3] @ x[:3]}],
        options={"ftol": 1e-14, "maxiter": 200},
    )
    if res.success and np.linalg.norm(res.x[:3]) > 0:
        p = res.x[:3] / np.linalg.norm(res.x[:3])
        v = float(np.min(-(W @ p)))
        if v > best[1]:
            best = p, v
    if best[1] <= 1e-9:
        return None
    return best[0]


def spherical_convex_hull(W) -> SphericalPolygon:
    """Hull of a hemispherical finite set through a gnomonic chart."""
    W = _unit_rows(W)
    witness = hemispherical_check(W)
    if witness is None:
        raise PreconditionError("spherical convex hull needs a hemispherical set")
    c = W.mean(axis=0)
    if np.linalg.norm(c) < 1e-12 or np.min(W @ c) <= 1e-9 * np.linalg.norm(c):
        c = -witness
    c = c / np.linalg.norm(c)
    g = gnomonic(W, c)
    hull = convex_hull(g)
    # map hull vertices back to the exact input points
    idx = [int(np.argmin(np.linalg.norm(g - v, axis=1))) for v in hull.vertices]
    return SphericalPolygon(W[idx], c)


def maehara_disagreements(W, trials: int, rng=None, tol: float = 1e-9, per_arc: int = 32, interior: int = 256) -> int:
    """Count random directions where ``(s-conv W)°`` and ``∩ H(P_i)`` disagree.

    The hull's polar is tested against dense samples of the hull itself
    (vertices, boundary arcs, random normalised combinations); the right-hand
    side uses the raw points.  Directions within ``tol`` of either boundary
    are not counted.
    """
    rng = np.random.default_rng(rng)
    W = _unit_rows(W)
    hull = spherical_convex_hull(W)
    V = hull.vertices
    combos = rng.dirichlet(np.ones(len(V)), size=interior) @ V
    X = np.vstack([hull.boundary_samples(per_arc), combos / np.linalg.norm(combos, axis=1, keepdims=True)])
    Q = rng.normal(size=(trials, 3))
    Q /= np.linalg.norm(Q, axis=1, keepdims=True)
    bad = 0
    for i in range(0, trials, 8192):
        q = Q[i:i + 8192]
        lhs = np.min(q @ X.T, axis=1)
        rhs = np.min(q @ W.T, axis=1)
        clear = (np.abs(lhs) > tol) & (np.abs(rhs) > tol)
        bad += int(np.sum(clear & ((lhs >= 0) != (rhs >= 0))))
    return bad


def maehara_check(W, trials: int = 100_000, rng=None, tol: float = 1e-9) -> bool:
    W = _unit_rows(W)
    if not 1 <= len(W) <= 12:
        raise ValueError("Maehara check supports 1 to 12 points")
    return maehara_disagreements(W, trials, rng, tol) == 0


def random_hemispherical_set(k: int, rng, max_angle: float = 1.4) -> np.ndarray:
    """``k`` random points within ``max_angle`` radians of a random center."""
    rng = np.random.default_rng(rng)
    c = rng.normal(size=3)
    c /= np.linalg.norm(c)
    e1, e2 = tangent_basis(c)
    ang = max_angle * np.sqrt(rng.uniform(size=k))
    az = rng.uniform(0, TWO_PI, size=k)
    d = np.cos(az)[:, None] * e1 + np.sin(az)[:, None] * e2
    return np.cos(ang)[:, None] * c + np.sin(ang)[:, None] * d


def angular_hausdorff(a: SphericalPolygon, b: SphericalPolygon, samples: int = 8192) -> float:
    """Hausdorff distance in radians between two spherical convex polygons.

    Each boundary is sampled with about ``samples`` points.
    """

    def directed(x: SphericalPolygon, y: SphericalPolygon) -> float:
        pts = x.boundary_samples(max(1, samples // len(x.vertices)))
        outside = pts[~y.contains(pts, 1e-12)]
        if len(outside) == 0:
            return 0.0
        yb = y.boundary_samples(max(1, samples // len(y.vertices)))
        best = 0.0
        for i in range(0, len(outside), 1024):
            c = np.clip(np.max(outside[i:i + 1024] @ yb.T, axis=1), -1.0, 1.0)
            best = max(best, float(np.max(np.arccos(c))))
        return best

    return max(directed(a, b), directed(b, a))


def cap_polygon(center, radius: float, k: int = 256) -> SphericalPolygon:
    """Polygon inscribed in the cap of angular ``radius`` about ``center``."""
    c = _unit_rows(center)[0]
    e1, e2 = tangent_basis(c)
    az = TWO_PI * np.arange(k) / k
    d = np.cos(az)[:, None] * e1 + np.sin(az)[:, None] * e2
    return SphericalPolygon(np.cos(radius) * c + np.sin(radius) * d, c)


def polar_continuity(alpha: float = np.pi / 6, eps=(0.2, 0.1, 0.05, 0.025, 0.0125), k: int = 256):
    """Hausdorff distances of caps ``A_eps`` to ``A`` and of their polars.

    Returns ``(d_sets, d_polars)`` as arrays aligned with ``eps``.
    """
    base = cap_polygon(NORTH, alpha, k)
    base_polar = polar_set(base.vertices).polygon
    d_sets, d_polars = [], []
    for e in eps:
        a = cap_polygon(NORTH, alpha + e, k)
        d_sets.append(angular_hausdorff(a, base))
        d_polars.append(angular_hausdorff(polar_set(a.vertices).polygon, base_polar))
    return np.array(d_sets), np.array(d_polars)


@dataclass(frozen=True)
class SphericalFrame:
    """Unit-speed samples of a spherical curve and its moving frame.

    ``arclength`` holds the sample positions; ``n_tilde = r_tilde x t_tilde``.
    """

    arclength: np.ndarray
    r_tilde: np.ndarray
    t_tilde: np.ndarray
    n_tilde: np.ndarray
    kappa_g: np.ndarray
    length: float

    @property
    def step(self) -> float:
        return self.length / len(self.arclength)


def _periodic_diff(x: np.ndarray, h: float) -> np.ndarray:
    return (np.roll(x, -1, axis=0) - np.roll(x, 1, axis=0)) / (2.0 * h)


def frame_from_spherical(fn, n: int = 4096, oversample: int = 16) -> SphericalFrame:
    """Frame of the closed spherical curve ``fn(s)``, ``s`` in [0, 2*pi).

    The curve is resampled at uniform spherical arc length using cumulative
    chord lengths of an ``oversample``-times finer parameter grid.
    """
    s = np.linspace(0.0, TWO_PI, n * oversample, endpoint=False)
    P = _unit_rows(fn(s))
    seg = 2.0 * np.arcsin(np.clip(np.linalg.norm(np.roll(P, -1, axis=0) - P, axis=1) / 2.0, 0.0, 1.0))
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    L = float(cum[-1])
    sig = L * np.arange(n) / n
    su = np.interp(sig, cum, np.append(s, TWO_PI))
    R = _unit_rows(fn(su))
    h = L / n
    T = _periodic_diff(R, h)
    T -= np.sum(T * R, axis=1, keepdims=True) * R
    T /= np.linalg.norm(T, axis=1, keepdims=True)
    Nn = np.cross(R, T)
    dT = _periodic_diff(T, h)
    kg = np.einsum("ij,ij->i", R, np.cross(T, dT))
    return SphericalFrame(sig, R, T, Nn, kg, L)


def spherical_frenet(curve: ParametricCurve, center=(0.0, 0.0), n: int = 4096) -> SphericalFrame:
    """Frame of the lift ``central_unproject(r(s) - center)`` of a plane curve."""
    c = np.asarray(center, float)
    return frame_from_spherical(lambda s: central_unproject(curve.point(s) - c), n)


def frenet_residual(frame: SphericalFrame) -> float:
    """Max of ``|n_tilde' + kappa_g t_tilde|`` by central differences."""
    dN = _periodic_diff(frame.n_tilde, frame.step)
    return float(np.max(np.linalg.norm(dN + frame.kappa_g[:, None] * frame.t_tilde, axis=1)))


def rotated_dual(frame: SphericalFrame, theta: float) -> tuple[np.ndarray, float]:
    """``cos(theta) n_tilde - sin(theta) t_tilde`` and its minimum speed."""
    nt = np.cos(theta) * frame.n_tilde - np.sin(theta) * frame.t_tilde
    speed = np.linalg.norm(_periodic_diff(nt, frame.step), axis=1)
    return nt, float(speed.min())

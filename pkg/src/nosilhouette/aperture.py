"""Growth and dissolution of the region as the rotation angle increases."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .curve import ParametricCurve, inflection_points
from .errors import PreconditionError
from .geom2d import ConvexPolygon
from .metric import CompactSet2, dist_set_to_set, hausdorff
from .silhouette import DEFAULT_SAMPLES, EPS_EMPTY, RegionApprox, find_seed, membership, region_by_clipping

HALF_PI = np.pi / 2
SCAN_STEP = np.pi / 180
NESTING_TOL = 1e-6


@dataclass(frozen=True)
class SweepResult:
    thetas: np.ndarray
    regions: tuple  # RegionApprox or None (empty)
    areas: np.ndarray
    diameters: np.ndarray
    consecutive_dH: np.ndarray  # nan where either neighbour is empty
    scale: float

    @property
    def empty(self) -> np.ndarray:
        return np.array([r is None for r in self.regions])

    @property
    def monotone_emptiness(self) -> bool:
        """No non-empty region after the first empty one."""
        e = self.empty
        return not e.any() or bool(e[int(np.argmax(e)):].all())

    @property
    def max_consecutive_dH(self) -> float:
        d = self.consecutive_dH
        return float(np.nanmax(d)) if np.any(np.isfinite(d)) else float("nan")


def _region(curve, theta, n, grid, hint):
    found = find_seed(curve, theta, grid=grid, n=n, hint=hint)
    if found is None:
        return None
    return region_by_clipping(curve, theta, found[0], n)


def sweep(curve: ParametricCurve, thetas, n: int = DEFAULT_SAMPLES, grid: int = 32) -> SweepResult:
    """Regions at each angle, seeded from the previous angle's seed."""
    th = np.asarray(thetas, dtype=float).reshape(-1)
    if len(th) == 0 or np.any(np.diff(th) <= 0) or th[0] < 0 or th[-1] > HALF_PI + 1e-12:
        raise ValueError("thetas must increase strictly within [0, pi/2]")
    if find_seed(curve, 0.0, grid=grid, n=n) is None:
        raise PreconditionError(f"{curve.label}: the region at theta=0 is empty")
    regions, hint = [], None
    for t in th:
        r = _region(curve, t, n, grid, hint)
        regions.append(r)
        if r is not None:
            hint = r.seed
    areas = np.array([r.polygon.area if r else 0.0 for r in regions])
    diams = np.array([r.polygon.diameter if r else 0.0 for r in regions])
    dh = np.full(max(len(th) - 1, 0), np.nan)
    for i in range(len(th) - 1):
        if regions[i] is not None and regions[i + 1] is not None:
            dh[i] = hausdorff(regions[i].polygon, regions[i + 1].polygon)
    return SweepResult(th, tuple(regions), areas, diams, dh, curve.scale)


@dataclass(frozen=True)
class NestingResult:
    holds: bool
    guaranteed: bool  # curve is inflection-free, so nesting is guaranteed
    max_violation: float

    def __bool__(self):
        return self.holds

    @property
    def label(self) -> str:
        return "guaranteed" if self.guaranteed else "not guaranteed by theory"


def nesting_check(result: SweepResult, curve: ParametricCurve | None = None, tol: float = NESTING_TOL) -> NestingResult:
    """Every later region lies inside every earlier one, up to ``tol * scale``."""
    guaranteed = curve is not None and not inflection_points(curve)
    polys = [r.polygon for r in result.regions if r is not None]
    worst = 0.0
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            worst = max(worst, dist_set_to_set(CompactSet2(cloud=polys[j].vertices), polys[i]))
    return NestingResult(worst <= tol * result.scale, guaranteed, float(worst))


@dataclass(frozen=True)
class ApertureEstimate:
    theta_r: float
    theta_r_bracket: tuple
    scan_thetas: np.ndarray
    scan_empty: np.ndarray
    monotone: bool  # emptiness never reverts on the scan
    aperture_point: np.ndarray | None = None
    final_diameter: float | None = None
    schedule: np.ndarray = field(default_factory=lambda: np.zeros(0))
    diameters: np.ndarray = field(default_factory=lambda: np.zeros(0))
    centroids: np.ndarray = field(default_factory=lambda: np.zeros((0, 2)))
    shrinking: bool | None = None  # diameters non-increasing within 10%
    regions: tuple = ()  # regions along the schedule, None where empty


def _is_empty(curve, theta, n, grid, hint=None) -> tuple[bool, np.ndarray | None]:
    found = find_seed(curve, theta, grid=grid, n=n, hint=hint)
    return (True, hint) if found is None else (False, found[0])


def aperture_angle(curve: ParametricCurve, tol: float = 1e-5, n: int = DEFAULT_SAMPLES, grid: int = 32) -> ApertureEstimate:
    """Bracket the first angle where the region becomes empty.

    A one-degree scan over [0, pi/2] locates the first empty angle; the whole
    scan is kept so that regions reappearing later are flagged.  Bisection then
    narrows the bracket to ``tol``.
    """
    if tol < 1e-6:
        raise ValueError("tol must be at least 1e-6")
    k = int(round(HALF_PI / SCAN_STEP))
    scan = np.append(SCAN_STEP * np.arange(k), HALF_PI)
    flags, hint = [], None
    for t in scan:
        e, s = _is_empty(curve, t, n, grid, hint)
        flags.append(e)
        hint = s if not e else hint
    flags = np.array(flags)
    if flags[0]:
        raise PreconditionError(f"{curve.label}: the region at theta=0 is empty")
    first = int(np.argmax(flags)) if flags.any() else len(scan) - 1
    monotone = bool(flags[first:].all()) if flags.any() else False
    lo, hi = float(scan[first - 1]) if flags.any() else float(scan[-1]), float(scan[first])
    _, hint = _is_empty(curve, lo, n, grid)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        g = 2 * grid if hi - mid < 0.05 * mid else grid
        e, s = _is_empty(curve, mid, n, g, hint)
        if e:
            hi = mid
        else:
            lo, hint = mid, s
    return ApertureEstimate(0.5 * (lo + hi), (lo, hi), scan, flags, monotone)


def dissolution_schedule(estimate: ApertureEstimate, count: int = 12) -> np.ndarray:
    lo, hi = estimate.theta_r_bracket
    delta = max(4.0 * (hi - lo), 1e-5)
    return lo - delta * 2.0 ** -np.arange(1, count + 1)


def aperture_point(curve: ParametricCurve, estimate: ApertureEstimate | None = None, n: int = DEFAULT_SAMPLES, grid: int = 32) -> ApertureEstimate:
    """Follow the regions toward the bracket and report the last centroid.

    Returns ``estimate`` extended with the schedule, diameters, centroids,
    the aperture point and its final diameter.
    """
    if estimate is None:
        estimate = aperture_angle(curve, n=n, grid=grid)
    sched = dissolution_schedule(estimate)
    lo = estimate.theta_r_bracket[0]
    diams, cents, regions, hint = [], [], [], None
    for t in sched:
        g = 2 * grid if lo - t < 0.05 * lo else grid
        r = _region(curve, t, n, g, hint)
        regions.append(r)
        if r is None:
            diams.append(np.nan)
            cents.append([np.nan, np.nan])
            continue
        hint = r.seed
        diams.append(r.polygon.diameter)
        cents.append(r.polygon.centroid)
    diams, cents = np.array(diams), np.array(cents)
    ok = np.isfinite(diams)
    if not ok.any():
        raise PreconditionError(f"{curve.label}: every region on the dissolution schedule is empty")
    d = diams[ok]
    shrinking = bool(np.all(d[1:] <= 1.1 * d[:-1]))
    last = int(np.nonzero(ok)[0][-1])
    return replace(estimate, aperture_point=cents[last], final_diameter=float(diams[last]),
                   schedule=sched, diameters=diams, centroids=cents, shrinking=shrinking, regions=tuple(regions))


@dataclass(frozen=True)
class ApertureSet:
    thetas: np.ndarray
    cloud: np.ndarray  # vertices of every swept region
    base: ConvexPolygon  # the region at theta = 0
    nested: bool
    area: float  # area of the union


def aperture_set(curve: ParametricCurve, estimate: ApertureEstimate, steps: int = 16, n: int = DEFAULT_SAMPLES) -> ApertureSet:
    """Union of the regions on ``steps`` angles in ``[0, theta_r)``."""
    from shapely.geometry import Polygon
    from shapely.ops import unary_union

    th = np.linspace(0.0, estimate.theta_r_bracket[0], steps, endpoint=False)
    res = sweep(curve, th, n)
    regions = [r for r in res.regions if r is not None]
    nest = nesting_check(res, curve)
    union = unary_union([Polygon(r.polygon.vertices) for r in regions])
    cloud = np.vstack([r.polygon.vertices for r in regions])
    return ApertureSet(th, cloud, regions[0].polygon, bool(nest), float(union.area))


def normal_lines_check(curve: ParametricCurve, trials: int = 500, n: int = DEFAULT_SAMPLES, rng=0, threshold: float = 1e-5) -> bool:
    """Random points in a ``4 * scale`` box all lie on a normal line."""
    if trials < 100:
        raise ValueError("need at least 100 trials")
    rng = np.random.default_rng(rng)
    lo, hi = curve.bbox
    c, s = 0.5 * (lo + hi), curve.scale
    pts = c + rng.uniform(-2.0 * s, 2.0 * s, size=(trials, 2))
    return all(membership(curve, HALF_PI, p, n)[1] < threshold * s for p in pts)


def continuity_check(curve: ParametricCurve, theta_max: float, steps: int = 8, n: int = 1024) -> tuple[float, float]:
    """Max consecutive d_H on a grid over ``[0, theta_max]`` and on the halved grid."""
    coarse = sweep(curve, np.linspace(0.0, theta_max, steps + 1), n)
    fine = sweep(curve, np.linspace(0.0, theta_max, 2 * steps + 1), n)
    return coarse.max_consecutive_dH, fine.max_consecutive_dH


def is_empty_region(curve: ParametricCurve, theta: float, n: int = DEFAULT_SAMPLES) -> bool:
    return find_seed(curve, theta, n=n) is None


__all__ = [
    "EPS_EMPTY", "SweepResult", "sweep", "NestingResult", "nesting_check", "ApertureEstimate",
    "aperture_angle", "aperture_point", "dissolution_schedule", "ApertureSet", "aperture_set",
    "normal_lines_check", "continuity_check", "is_empty_region", "RegionApprox",
]

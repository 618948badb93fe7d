"""Closed parametric plane curves on the parameter circle [0, 2*pi)."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from .errors import ImmersionError
from .geom2d import Line2, rotate

TWO_PI = 2.0 * np.pi
KINDS = ("circle", "ellipse", "flower", "table")


@dataclass(frozen=True, eq=False)
class ParametricCurve:
    """A closed plane curve ``r(s)``, ``s`` in [0, 2*pi).

    Build with :meth:`circle`, :meth:`ellipse`, :meth:`flower` or
    :meth:`table`.  ``flower(k, eps)`` is ``(1 - eps*cos(k s)) (cos s, sin s)``.
    """

    kind: str
    params: tuple
    _spline: CubicSpline | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        s = np.linspace(0.0, TWO_PI, 4096, endpoint=False)
        speed = np.hypot(*self.derivative(s).T)
        if not np.all(np.isfinite(speed)) or speed.min() <= 1e-6 * self.scale:
            raise ImmersionError(f"{self.label}: derivative vanishes (min speed {speed.min():.3g})")

    # construction

    @classmethod
    def circle(cls, r: float = 1.0) -> "ParametricCurve":
        if r <= 0:
            raise ValueError("circle radius must be positive")
        return cls("circle", (float(r),))

    @classmethod
    def ellipse(cls, a: float = 2.0, b: float = 1.0) -> "ParametricCurve":
        if a <= 0 or b <= 0:
            raise ValueError("ellipse semi-axes must be positive")
        return cls("ellipse", (float(a), float(b)))

    @classmethod
    def flower(cls, k: int = 4, eps: float = 0.35) -> "ParametricCurve":
        if int(k) != k or k < 1:
            raise ValueError("flower petal count must be a positive integer")
        if not 0.0 <= eps < 1.0:
            raise ValueError("flower eps must lie in [0, 1)")
        return cls("flower", (int(k), float(eps)))

    @classmethod
    def table(cls, points, params=None) -> "ParametricCurve":
        """Periodic cubic spline through closed samples.

        Without ``params`` the knots are uniform, ``s_i = 2*pi*i/n``.  The
        first point must not be repeated at the end.
        """
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        n = len(pts)
        if n < 4:
            raise ValueError("table curve needs at least 4 points")
        if params is None:
            s = TWO_PI * np.arange(n) / n
        else:
            s = np.asarray(params, dtype=float)
            if s.shape != (n,) or np.any(np.diff(s) <= 0) or s[0] < 0 or s[-1] >= TWO_PI:
                raise ValueError("table parameters must increase strictly within [0, 2*pi)")
        knots = np.append(s, s[0] + TWO_PI)
        vals = np.vstack([pts, pts[:1]])
        spline = CubicSpline(knots, vals, bc_type="periodic")
        return cls("table", (n,), spline)

    @classmethod
    def from_csv(cls, path) -> "ParametricCurve":
        """Read a table curve from CSV with header ``s,x,y`` or ``x,y``."""
        with open(Path(path), newline="") as fh:
            rows = list(csv.reader(fh))
        if not rows:
            raise ValueError(f"{path}: empty CSV")
        header = [h.strip().lower() for h in rows[0]]
        if header not in (["s", "x", "y"], ["x", "y"]):
            raise ValueError(f"{path}: header must be 's,x,y' or 'x,y', got {rows[0]!r}")
        body = [r for r in rows[1:] if r and any(c.strip() for c in r)]
        try:
            data = np.array([[float(c) for c in r] for r in body])
        except ValueError as exc:
            raise ValueError(f"{path}: non-numeric entry ({exc})") from None
        if data.ndim != 2 or data.shape[1] != len(header):
            raise ValueError(f"{path}: expected {len(header)} columns per row")
        if header[0] == "s":
            return cls.table(data[:, 1:], data[:, 0])
        return cls.table(data)

    # evaluation

    @property
    def label(self) -> str:
        if self.kind == "table":
            return f"table({self.params[0]} pts)"
        return f"{self.kind}({', '.join(f'{p:g}' for p in self.params)})"

    def _derivs(self, s, order: int) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.kind == "table":
            u = np.mod(s - self._spline.x[0], TWO_PI) + self._spline.x[0]
            return self._spline(u, order)
        c, sn = np.cos(s), np.sin(s)
        if self.kind == "circle":
            (r,) = self.params
            x, y = [(c, sn), (-sn, c), (-c, -sn)][order]
            return np.stack([r * x, r * y], axis=-1)
        if self.kind == "ellipse":
            a, b = self.params
            x, y = [(c, sn), (-sn, c), (-c, -sn)][order]
            return np.stack([a * x, b * y], axis=-1)
        k, eps = self.params
        ck, sk = np.cos(k * s), np.sin(k * s)
        rho = 1.0 - eps * ck
        d1 = eps * k * sk
        d2 = eps * k * k * ck
        if order == 0:
            return np.stack([rho * c, rho * sn], axis=-1)
        if order == 1:
            return np.stack([d1 * c - rho * sn, d1 * sn + rho * c], axis=-1)
        return np.stack([(d2 - rho) * c - 2 * d1 * sn, (d2 - rho) * sn + 2 * d1 * c], axis=-1)

    def point(self, s) -> np.ndarray:
        return self._derivs(s, 0)

    def derivative(self, s) -> np.ndarray:
        return self._derivs(s, 1)

    def second_derivative(self, s) -> np.ndarray:
        return self._derivs(s, 2)

    @cached_property
    def _dense(self) -> np.ndarray:
        return self.point(np.linspace(0.0, TWO_PI, 1024, endpoint=False))

    @cached_property
    def scale(self) -> float:
        """Curve diameter (max pairwise distance of 1024 samples)."""
        if self.kind == "circle":
            return 2.0 * self.params[0]
        if self.kind == "ellipse":
            return 2.0 * max(self.params)
        p = self._dense
        d = p[:, None, :] - p[None, :, :]
        return float(np.sqrt(np.max(np.sum(d * d, axis=-1))))

    @cached_property
    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        p = self.point(np.linspace(0.0, TWO_PI, 4096, endpoint=False))
        return p.min(axis=0), p.max(axis=0)


@dataclass(frozen=True)
class CurveSamples:
    params: np.ndarray
    points: np.ndarray
    tangents: np.ndarray
    curvatures: np.ndarray


def sample(curve: ParametricCurve, n: int) -> CurveSamples:
    if n < 64:
        raise ValueError("need at least 64 samples")
    s = np.linspace(0.0, TWO_PI, n, endpoint=False)
    d = curve.derivative(s)
    speed = np.hypot(d[:, 0], d[:, 1])
    return CurveSamples(s, curve.point(s), d / speed[:, None], curvature(curve, s))


def _unit_tangent(curve: ParametricCurve, s) -> np.ndarray:
    d = curve.derivative(s)
    speed = np.hypot(d[..., 0], d[..., 1])
    if np.any(speed < 1e-6 * curve.scale):
        raise ImmersionError(f"{curve.label}: |r'(s)| below immersion threshold")
    return d / speed[..., None]


def evaluate(curve: ParametricCurve, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Point and unit tangent at ``s``."""
    return curve.point(s), _unit_tangent(curve, s)


def tangent_line(curve: ParametricCurve, s: float, theta: float) -> Line2:
    """The tangent line at ``r(s)`` rotated by ``theta`` about the tangency point."""
    p, t = evaluate(curve, s)
    return Line2.through(p, rotate(t, theta))


def curvature(curve: ParametricCurve, s) -> np.ndarray | float:
    """Signed curvature; a counterclockwise circle is positive."""
    d1 = curve.derivative(s)
    d2 = curve.second_derivative(s)
    speed = np.hypot(d1[..., 0], d1[..., 1])
    if np.any(speed < 1e-6 * curve.scale):
        raise ImmersionError(f"{curve.label}: |r'(s)| below immersion threshold")
    k = (d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]) / speed ** 3
    return float(k) if np.ndim(k) == 0 else k


def inflection_points(curve: ParametricCurve, n: int = 1024) -> list[float]:
    """Parameters where the curvature changes sign, bracketed on ``n`` samples."""
    if n < 256:
        raise ValueError("inflection scan needs at least 256 samples")
    s = np.linspace(0.0, TWO_PI, n + 1)
    k = curvature(curve, s)
    # exact zeros on the grid: nudge so they register as a sign change once
    sign = np.sign(k)
    sign[sign == 0] = 1.0
    out = []
    for i in np.nonzero(sign[:-1] != sign[1:])[0]:
        a, b = s[i], s[i + 1]
        root = brentq(lambda u: curvature(curve, u), a, b, xtol=1e-12) if k[i] * k[i + 1] < 0 else a
        out.append(float(np.mod(root, TWO_PI)))
    return sorted(out)

"""Deterministic CSV, JSON and SVG writers."""

from __future__ import annotations

import json
import math
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np


def fmt(x) -> str:
    return "%.17g" % float(x)


def write_csv(path, header, rows) -> Path:
    """Comma-separated, LF endings, floats at 17 significant digits."""
    path = Path(path)
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    return path


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else None
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(dumps(obj), encoding="utf-8", newline="\n")
    return path


class SvgCanvas:
    """Line-art canvas in world coordinates with the y axis pointing up."""

    def __init__(self, lo, hi, width: int = 640, margin: float = 0.05):
        lo, hi = np.asarray(lo, float), np.asarray(hi, float)
        pad = margin * float(np.max(hi - lo))
        self.lo, self.hi = lo - pad, hi + pad
        span = self.hi - self.lo
        self.width = width
        self.height = max(1, int(round(width * span[1] / span[0])))
        self.k = width / span[0]
        self.groups: list[str] = []

    def _xy(self, p) -> tuple[str, str]:
        x = (p[0] - self.lo[0]) * self.k
        y = (self.hi[1] - p[1]) * self.k
        return "%.4f" % x, "%.4f" % y

    def _pts(self, pts) -> str:
        return " ".join("%s,%s" % self._xy(p) for p in pts)

    def group(self, name: str, items: list[str], style: str) -> None:
        self.groups.append(f'<g id="{escape(name)}" {style}>\n' + "\n".join(items) + "\n</g>")

    def polyline(self, pts, closed: bool = True) -> str:
        tag = "polygon" if closed else "polyline"
        return f'<{tag} points="{self._pts(pts)}"/>'

    def segment(self, a, b) -> str:
        (x1, y1), (x2, y2) = self._xy(a), self._xy(b)
        return f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>'

    def dot(self, p, r: float = 3.0) -> str:
        x, y = self._xy(p)
        return f'<circle cx="{x}" cy="{y}" r="{r:.1f}"/>'

    def text(self, s: str) -> str:
        return f'<text x="8" y="18" font-family="sans-serif" font-size="14">{escape(s)}</text>'

    def render(self) -> str:
        head = (f'<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{self.width}" height="{self.height}" '
                f'viewBox="0 0 {self.width} {self.height}">\n')
        return head + "\n".join(self.groups) + "\n</svg>\n"

    def clip_line(self, point, direction):
        """Segment of the infinite line inside the canvas box, or None."""
        lo, hi = self.lo, self.hi
        t0, t1 = -np.inf, np.inf
        for i in range(2):
            if abs(direction[i]) < 1e-15:
                if not lo[i] <= point[i] <= hi[i]:
                    return None
                continue
            a = (lo[i] - point[i]) / direction[i]
            b = (hi[i] - point[i]) / direction[i]
            t0, t1 = max(t0, min(a, b)), min(t1, max(a, b))
        if t0 >= t1:
            return None
        return point + t0 * direction, point + t1 * direction


def write_svg(path, canvas: SvgCanvas) -> Path:
    path = Path(path)
    path.write_text(canvas.render(), encoding="utf-8", newline="\n")
    return path

"""How the region shrinks as theta approaches the aperture angle.

Fits diameter ~ C * (theta_r - theta)^p on a geometric schedule and reports
the elongation (diameter over the width across the diameter).

    python scripts/dissolution_study.py circle:1 ellipse:2,1 flower:4,0.35
"""

import argparse
from pathlib import Path

import numpy as np

from nosilhouette import emit
from nosilhouette.aperture import aperture_angle
from nosilhouette.config import BUILTIN_CURVES, parse_curve
from nosilhouette.silhouette import find_seed, region_by_clipping


def width_across(poly):
    v = poly.vertices
    d = v[:, None] - v[None]
    i, j = np.unravel_index(np.argmax((d ** 2).sum(-1)), d.shape[:2])
    axis = (v[i] - v[j]) / np.hypot(*(v[i] - v[j]))
    normal = np.array([-axis[1], axis[0]])
    proj = v @ normal
    return float(proj.max() - proj.min()), np.degrees(np.arctan2(axis[1], axis[0])) % 180


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("curves", nargs="*", default=list(BUILTIN_CURVES))
    ap.add_argument("--samples", type=int, default=2048)
    ap.add_argument("--levels", type=int, default=10)
    ap.add_argument("--out", type=Path, default=Path("results/dissolution.csv"))
    args = ap.parse_args(argv)
    rows = []
    for spec in args.curves:
        curve = parse_curve(spec)
        lo = aperture_angle(curve, 1e-5, args.samples).theta_r_bracket[0]
        gaps = 0.2 * lo * 2.0 ** -np.arange(args.levels)
        diam, hint = [], None
        for g in gaps:
            found = find_seed(curve, lo - g, grid=64, n=args.samples, hint=hint)
            if found is None:
                break
            hint = found[0]
            poly = region_by_clipping(curve, lo - g, found[0], args.samples).polygon
            w, ang = width_across(poly)
            diam.append(poly.diameter)
            rows.append([curve.label, lo - g, g, poly.diameter, w, ang])
        k = len(diam)
        p = np.polyfit(np.log(gaps[:k]), np.log(diam), 1)[0] if k > 2 else float("nan")
        print(f"{curve.label:<16} theta_r>={lo:.6f}  diameter ~ gap^{p:.2f}  last diameter {diam[-1]:.3e}  "
              f"elongation {rows[-1][3] / max(rows[-1][4], 1e-300):.1f}  axis {rows[-1][5]:.1f} deg")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    emit.write_csv(args.out, ["curve", "theta", "gap", "diameter", "width", "axis_deg"], rows)


if __name__ == "__main__":
    main()

"""SVG panels of the flower region at a few rotation angles, with shape diagnostics.

    python scripts/rotation_panels.py --out results/panels
"""

import argparse
from pathlib import Path

import numpy as np

from nosilhouette import emit
from nosilhouette.config import parse_angles, parse_curve
from nosilhouette.curve import TWO_PI
from nosilhouette.silhouette import find_seed, line_family, region_by_clipping
from nosilhouette.wulff import diagnose_shape


def panel(curve, theta, n, lines):
    lo, hi = curve.bbox
    cv = emit.SvgCanvas(lo, hi)
    s = np.linspace(0, TWO_PI, 1024, endpoint=False)
    cv.group("curve", [cv.polyline(curve.point(s))], 'fill="none" stroke="black" stroke-width="1.5"')
    fam = line_family(curve, theta, lines)
    segs = [cv.clip_line(p, d) for p, d in zip(fam.points, fam.directions)]
    cv.group("tangents", [cv.segment(*sg) for sg in segs if sg is not None],
             'stroke="steelblue" stroke-opacity="0.35" stroke-width="0.6"')
    found = find_seed(curve, theta, n=n)
    diag = None
    if found is not None:
        region = region_by_clipping(curve, theta, found[0], n)
        cv.group("region", [cv.polyline(region.polygon.vertices)], 'fill="crimson" fill-opacity="0.5" stroke="crimson"')
        diag = diagnose_shape(region.polygon, 4096)
    cv.groups.append(cv.text(f"{curve.label}  theta={theta:.4f}" + ("" if diag else "  empty")))
    return cv, diag


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--curve", default="flower:4,0.35")
    ap.add_argument("--theta", default="0,pi/12,pi/6,pi/4")
    ap.add_argument("--samples", type=int, default=4096)
    ap.add_argument("--lines", type=int, default=96, help="tangent lines drawn per panel")
    ap.add_argument("--out", type=Path, default=Path("results/panels"))
    args = ap.parse_args(argv)
    curve = parse_curve(args.curve)
    args.out.mkdir(parents=True, exist_ok=True)
    rows = []
    for i, theta in enumerate(parse_angles(args.theta)):
        cv, diag = panel(curve, theta, args.samples, args.lines)
        emit.write_svg(args.out / f"panel_{i:02d}.svg", cv)
        if diag is None:
            rows.append([theta, "empty", "", "", ""])
            print(f"theta={theta:.4f}  empty")
            continue
        rows.append([theta, "region", diag.vertex_count, diag.edge_flat_runs, diag.smoothness_score])
        print(f"theta={theta:.4f}  corners={diag.vertex_count}  flat_runs={diag.edge_flat_runs}  "
              f"smoothness={diag.smoothness_score:.1f}  angles={np.round(diag.corner_angles, 3).tolist()}")
    emit.write_csv(args.out / "diagnostics.csv", ["theta", "state", "corners", "flat_runs", "smoothness"], rows)


if __name__ == "__main__":
    main()

"""Aperture angle, aperture point and final diameter for a list of curves.

    python scripts/aperture_table.py circle:1 ellipse:2,1 flower:4,0.35
"""

import argparse
from pathlib import Path

import numpy as np

from nosilhouette import emit
from nosilhouette.aperture import aperture_angle, aperture_point
from nosilhouette.config import BUILTIN_CURVES, parse_curve
from nosilhouette.curve import inflection_points


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("curves", nargs="*", default=list(BUILTIN_CURVES))
    ap.add_argument("--tol", type=float, default=1e-5)
    ap.add_argument("--samples", type=int, default=2048)
    ap.add_argument("--out", type=Path, default=Path("results/aperture_table.csv"))
    args = ap.parse_args(argv)
    rows = []
    print(f"{'curve':<18}{'theta_r lo':>12}{'theta_r hi':>12}{'P_r':>26}{'diam/scale':>12}  inflections  monotone")
    for spec in args.curves:
        curve = parse_curve(spec)
        est = aperture_point(curve, aperture_angle(curve, args.tol, args.samples), args.samples)
        lo, hi = est.theta_r_bracket
        p = est.aperture_point
        rel = est.final_diameter / curve.scale
        infl = len(inflection_points(curve))
        rows.append([curve.label, lo, hi, p[0], p[1], est.final_diameter, rel, infl, int(est.monotone)])
        print(f"{curve.label:<18}{lo:12.7f}{hi:12.7f}{np.array2string(p, precision=2):>26}{rel:12.2e}  "
              f"{infl:>11}  {est.monotone}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    emit.write_csv(args.out, ["curve", "lo", "hi", "px", "py", "final_diameter", "diameter_over_scale",
                              "inflections", "monotone"], rows)


if __name__ == "__main__":
    main()

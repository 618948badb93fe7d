"""Aperture angle and nesting across the flower family r = 1 - eps cos(k s).

    python scripts/flower_family_scan.py --k 3,4,5 --eps 0.1,0.2,0.3,0.4
"""

import argparse
from pathlib import Path

import numpy as np

from nosilhouette import emit
from nosilhouette.aperture import aperture_angle, nesting_check, sweep
from nosilhouette.curve import ParametricCurve, inflection_points


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", default="3,4,5")
    ap.add_argument("--eps", default="0.05,0.15,0.25,0.35")
    ap.add_argument("--samples", type=int, default=1024)
    ap.add_argument("--steps", type=int, default=8)
    ap.add_argument("--out", type=Path, default=Path("results/flower_family.csv"))
    args = ap.parse_args(argv)
    rows = []
    for k in (int(v) for v in args.k.split(",")):
        for eps in (float(v) for v in args.eps.split(",")):
            curve = ParametricCurve.flower(k, eps)
            est = aperture_angle(curve, tol=1e-3, n=args.samples)
            lo = est.theta_r_bracket[0]
            res = sweep(curve, np.linspace(0, lo, args.steps, endpoint=False), args.samples)
            nest = nesting_check(res, curve)
            infl = len(inflection_points(curve))
            rows.append([k, eps, lo, infl, int(nest.holds), nest.max_violation])
            print(f"k={k} eps={eps:<5} theta_r>={lo:.4f} inflections={infl:<3} nested={nest.holds} "
                  f"(violation {nest.max_violation:.1e}, {nest.label})")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    emit.write_csv(args.out, ["k", "eps", "theta_r_lo", "inflections", "nested", "max_violation"], rows)


if __name__ == "__main__":
    main()

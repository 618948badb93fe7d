"""Command line: ``region``, ``sweep``, ``aperture``, ``duals`` and ``check``."""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import aperture as ap
from . import emit
from .config import BUILTIN_CURVES, EMITTERS, JobConfig, load_config, parse_angles, parse_curve, parse_range
from .curve import TWO_PI, ParametricCurve, inflection_points
from .errors import ConfigError, GeometryError
from .metric import hausdorff
from .silhouette import SupportFn, find_seed, region_by_clipping, region_by_support, support_function
from .sphere import maehara_disagreements, random_hemispherical_set
from .wulff import WulffShape, convex_body_check, diagnose_shape, dual_wulff

log = logging.getLogger("nosilhouette")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _region_at(curve: ParametricCurve, theta: float, cfg: JobConfig, hint=None):
    found = find_seed(curve, theta, grid=cfg.grid, n=cfg.samples, hint=hint)
    if found is None:
        return None
    return region_by_clipping(curve, theta, found[0], cfg.samples)


def _record(curve, theta, region, cfg, prev=None) -> dict:
    if region is None:
        return {"curve": curve.label, "theta": theta, "empty": True}
    poly = region.polygon
    rec = {
        "curve": curve.label,
        "theta": theta,
        "empty": False,
        "area": poly.area,
        "diameter": poly.diameter,
        "margin": region.margin,
        "seed": region.seed,
        "vertices": len(poly),
        "vertex_count": diagnose_shape(poly, max(1024, cfg.directions)).vertex_count,
    }
    if prev is not None:
        rec["dH_prev"] = hausdorff(prev.polygon, poly)
    return rec


def _canvas(curve: ParametricCurve) -> emit.SvgCanvas:
    lo, hi = curve.bbox
    return emit.SvgCanvas(lo, hi)


def _curve_layers(canvas, curve, theta=None, lines: int = 256):
    s = np.linspace(0.0, TWO_PI, 1024, endpoint=False)
    canvas.group("curve", [canvas.polyline(curve.point(s))], 'fill="none" stroke="black" stroke-width="1.5"')
    if theta is None:
        return
    s = np.linspace(0.0, TWO_PI, lines, endpoint=False)
    p, d = curve.point(s), curve.derivative(s)
    d = d / np.hypot(d[:, 0], d[:, 1])[:, None]
    c, sn = np.cos(theta), np.sin(theta)
    d = np.column_stack([c * d[:, 0] - sn * d[:, 1], sn * d[:, 0] + c * d[:, 1]])
    segs = [canvas.clip_line(p[i], d[i]) for i in range(lines)]
    canvas.group("tangent-lines", [canvas.segment(*sg) for sg in segs if sg is not None],
                 'stroke="steelblue" stroke-width="0.4" stroke-opacity="0.6"')


def _region_layers(canvas, region, name="region", color="crimson"):
    canvas.group(name, [canvas.polyline(region.polygon.vertices)],
                 f'fill="{color}" fill-opacity="0.35" stroke="{color}" stroke-width="1"')
    canvas.group(f"{name}-seed", [canvas.dot(region.seed)], 'fill="black"')


def _polygon_csv(path, poly):
    emit.write_csv(path, ["x", "y"], poly.vertices)


def cmd_region(cfg: JobConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    records = []
    for curve_spec in cfg.curves:
        curve = parse_curve(curve_spec)
        for i, theta in enumerate(cfg.all_thetas):
            region = _region_at(curve, theta, cfg)
            rec = _record(curve, theta, region, cfg)
            records.append(rec)
            stem = cfg.out / f"region_{_slug(curve_spec)}_{i:03d}"
            if "svg" in cfg.emit:
                cv = _canvas(curve)
                _curve_layers(cv, curve, theta)
                if region is not None:
                    _region_layers(cv, region)
                cv.groups.append(cv.text(f"{curve.label}  theta={theta:.6g}" + ("  empty" if region is None else "")))
                emit.write_svg(stem.with_suffix(".svg"), cv)
            if "csv" in cfg.emit and region is not None:
                _polygon_csv(stem.with_suffix(".csv"), region.polygon)
            if "json" in cfg.emit:
                emit.write_json(stem.with_suffix(".json"), rec)
    if "json" in cfg.emit:
        emit.write_json(cfg.out / "report.json", {"command": "region", "records": records})
    return EXIT_OK


def cmd_sweep(cfg: JobConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    thetas = cfg.all_thetas
    report = []
    for curve_spec in cfg.curves:
        curve = parse_curve(curve_spec)
        res = ap.sweep(curve, thetas, cfg.samples, cfg.grid)
        nest = ap.nesting_check(res, curve)
        recs, prev = [], None
        for t, r in zip(res.thetas, res.regions):
            recs.append(_record(curve, float(t), r, cfg, prev))
            prev = r if r is not None else None
        report.append({
            "curve": curve.label,
            "records": recs,
            "monotone_emptiness": res.monotone_emptiness,
            "max_consecutive_dH": res.max_consecutive_dH,
            "nesting": {"holds": nest.holds, "label": nest.label, "max_violation": nest.max_violation},
        })
        slug = _slug(curve_spec)
        if "csv" in cfg.emit:
            rows = [[r["theta"], int(r["empty"]), r.get("area", 0.0), r.get("diameter", 0.0),
                     r.get("margin", 0.0), r.get("dH_prev", float("nan"))] for r in recs]
            emit.write_csv(cfg.out / f"sweep_{slug}.csv", ["theta", "empty", "area", "diameter", "margin", "dH_prev"], rows)
        if "svg" in cfg.emit:
            cv = _canvas(curve)
            _curve_layers(cv, curve)
            for k, r in enumerate(res.regions):
                if r is not None:
                    shade = int(40 + 180 * k / max(1, len(res.regions) - 1))
                    cv.group(f"region-{k:03d}", [cv.polyline(r.polygon.vertices)],
                             f'fill="none" stroke="rgb({shade},30,60)" stroke-width="1"')
            emit.write_svg(cfg.out / f"sweep_{slug}.svg", cv)
    if "json" in cfg.emit:
        emit.write_json(cfg.out / "report.json", {"command": "sweep", "curves": report})
    return EXIT_OK


def cmd_aperture(cfg: JobConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    report = []
    for curve_spec in cfg.curves:
        curve = parse_curve(curve_spec)
        est = ap.aperture_point(curve, ap.aperture_angle(curve, cfg.tol, cfg.samples, cfg.grid), cfg.samples, cfg.grid)
        report.append({
            "curve": curve.label,
            "theta_r": est.theta_r,
            "theta_r_bracket": est.theta_r_bracket,
            "monotone_emptiness": est.monotone,
            "aperture_point": est.aperture_point,
            "final_diameter": est.final_diameter,
            "shrinking": est.shrinking,
            "schedule": est.schedule,
            "diameters": est.diameters,
            "centroids": est.centroids,
        })
        slug = _slug(curve_spec)
        if "csv" in cfg.emit:
            rows = [[t, d, c[0], c[1]] for t, d, c in zip(est.schedule, est.diameters, est.centroids)]
            emit.write_csv(cfg.out / f"dissolution_{slug}.csv", ["theta", "diameter", "cx", "cy"], rows)
        if "svg" in cfg.emit:
            for k, r in enumerate(est.regions):
                if r is None:
                    continue
                c = r.polygon.centroid
                half = max(r.polygon.diameter, 1e-9)
                cv = emit.SvgCanvas(c - half, c + half)
                _region_layers(cv, r)
                cv.groups.append(cv.text(f"{curve.label}  theta={r.theta:.10f}"))
                emit.write_svg(cfg.out / f"frame_{slug}_{k:02d}.svg", cv)
    if "json" in cfg.emit:
        emit.write_json(cfg.out / "report.json", {"command": "aperture", "curves": report})
    return EXIT_OK


def cmd_duals(cfg: JobConfig) -> int:
    cfg.out.mkdir(parents=True, exist_ok=True)
    records = []
    for curve_spec in cfg.curves:
        curve = parse_curve(curve_spec)
        for i, theta in enumerate(cfg.all_thetas):
            region = _region_at(curve, theta, cfg)
            if region is None:
                records.append({"curve": curve.label, "theta": theta, "empty": True})
                continue
            w = WulffShape.from_region(region, cfg.directions)
            d = dual_wulff(w, cfg.directions)
            dd = dual_wulff(d, cfg.directions)
            records.append({
                "curve": curve.label, "theta": theta, "empty": False, "seed": region.seed,
                "area": w.polygon.area, "dual_area": d.polygon.area,
                "involution_dH": hausdorff(dd.polygon, w.polygon),
            })
            stem = cfg.out / f"dual_{_slug(curve_spec)}_{i:03d}"
            if "csv" in cfg.emit:
                _polygon_csv(stem.with_suffix(".csv"), d.polygon)
            if "svg" in cfg.emit:
                both = np.vstack([w.polygon.vertices, d.polygon.vertices])
                cv = emit.SvgCanvas(both.min(axis=0), both.max(axis=0))
                cv.group("shape", [cv.polyline(w.polygon.vertices)], 'fill="crimson" fill-opacity="0.3" stroke="crimson"')
                cv.group("dual", [cv.polyline(d.polygon.vertices)], 'fill="none" stroke="navy" stroke-width="1.5"')
                cv.group("origin", [cv.dot(np.zeros(2))], 'fill="black"')
                emit.write_svg(stem.with_suffix(".svg"), cv)
    if "json" in cfg.emit:
        emit.write_json(cfg.out / "report.json", {"command": "duals", "records": records})
    return EXIT_OK


def read_support_csv(path) -> SupportFn:
    """Support samples from CSV with header ``h`` or ``angle,h`` (uniform angles)."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    header = [h.strip().lower() for h in rows[0]]
    if header not in (["h"], ["angle", "h"]):
        raise ValueError(f"{path}: header must be 'h' or 'angle,h'")
    vals = np.array([float(r[-1]) for r in rows[1:]])
    return SupportFn(np.zeros(2), vals)


def run_checks(cfg: JobConfig) -> list[dict]:
    """Property checks for every configured curve; each entry has ``passed``."""
    checks = []

    def add(name, curve, passed, **info):
        checks.append({"check": name, "curve": curve, "passed": bool(passed), **info})

    if cfg.support is not None:
        try:
            sf = read_support_csv(cfg.support)
            w = WulffShape.from_polygon(region_by_support(sf).polygon)
            add("support_validation", None, convex_body_check(w.polygon), samples=len(sf.values))
        except (ValueError, OSError) as exc:
            add("support_validation", None, False, error=str(exc))

    for curve_spec in cfg.curves:
        curve = parse_curve(curve_spec)
        label, scale = curve.label, curve.scale
        log.info("checking %s", label)
        add("normal_lines_cover", label, ap.normal_lines_check(curve, 500, cfg.samples))
        est = ap.aperture_angle(curve, max(cfg.tol, 1e-4), cfg.samples, cfg.grid)
        lo = est.theta_r_bracket[0]
        res = ap.sweep(curve, np.linspace(0.0, lo, cfg.steps, endpoint=False), cfg.samples, cfg.grid)
        nest = ap.nesting_check(res, curve)
        # nesting is only guaranteed for curves without inflections
        add("nesting", label, nest.holds or not nest.guaranteed, holds=nest.holds, label=nest.label,
            max_violation=nest.max_violation)

        worst = 0.0
        for f in (0.0, 0.3, 0.6):
            r = _region_at(curve, f * lo, cfg)
            sf = support_function(curve, f * lo, r.seed, cfg.samples, cfg.samples)
            worst = max(worst, hausdorff(r.polygon, region_by_support(sf).polygon))
        add("cross_construction", label, worst <= 1e-3 * scale, max_dH=worst)

        w = WulffShape.from_region(_region_at(curve, 0.0, cfg), cfg.directions)
        inv = hausdorff(dual_wulff(dual_wulff(w, cfg.directions), cfg.directions).polygon, w.polygon)
        add("dual_wulff_involution", label, inv <= 1e-3 * scale, dH=inv)

        counts, flats = [], []
        for f in (0.25, 0.5, 0.75):
            r = _region_at(curve, f * lo, cfg)
            dg = diagnose_shape(r.polygon, 4096)
            counts.append(dg.vertex_count)
            flats.append(dg.edge_flat_runs)
        add("corner_proxy", label, all(c == 0 for c in counts), vertex_counts=counts,
            inflections=len(inflection_points(curve)))
        add("flat_edges", label, all(f == 0 for f in flats), flat_runs=flats)

    rng = np.random.default_rng(0)
    bad = sum(maehara_disagreements(random_hemispherical_set(int(rng.integers(1, 7)), rng), 10_000, rng)
              for _ in range(10))
    add("maehara", None, bad == 0, disagreements=bad, sets=10, trials=10_000)
    return checks


def cmd_check(cfg: JobConfig) -> int:
    checks = run_checks(cfg)
    ok = all(c["passed"] for c in checks)
    for c in checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['check']:<24} {c['curve'] or ''}")
    if "json" in cfg.emit:
        cfg.out.mkdir(parents=True, exist_ok=True)
        emit.write_json(cfg.out / "report.json", {"command": "check", "passed": ok, "checks": checks})
    return EXIT_OK if ok else EXIT_FAIL


def _slug(spec: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in spec.replace("table:", "").rsplit("/", 1)[-1])


COMMANDS = {"region": cmd_region, "sweep": cmd_sweep, "aperture": cmd_aperture, "duals": cmd_duals, "check": cmd_check}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="INI file with a [job] section")
    common.add_argument("--curve", action="append", help="circle:R, ellipse:A,B, flower:K,EPS or table:FILE.csv (repeatable)")
    common.add_argument("--theta", help="comma-separated angles, e.g. 0,pi/12,pi/6")
    common.add_argument("--theta-range", help="start:stop:count, ends included")
    common.add_argument("--samples", type=int, metavar="N", help="curve samples")
    common.add_argument("--directions", type=int, metavar="M", help="support directions")
    common.add_argument("--grid", type=int, metavar="G", help="seed-search grid size")
    common.add_argument("--tol", type=float, metavar="T", help="aperture-angle bracket width")
    common.add_argument("--steps", type=int, help="sweep steps used by check")
    common.add_argument("--out", type=Path, metavar="DIR")
    common.add_argument("--emit", help="subset of svg,csv,json")
    common.add_argument("--support", type=Path, help="support-function CSV to validate (check)")
    common.add_argument("-v", "--verbose", action="store_true")
    p = argparse.ArgumentParser(prog="nosilhouette", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return p


def config_from_args(args) -> JobConfig:
    cfg = load_config(args.config) if args.config else JobConfig()
    up = {}
    if args.curve:
        up["curves"] = tuple(args.curve)
    elif args.command == "check" and not args.config:
        up["curves"] = BUILTIN_CURVES
    try:
        if args.theta is not None:
            up["thetas"], up["theta_range"] = parse_angles(args.theta), None
        if args.theta_range is not None:
            up["theta_range"] = parse_range(args.theta_range)
    except ValueError as exc:
        raise ConfigError(f"--theta: {exc}") from None
    for key in ("samples", "directions", "grid", "tol", "steps", "out", "support"):
        if getattr(args, key) is not None:
            up[key] = getattr(args, key)
    if args.emit is not None:
        up["emit"] = frozenset(e.strip() for e in args.emit.split(",") if e.strip())
    return replace(cfg, **up).validate()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = config_from_args(args)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

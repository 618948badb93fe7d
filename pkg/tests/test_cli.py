import csv
import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nosilhouette.cli import main, run_checks
from nosilhouette.config import JobConfig, load_config, parse_angle, parse_curve, parse_range
from nosilhouette.emit import SvgCanvas, dumps, fmt, write_csv
from nosilhouette.errors import ConfigError

SVG = "{http://www.w3.org/2000/svg}svg"


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def polygon_area(rows):
    xy = np.array([[float(a), float(b)] for a, b in rows[1:]])
    x, y = xy.T
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def assert_valid_svg(path):
    root = ET.parse(path).getroot()
    assert root.tag == SVG
    assert root.get("version") == "1.1" and len(root.get("viewBox").split()) == 4


@pytest.mark.parametrize("text,value", [("0", 0.0), ("pi/12", np.pi / 12), ("2*pi/7", 2 * np.pi / 7), ("-0.5+1", 0.5)])
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value)


@pytest.mark.parametrize("text", ["__import__('os')", "pi/0", "x", "1e400"])
def test_parse_angle_rejects_other_expressions(text):
    with pytest.raises(ValueError):
        parse_angle(text)


def test_parse_range_and_curves():
    assert parse_range("0:pi/2:3") == (0.0, np.pi / 2, 3)
    with pytest.raises(ValueError):
        parse_range("0:1:1")
    assert parse_curve("ellipse:2,1").params == (2.0, 1.0)
    assert parse_curve("flower:4,0.35").params == (4, 0.35)
    for bad in ("flower:2.5,0.1", "square:1", "circle:a"):
        with pytest.raises(ValueError):
            parse_curve(bad)


def test_config_file_and_error_lines(tmp_path):
    good = tmp_path / "job.ini"
    good.write_text("[job]\ncurve = circle:1; ellipse:2,1\ntheta = 0, pi/6\nsamples = 1024\n")
    cfg = load_config(good)
    assert cfg.curves == ("circle:1", "ellipse:2,1") and cfg.samples == 1024
    assert cfg.all_thetas == pytest.approx((0.0, np.pi / 6))
    bad = tmp_path / "bad.ini"
    bad.write_text("[job]\ncurve = circle:1\nsamples = lots\n")
    with pytest.raises(ConfigError, match=r"bad.ini:3: field 'samples'"):
        load_config(bad)
    wide = tmp_path / "wide.ini"
    wide.write_text("[job]\n\ntheta = 2\n")
    with pytest.raises(ConfigError, match=r"wide.ini:3: theta"):
        load_config(wide)


def test_usage_errors_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.ini"
    bad.write_text("[job]\nwhatever = 1\n")
    assert main(["region", "--config", str(bad), "--out", str(tmp_path)]) == 2
    assert "bad.ini:2" in capsys.readouterr().err
    assert main(["region", "--curve", "circle:1", "--samples", "10", "--out", str(tmp_path)]) == 2


def test_csv_and_json_formats(tmp_path):
    p = write_csv(tmp_path / "a.csv", ["x"], [[0.1], [1 / 3]])
    raw = p.read_bytes()
    assert b"\r" not in raw and raw.decode().splitlines() == ["x", "0.10000000000000001", "0.33333333333333331"]
    assert fmt(np.pi) == "3.1415926535897931"
    assert dumps({"b": 1, "a": float("nan")}) == '{\n  "a": null,\n  "b": 1\n}\n'


@given(st.floats(allow_nan=False, allow_infinity=False))
def test_csv_floats_roundtrip(x):
    assert float(fmt(x)) == x


def test_svg_line_clipping():
    cv = SvgCanvas((0, 0), (1, 1), margin=0.0)
    a, b = cv.clip_line(np.array([0.5, 0.5]), np.array([1.0, 0.0]))
    assert np.allclose([a, b], [[0, 0.5], [1, 0.5]])
    assert cv.clip_line(np.array([5.0, 5.0]), np.array([1.0, 0.0])) is None


def test_region_command(tmp_path):
    out = tmp_path / "r"
    assert main(["region", "--curve", "circle:1", "--theta", "pi/4,pi/2", "--out", str(out)]) == 0
    rows = read_csv(out / "region_circle_1_000.csv")
    assert rows[0] == ["x", "y"]
    assert polygon_area(rows) == pytest.approx(np.pi / 2, abs=1e-2)
    assert_valid_svg(out / "region_circle_1_000.svg")
    assert_valid_svg(out / "region_circle_1_001.svg")
    assert not (out / "region_circle_1_001.csv").exists()
    empty = json.loads((out / "region_circle_1_001.json").read_text())
    assert empty["empty"] is True
    report = json.loads((out / "report.json").read_text())
    assert [r["empty"] for r in report["records"]] == [False, True]


def test_outputs_are_deterministic(tmp_path):
    args = ["sweep", "--curve", "flower:4,0.35", "--theta-range", "0:0.5:3", "--samples", "1024"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("sweep_flower_4_0_35.csv", "sweep_flower_4_0_35.svg", "report.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    report = json.loads((tmp_path / "a" / "report.json").read_text())
    assert report["curves"][0]["nesting"]["label"] == "not guaranteed by theory"
    assert_valid_svg(tmp_path / "a" / "sweep_flower_4_0_35.svg")


def test_emit_subset(tmp_path):
    assert main(["region", "--curve", "circle:1", "--emit", "json", "--out", str(tmp_path)]) == 0
    assert sorted(p.suffix for p in tmp_path.iterdir()) == [".json", ".json"]


def test_aperture_command(tmp_path):
    assert main(["aperture", "--curve", "circle:1", "--tol", "1e-4", "--samples", "1024", "--out", str(tmp_path)]) == 0
    rep = json.loads((tmp_path / "report.json").read_text())["curves"][0]
    assert rep["theta_r"] == pytest.approx(np.pi / 2, abs=1e-3)
    assert np.hypot(*rep["aperture_point"]) < 1e-3
    assert len(read_csv(tmp_path / "dissolution_circle_1.csv")) == 13
    assert_valid_svg(tmp_path / "frame_circle_1_00.svg")


def test_aperture_on_a_table_curve_with_an_empty_start(tmp_path, capsys):
    t = np.linspace(0, 2 * np.pi, 256, endpoint=False)
    path = tmp_path / "eight.csv"
    path.write_text("x,y\n" + "".join(f"{fmt(np.sin(a))},{fmt(np.sin(a) * np.cos(a))}\n" for a in t))
    assert main(["aperture", "--curve", f"table:{path}", "--out", str(tmp_path / "o")]) == 1
    assert "empty" in capsys.readouterr().err


def test_duals_command(tmp_path):
    assert main(["duals", "--curve", "ellipse:2,1", "--theta", "0", "--out", str(tmp_path)]) == 0
    rec = json.loads((tmp_path / "report.json").read_text())["records"][0]
    assert rec["involution_dH"] <= 1e-3 * 4
    assert_valid_svg(tmp_path / "dual_ellipse_2_1_000.svg")


def test_check_rejects_a_corrupted_support_function(tmp_path):
    a = 2 * np.pi * np.arange(512) / 512
    path = tmp_path / "h.csv"
    h = np.ones(512)
    h[100] = -0.2
    write_csv(path, ["angle", "h"], zip(a, h))
    cfg = JobConfig(curves=(), support=path, out=tmp_path)
    checks = run_checks(cfg)
    assert checks[0]["check"] == "support_validation" and not checks[0]["passed"]
    assert main(["check", "--curve", "circle:1", "--support", str(path), "--steps", "4",
                 "--samples", "1024", "--out", str(tmp_path)]) == 1


def test_check_accepts_a_valid_support_function(tmp_path):
    a = 2 * np.pi * np.arange(512) / 512
    path = tmp_path / "h.csv"
    write_csv(path, ["h"], [[1 + 0.2 * np.cos(2 * x)] for x in a])
    checks = run_checks(JobConfig(curves=(), support=path, out=tmp_path))
    assert checks[0]["passed"]
    assert all(c["passed"] for c in checks)


def test_flower_nesting_is_labelled_and_does_not_fail(tmp_path):
    cfg = JobConfig(curves=("flower:4,0.35",), samples=1024, steps=6, tol=1e-4, out=tmp_path)
    checks = {c["check"]: c for c in run_checks(cfg)}
    assert checks["nesting"]["label"] == "not guaranteed by theory"
    assert checks["nesting"]["passed"]
    assert checks["normal_lines_cover"]["passed"] and checks["cross_construction"]["passed"]
    assert checks["corner_proxy"]["inflections"] == 8
    assert len(checks["corner_proxy"]["vertex_counts"]) == 3

import numpy as np
import pytest

from nosilhouette.aperture import (
    HALF_PI,
    aperture_angle,
    aperture_set,
    continuity_check,
    dissolution_schedule,
    normal_lines_check,
    nesting_check,
    sweep,
)
from nosilhouette.curve import ParametricCurve
from nosilhouette.errors import PreconditionError
from nosilhouette.metric import hausdorff

# bracket lower ends from a verified run at N = 2048, tol = 1e-5
REGRESSION_LO = {"circle": 1.5705918, "ellipse": 0.9270357, "flower": 0.5893810}


def test_circle_sweep_diameters():
    th = np.array([0, np.pi / 6, np.pi / 4, np.pi / 3])
    res = sweep(ParametricCurve.circle(1), th)
    assert np.allclose(res.diameters, 2 * np.cos(th), atol=2e-3)
    assert len(res.consecutive_dH) == 3 and np.all(np.isfinite(res.consecutive_dH))


def test_circle_sweep_marks_the_right_angle_empty():
    res = sweep(ParametricCurve.circle(1), [0.0, 1.0, HALF_PI])
    assert list(res.empty) == [False, False, True]
    assert res.monotone_emptiness


def test_flower_sweep_on_the_figure_angles(curves):
    res = sweep(curves["flower"], [0, np.pi / 12, np.pi / 6, np.pi / 4])
    # the flower dissolves near 0.589 rad, before pi/4
    assert list(res.empty) == [False, False, False, True]


def test_sweep_validates_angles(curves):
    with pytest.raises(ValueError):
        sweep(curves["circle"], [0.5, 0.2])
    with pytest.raises(ValueError):
        sweep(curves["circle"], [0.0, 2.0])


def test_sweep_needs_a_nonempty_start():
    # the tangents of a figure eight cover the whole plane
    t = np.linspace(0, 2 * np.pi, 512, endpoint=False)
    eight = ParametricCurve.table(np.column_stack([np.sin(t), np.sin(t) * np.cos(t)]))
    with pytest.raises(PreconditionError):
        sweep(eight, [0.0, 0.1])
    with pytest.raises(PreconditionError):
        aperture_angle(eight)


def test_nesting_examples(curves):
    for name in ("circle", "ellipse"):
        res = sweep(curves[name], np.linspace(0, 0.8 * REGRESSION_LO[name], 6))
        nest = nesting_check(res, curves[name])
        assert nest and nest.guaranteed and nest.label == "guaranteed"
    res = sweep(curves["flower"], np.linspace(0, 0.5, 6))
    nest = nesting_check(res, curves["flower"])
    assert not nest.guaranteed and nest.label == "not guaranteed by theory"


@pytest.mark.parametrize("name", ["circle", "ellipse", "flower"])
def test_aperture_angle_brackets(estimates, name):
    est = estimates[name]
    lo, hi = est.theta_r_bracket
    assert lo <= est.theta_r <= hi and hi - lo <= 1e-5
    assert 0 < est.theta_r <= HALF_PI
    assert est.monotone
    assert lo == pytest.approx(REGRESSION_LO[name], abs=1e-6)


def test_circle_aperture(estimates):
    est = estimates["circle"]
    assert est.theta_r == pytest.approx(HALF_PI, abs=1e-3)
    assert np.hypot(*est.aperture_point) < 1e-3
    assert est.final_diameter <= 1e-2


@pytest.mark.parametrize("name", ["ellipse", "flower"])
def test_symmetric_curves_dissolve_at_the_origin(estimates, name):
    assert np.hypot(*estimates[name].aperture_point) < 1e-3


@pytest.mark.parametrize("name", ["circle", "ellipse", "flower"])
def test_dissolution_diameters_shrink(estimates, name):
    est = estimates[name]
    assert est.shrinking
    assert np.all(np.diff(est.schedule) > 0) and np.all(est.schedule < est.theta_r_bracket[0])
    d = est.diameters[np.isfinite(est.diameters)]
    assert d[-1] < d[0]


def test_schedule_spacing(estimates):
    est = estimates["circle"]
    lo, hi = est.theta_r_bracket
    s = dissolution_schedule(est)
    delta = max(4 * (hi - lo), 1e-5)
    assert np.allclose(lo - s, delta * 2.0 ** -np.arange(1, 13))


def test_aperture_angle_rejects_tiny_tolerance(curves):
    with pytest.raises(ValueError):
        aperture_angle(curves["circle"], tol=1e-7)


def test_circle_aperture_set_is_the_unit_disk(curves, estimates):
    aset = aperture_set(curves["circle"], estimates["circle"], steps=8)
    assert aset.nested
    assert aset.area == pytest.approx(aset.base.area, rel=1e-9)
    assert aset.area == pytest.approx(np.pi, rel=1e-3)


def test_flower_aperture_set_reports_its_area(curves, estimates):
    aset = aperture_set(curves["flower"], estimates["flower"], steps=8)
    assert aset.area >= aset.base.area * (1 - 1e-9)


@pytest.mark.parametrize("name", ["circle", "ellipse", "flower"])
def test_normal_lines_cover(curves, name):
    assert normal_lines_check(curves[name], 200)


def test_normal_lines_cover_rejects_few_trials(curves):
    with pytest.raises(ValueError):
        normal_lines_check(curves["circle"], 10)


def test_consecutive_distances_shrink_with_the_step(curves):
    coarse, fine = continuity_check(curves["circle"], 1.2, steps=6)
    assert fine < coarse
    # disks of radius cos(theta): consecutive distance is the radius drop
    assert coarse == pytest.approx(np.cos(1.0) - np.cos(1.2), abs=2e-3)


def test_circle_regions_vary_like_cos(curves):
    res = sweep(curves["circle"], [0.2, 0.25])
    assert res.consecutive_dH[0] == pytest.approx(np.cos(0.2) - np.cos(0.25), abs=1e-3)
    assert hausdorff(res.regions[0].polygon, res.regions[1].polygon) == pytest.approx(res.consecutive_dH[0])

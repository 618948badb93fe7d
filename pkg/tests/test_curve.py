import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nosilhouette.curve import (
    TWO_PI,
    ParametricCurve,
    curvature,
    evaluate,
    inflection_points,
    sample,
    tangent_line,
)
from nosilhouette.errors import ImmersionError
from nosilhouette.geom2d import rotate, signed_distance

params = st.floats(0, TWO_PI, allow_nan=False)
CURVES = [ParametricCurve.circle(1.0), ParametricCurve.ellipse(2.0, 1.0), ParametricCurve.flower(4, 0.35)]


def test_evaluate_examples():
    p, t = evaluate(ParametricCurve.circle(1), 0.0)
    assert np.allclose(p, [1, 0]) and np.allclose(t, [0, 1])
    p, t = evaluate(ParametricCurve.ellipse(2, 1), np.pi / 2)
    assert np.allclose(p, [0, 1]) and np.allclose(t, [-1, 0])


@given(params)
def test_flower_with_zero_eps_is_the_unit_circle(s):
    f, c = ParametricCurve.flower(4, 0.0), ParametricCurve.circle(1.0)
    assert np.allclose(f.point(s), c.point(s), atol=1e-15)
    assert np.allclose(f.derivative(s), c.derivative(s), atol=1e-15)


@pytest.mark.parametrize("curve", CURVES, ids=lambda c: c.label)
def test_derivatives_match_finite_differences(curve):
    s = np.linspace(0, TWO_PI, 97)
    h = 1e-5
    fd = (curve.point(s + h) - curve.point(s - h)) / (2 * h)
    assert np.max(np.abs(fd - curve.derivative(s))) < 1e-6 * curve.scale
    fd2 = (curve.derivative(s + h) - curve.derivative(s - h)) / (2 * h)
    assert np.max(np.abs(fd2 - curve.second_derivative(s))) < 1e-5 * curve.scale


def test_tangent_line_examples():
    circle = ParametricCurve.circle(1)
    line = tangent_line(circle, 0.0, 0.0)
    assert np.allclose(line.dir, [0, 1]) and np.allclose(line.base, [1, 0])
    normal_line = tangent_line(circle, 0.0, np.pi / 2)
    assert np.allclose(normal_line.dir, [-1, 0])
    assert signed_distance(normal_line, [0, 0]) == pytest.approx(0, abs=1e-15)


@given(params, st.floats(0, np.pi / 2))
def test_rotated_circle_tangents_sit_at_distance_cos_theta(s, theta):
    line = tangent_line(ParametricCurve.circle(1), s, theta)
    assert abs(signed_distance(line, [0, 0])) == pytest.approx(abs(np.cos(theta)), abs=1e-12)


@given(params, st.floats(-1, 1), st.floats(-1, 1))
def test_tangent_line_respects_rotation_composition(s, a, b):
    curve = ParametricCurve.flower(4, 0.35)
    d_ab = tangent_line(curve, s, a + b).dir
    assert np.allclose(rotate(tangent_line(curve, s, a).dir, b), d_ab, atol=1e-12)
    assert np.allclose(tangent_line(curve, s, 0.0).dir, evaluate(curve, s)[1])


def test_curvature_examples():
    assert curvature(ParametricCurve.circle(2), 1.3) == pytest.approx(0.5)
    assert curvature(ParametricCurve.ellipse(2, 1), 0.0) == pytest.approx(2.0)
    k = curvature(ParametricCurve.flower(4, 0.35), np.linspace(0, TWO_PI, 400))
    assert k.min() < 0 < k.max()


@given(params)
def test_ellipse_curvature_formula(s):
    a, b = 2.0, 1.0
    expected = a * b / (a * a * np.sin(s) ** 2 + b * b * np.cos(s) ** 2) ** 1.5
    assert curvature(ParametricCurve.ellipse(a, b), s) == pytest.approx(expected, rel=1e-12)


def brute_force_sign_changes(curve, n=100_000):
    s = np.linspace(0, TWO_PI, n, endpoint=False)
    k = curvature(curve, s)
    return int(np.sum(np.sign(k) != np.sign(np.roll(k, -1))))


def test_inflection_examples():
    assert inflection_points(ParametricCurve.circle(1)) == []
    assert inflection_points(ParametricCurve.ellipse(2, 1)) == []
    flower = ParametricCurve.flower(4, 0.35)
    infl = inflection_points(flower)
    assert len(infl) == 8 == brute_force_sign_changes(flower)
    assert np.max(np.abs(curvature(flower, np.array(infl)))) < 1e-8


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 7), st.floats(0.0, 0.6))
def test_inflection_count_is_even_and_matches_scan(k, eps):
    curve = ParametricCurve.flower(k, eps)
    infl = inflection_points(curve, 2048)
    assert len(infl) % 2 == 0
    assert len(infl) == brute_force_sign_changes(curve, 20_000)


def test_samples_have_unit_tangents():
    smp = sample(ParametricCurve.ellipse(2, 1), 128)
    assert smp.points.shape == (128, 2)
    assert np.allclose(np.hypot(*smp.tangents.T), 1, atol=1e-10)
    with pytest.raises(ValueError):
        sample(ParametricCurve.circle(1), 32)


def test_table_curve_reproduces_a_circle(tmp_path):
    t = TWO_PI * np.arange(256) / 256
    path = tmp_path / "c.csv"
    path.write_text("x,y\n" + "".join(f"{float(np.cos(a))!r},{float(np.sin(a))!r}\n" for a in t))
    curve = ParametricCurve.from_csv(path)
    s = np.linspace(0, TWO_PI, 1000)
    assert np.max(np.abs(np.hypot(*curve.point(s).T) - 1)) < 1e-7
    assert np.allclose(curvature(curve, s), 1.0, atol=1e-3)


def test_stalled_table_is_not_an_immersion():
    with pytest.raises(ImmersionError):
        ParametricCurve.table(np.ones((8, 2)))


@pytest.mark.parametrize("bad", ["s,x\n0,1\n", "x,y\n1,a\n", ""])
def test_csv_errors(tmp_path, bad):
    path = tmp_path / "bad.csv"
    path.write_text(bad)
    with pytest.raises(ValueError):
        ParametricCurve.from_csv(path)

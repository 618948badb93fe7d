import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nosilhouette.errors import DegenerateInputError
from nosilhouette.geom2d import (
    ConvexPolygon,
    HalfPlane,
    Line2,
    clip,
    convex_hull,
    foot_of_perpendicular,
    invert,
    rotate,
    signed_distance,
)

finite = st.floats(-50, 50, allow_nan=False, allow_infinity=False)
angles = st.floats(-10, 10, allow_nan=False)
points = st.tuples(finite, finite)


def unit_square():
    return ConvexPolygon([[0, 0], [1, 0], [1, 1], [0, 1]])


@pytest.mark.parametrize("v,theta,expected", [
    ((1, 0), 0.0, (1, 0)),
    ((1, 0), np.pi / 2, (0, 1)),
    ((1, 1), np.pi / 4, (0, np.sqrt(2))),
])
def test_rotate_examples(v, theta, expected):
    assert np.allclose(rotate(v, theta), expected, atol=1e-15)


@given(points, angles, angles)
def test_rotate_group_law_and_norm(v, a, b):
    v = np.array(v)
    assert np.allclose(rotate(rotate(v, a), b), rotate(v, a + b), atol=1e-10 * (1 + np.hypot(*v)))
    assert abs(np.hypot(*rotate(v, a)) - np.hypot(*v)) <= 1e-12 * (1 + np.hypot(*v))


def test_signed_distance_examples():
    x_eq_1 = Line2([1, 0], [0, 1])
    assert np.allclose(x_eq_1.normal, [1, 0]) and x_eq_1.offset == pytest.approx(1)
    assert signed_distance(x_eq_1, [0, 0]) == pytest.approx(-1)
    assert signed_distance(Line2([0, 0], [1, 0]), [3, 0]) == 0
    assert abs(signed_distance(Line2([1, 0], [0, 1]), [2, 5])) == pytest.approx(1)


def test_line_requires_unit_direction():
    with pytest.raises(ValueError):
        Line2([0, 0], [2, 0])
    with pytest.raises(DegenerateInputError):
        Line2.through([0, 0], [0, 0])


def test_halfplane_inequality_roundtrip():
    hp = HalfPlane.from_inequality([1, 0], 0.5)
    a, b = hp.inequality()
    assert np.allclose(a, [1, 0]) and b == pytest.approx(0.5)
    assert hp.contains([0.2, 7]) and not hp.contains([0.7, 0])


def test_clip_examples():
    sq = unit_square()
    half = clip(sq, HalfPlane.from_inequality([1, 0], 0.5))
    assert half.area == pytest.approx(0.5)
    assert np.allclose(np.sort(np.unique(half.vertices[:, 0])), [0, 0.5])
    assert clip(sq, HalfPlane.from_inequality([1, 0], 2.0)) is sq
    assert clip(sq, HalfPlane.from_inequality([1, 0], -1.0)) is None


@settings(max_examples=60)
@given(st.floats(0, 2 * np.pi), st.floats(-0.6, 0.6))
def test_clip_respects_constraint_and_is_idempotent(phi, c):
    sq = ConvexPolygon.regular(40, 1.0)
    hp = HalfPlane.from_inequality([np.cos(phi), np.sin(phi)], c)
    out = clip(sq, hp)
    a, b = hp.inequality()
    assert np.all(out.vertices @ a - b <= 1e-10)
    again = clip(out, hp)
    assert again.area == pytest.approx(out.area, abs=1e-12)
    assert out.is_convex()


def test_convex_hull_examples():
    tri = convex_hull([(0, 0), (1, 0), (0, 1), (0.25, 0.25)])
    assert len(tri) == 3 and tri.area == pytest.approx(0.5)
    assert len(convex_hull(unit_square().vertices)) == 4
    t = 2 * np.pi * np.arange(1000) / 1000
    circ = convex_hull(np.column_stack([np.cos(t), np.sin(t)]))
    assert len(circ) == 1000
    assert np.max(np.abs(np.hypot(*circ.vertices.T) - 1)) < 1e-5


@given(st.lists(points, min_size=3, max_size=60))
def test_convex_hull_contains_inputs(pts):
    hull = convex_hull(pts)
    if hull.degenerate:
        return
    assert hull.is_convex()
    assert hull.area > 0
    assert np.all(hull.edge_margins(np.array(pts)) >= -1e-10 * hull.scale)


def test_hull_drops_collinear_points():
    hull = convex_hull([(0, 0), (0.5, 0), (1, 0), (1, 1), (0, 1)])
    assert len(hull) == 4


def test_invert_examples():
    assert np.allclose(invert([2, 0], [0, 0]), [-0.5, 0])
    assert np.allclose(invert([-0.5, 0], [0, 0]), [2, 0])
    with pytest.raises(DegenerateInputError):
        invert([1, 1], [1, 1])


@given(points, points)
def test_invert_is_involution(q, c):
    q, c = np.array(q), np.array(c)
    if np.hypot(*(q - c)) < 1e-3:
        return
    back = invert(invert(q, c), c)
    assert np.allclose(back, q, atol=1e-10 * (1 + np.hypot(*q)))


def test_foot_of_perpendicular_examples():
    assert np.allclose(foot_of_perpendicular(Line2([0, 0], [1, 0]), [3, 4]), [3, 0])
    assert np.allclose(foot_of_perpendicular(Line2([0, 0], [1, 0]), [2, 0]), [2, 0])
    assert np.allclose(foot_of_perpendicular(Line2([1, 0], [0, 1]), [0, 0]), [1, 0])


@given(points, st.floats(0, 2 * np.pi), points)
def test_foot_lies_on_line(base, phi, p):
    line = Line2(base, [np.cos(phi), np.sin(phi)])
    f = foot_of_perpendicular(line, p)
    assert abs(signed_distance(line, f)) <= 1e-12 * (1 + np.hypot(*f) + np.hypot(*base))
    assert abs((f - np.array(p)) @ line.dir) <= 1e-12 * (1 + np.hypot(*p) + np.hypot(*base))


def test_polygon_measures():
    sq = ConvexPolygon.square((3, -2), 2.0)
    assert sq.area == pytest.approx(4.0)
    assert sq.perimeter == pytest.approx(8.0)
    assert np.allclose(sq.centroid, [3, -2])
    assert sq.diameter == pytest.approx(2 * np.sqrt(2))
    assert np.allclose(sq.support(np.array([[1.0, 0.0], [0.0, -1.0]])), [4, 3])


@given(st.lists(points, min_size=3, max_size=40))
def test_diameter_matches_brute_force(pts):
    hull = convex_hull(pts)
    v = hull.vertices
    d = v[:, None] - v[None]
    assert hull.diameter == pytest.approx(np.sqrt((d ** 2).sum(-1).max()), abs=1e-9)

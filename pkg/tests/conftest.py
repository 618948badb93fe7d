import pytest

from nosilhouette.aperture import aperture_angle, aperture_point
from nosilhouette.curve import ParametricCurve

BUILTIN = {
    "circle": ParametricCurve.circle(1.0),
    "ellipse": ParametricCurve.ellipse(2.0, 1.0),
    "flower": ParametricCurve.flower(4, 0.35),
}


@pytest.fixture(scope="session")
def curves():
    return BUILTIN


@pytest.fixture(scope="session")
def estimates():
    """Aperture angle and point of each built-in curve, computed once."""
    return {name: aperture_point(c, aperture_angle(c, tol=1e-5)) for name, c in BUILTIN.items()}

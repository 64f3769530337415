import pytest

from dbar_poincare.geometry import make_domain


@pytest.fixture(scope="session")
def disc():
    return make_domain("UnitDisc")


@pytest.fixture(scope="session")
def ellipse():
    return make_domain("Ellipse", [2.0, 1.0])


@pytest.fixture(scope="session")
def ball():
    return make_domain("UnitBall", n=2)

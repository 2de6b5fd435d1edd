import pytest

from slopekit import MetricSpace, ScalarField, explicit_neighborhoods


@pytest.fixture
def e3():
    """Three collinear points: ab = 1, bc = 1, ac = 2."""
    return MetricSpace(("a", "b", "c"), [[0, 1, 2], [1, 0, 1], [2, 1, 0]])


@pytest.fixture
def e3_path_nbhd(e3):
    return explicit_neighborhoods(e3, [("a", "b"), ("b", "c")])


@pytest.fixture
def f013(e3):
    return ScalarField(e3, (0.0, 1.0, 3.0))

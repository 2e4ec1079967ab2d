from fractions import Fraction

import pytest

from chaincalc.arcs import segment_nest
from chaincalc.fixtures import bundled_trace
from chaincalc.geometry import Point, Rect

F = Fraction


def R(xlo, xhi, ylo, yhi) -> Rect:
    return Rect(F(xlo), F(xhi), F(ylo), F(yhi))


@pytest.fixture(scope="session")
def trace():
    """The bundled 12-stage construction, shared across tests."""
    return bundled_trace()


@pytest.fixture(scope="session")
def unit_segment_nest():
    return segment_nest(Point(F(0), F(0)), Point(F(1), F(0)), 6)


@pytest.fixture
def tmp_json(tmp_path):
    return lambda name: str(tmp_path / name)

import random
from fractions import Fraction as F

import pytest

from chaincalc.arcs import segment_nest
from chaincalc.chains import validate_witnessing_chain
from chaincalc.errors import ChainValidationError, InsufficientDepthError, RefinementError
from chaincalc.evaluation import (
    Polyline, containing_indices, cover_polyline, evaluate_point, label_sequence,
    containing_rects, nesting_holds, polyline_covered, separation_depth, validate_polyline,
)
from chaincalc.geometry import Point, diameter_sq, pow2, rect_intersects

from conftest import R


@pytest.fixture(scope="module")
def labelled(unit_segment_nest):
    return label_sequence(unit_segment_nest)


def test_labels_split_along_refinement_types(labelled):
    assert [lab.length for lab in labelled] == [2 ** (j + 1) for j in range(len(labelled))]
    assert labelled[2].labels[3].lo == F(3, 8)
    assert containing_indices(labelled[1], F(1, 2)) == [1, 2]
    assert containing_indices(labelled[1], F(1, 3)) == [1]


@pytest.mark.parametrize("x", [F(0), F(1, 3), F(1, 2), F(5, 7), F(1)])
def test_enclosure_contains_the_arc_point(labelled, x):
    result = evaluate_point(labelled, x, 3)
    assert result.enclosure.contains_point(Point(x, F(0)))
    assert diameter_sq(result.enclosure) < pow2(-6)
    assert result.guarantee_sq == pow2(-6)


def test_too_little_depth_is_reported(labelled):
    with pytest.raises(InsufficientDepthError):
        evaluate_point(labelled, F(1, 3), 10)
    with pytest.raises(ChainValidationError):
        evaluate_point(labelled, F(3, 2), 2)


@pytest.mark.parametrize("x", [F(1, 3), F(1, 4)])
def test_enclosures_nest(labelled, x):
    assert all(nesting_holds(labelled, x, j) for j in range(len(labelled) - 1))


def test_separation_depth_gives_disjoint_enclosures(labelled):
    assert separation_depth(labelled, F(1, 4), F(3, 4)) == 2
    d = separation_depth(labelled, F(1, 3), F(3, 8))
    a = evaluate_point(labelled, F(1, 3), d + 1)
    b = evaluate_point(labelled, F(3, 8), d + 1)
    assert not rect_intersects(a.enclosure, b.enclosure)
    with pytest.raises(ChainValidationError):
        separation_depth(labelled, F(1, 2), F(1, 4))


def test_labelling_rejects_non_descending(unit_segment_nest):
    with pytest.raises(RefinementError):
        label_sequence([unit_segment_nest[2], unit_segment_nest[1]])


def test_polyline_must_be_injective():
    validate_polyline(Polyline.of((0, 0), (1, 0), (1, 1)))
    with pytest.raises(ChainValidationError, match="folds back"):
        validate_polyline(Polyline.of((0, 0), (1, 0), (F(1, 2), 0)))
    with pytest.raises(ChainValidationError, match="not injective"):
        validate_polyline(Polyline.of((0, 0), (2, 0), (2, 1), (1, 1), (1, -1)))


def test_cover_is_a_fine_witnessing_chain():
    poly = Polyline.of((0, 0), (1, 0), (1, 1))
    cover = cover_polyline(poly, F(1, 16))
    validate_witnessing_chain(cover.links)
    assert polyline_covered(poly, cover.links)
    assert all(diameter_sq(r) < F(1, 16) for r in cover.links)


def test_polyline_covered_is_exact():
    poly = Polyline.of((0, 0), (1, 0))
    assert polyline_covered(poly, [R(-1, F(1, 2), -1, 1), R(F(1, 4), 2, -1, 1)])
    # the seam point (1/2, 0) is left out
    assert not polyline_covered(poly, [R(-1, F(1, 2), -1, 1), R(F(1, 2), 2, -1, 1)])


def test_cover_rejects_a_self_crossing_polyline():
    crossing = Polyline.of((0, 0), (2, 0), (2, 1), (1, 1), (1, -1))
    with pytest.raises(ChainValidationError, match="not injective"):
        cover_polyline(crossing, F(1, 16))
    with pytest.raises(ChainValidationError, match="folds back"):
        cover_polyline(Polyline.of((0, 0), (1, 0), (F(1, 2), 0)), F(1, 16))


@pytest.fixture(scope="module")
def deep_labelled():
    return label_sequence(segment_nest(Point(F(0), F(0)), Point(F(1), F(0)), 12))


@pytest.mark.slow
def test_random_points_resolve_at_depth_twelve(deep_labelled):
    rng = random.Random(7)
    for _ in range(100):
        x = F(rng.randint(0, 2 ** 20), 2 ** 20)
        result = evaluate_point(deep_labelled, x, 8)
        assert result.enclosure.contains_point(Point(x, F(0)))
        assert diameter_sq(result.enclosure) < pow2(-16)
        assert all(nesting_holds(deep_labelled, x, j) for j in range(len(deep_labelled) - 1))


@pytest.mark.slow
def test_random_pairs_stay_apart_below_their_separation_depth(deep_labelled):
    rng = random.Random(11)
    for _ in range(100):
        x1 = F(rng.randint(0, 2 ** 20 - 2 ** 10), 2 ** 20)
        x2 = x1 + F(rng.randint(2 ** 10, 2 ** 20 - int(x1 * 2 ** 20)), 2 ** 20)
        d = separation_depth(deep_labelled, x1, x2)
        for depth in range(d, len(deep_labelled)):
            s1 = containing_rects(deep_labelled, x1, depth)
            s2 = containing_rects(deep_labelled, x2, depth)
            assert not any(rect_intersects(a, b) for a in s1 for b in s2)

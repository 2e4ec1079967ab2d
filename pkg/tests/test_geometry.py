import random
from fractions import Fraction as F

import pytest

from chaincalc.errors import ChainValidationError, FormatError
from chaincalc.geometry import (
    Point, Rect, Region, Segment, as_rational, clip_segment, closure_contained,
    closure_in_union, dist_sq, format_rational, hausdorff_dist_sq, largest_power_below,
    max_corner_dist_sq, merged_trace, parse_rational, pieces_connected, rect_complement,
    rect_intersects, segment_length, segments_connected, segments_connected_bruteforce,
    total_length, trace_on_rects, union_area,
)

from conftest import R


def seg(ax, ay, bx, by) -> Segment:
    return Segment.make(ax, ay, bx, by)


def test_parse_rational_accepts_wire_syntax():
    assert parse_rational("-3/8") == F(-3, 8)
    assert parse_rational(" 5 ") == F(5)
    assert parse_rational("6/4") == F(3, 2)
    assert format_rational(F(3)) == "3/1"
    assert format_rational(F(-1, 2)) == "-1/2"


@pytest.mark.parametrize("text", ["1/0", "abc", "1/2/3", "", "0.5"])
def test_parse_rational_rejects_garbage(text):
    with pytest.raises(FormatError):
        parse_rational(text)


def test_floats_are_refused():
    with pytest.raises(FormatError):
        as_rational(0.5)


def test_largest_power_below_is_strict():
    assert largest_power_below(F(1, 3)) == F(1, 4)
    assert largest_power_below(F(1, 4)) == F(1, 8)
    assert largest_power_below(F(5)) == F(4)
    assert largest_power_below(F(1, 4), squared=True) == F(1, 4)
    with pytest.raises(ValueError):
        largest_power_below(F(0))


def test_degenerate_shapes_rejected():
    with pytest.raises(ChainValidationError):
        R(0, 0, 0, 1)
    with pytest.raises(ChainValidationError):
        seg(0, 0, 1, 1)
    with pytest.raises(ChainValidationError):
        Region.of(R(0, 1, 0, 1), R(F(1, 2), 2, 0, 1))


def test_open_rectangles_touching_do_not_intersect():
    assert not rect_intersects(R(0, 1, 0, 1), R(1, 2, 0, 1))
    assert rect_intersects(R(0, 1, 0, 1), R(F(1, 2), 2, F(1, 2), 2))


def test_closure_containment_is_strict():
    assert closure_contained(R(F(1, 4), F(3, 4), F(1, 4), F(3, 4)), R(0, 1, 0, 1))
    assert not closure_contained(R(0, F(1, 2), F(1, 4), F(3, 4)), R(0, 1, 0, 1))


def test_closure_in_union_sees_seams():
    square = R(0, 1, 0, 1)
    overlapping = [R(F(-1, 2), F(3, 4), -1, 2), R(F(1, 2), F(3, 2), -1, 2)]
    seam = [R(F(-1, 2), F(1, 2), -1, 2), R(F(1, 2), F(3, 2), -1, 2)]
    assert closure_in_union(square, overlapping)
    assert not closure_in_union(square, seam)


def test_dist_sq_between_shapes():
    assert dist_sq(Point.make(0, 1), seg(-1, 0, 1, 0)) == 1
    assert dist_sq(Point.make(3, 4), R(-1, 0, -1, 0)) == 25
    assert dist_sq(seg(0, 0, 0, 1), seg(0, F(1, 2), 2, F(1, 2))) == 0


def test_union_area_exact():
    assert union_area([R(0, 1, 0, 1), R(F(1, 2), F(3, 2), 0, 1)]) == F(3, 2)
    assert union_area([R(0, 1, 0, 1), R(F(1, 4), F(3, 4), F(1, 4), F(3, 4))]) == 1
    assert union_area([]) == 0


def test_rect_complement_measures_the_rest():
    unit = R(0, 1, 0, 1)
    rest = rect_complement([R(0, F(1, 2), -1, 2)], unit)
    assert union_area(rest) == F(1, 2)
    holes = rect_complement([R(F(1, 4), F(3, 4), F(1, 4), F(3, 4))], unit)
    assert union_area(holes) == F(3, 4)
    assert all(not rect_intersects(h, R(F(1, 4), F(3, 4), F(1, 4), F(3, 4))) for h in holes)


def test_max_corner_dist_sq_of_union():
    assert max_corner_dist_sq([R(0, 1, 0, 1), R(2, 3, 0, 1)]) == 10


def test_hausdorff_between_point_sets():
    a = [Point.make(0, 0), Point.make(1, 0)]
    b = [Point.make(0, 0)]
    assert hausdorff_dist_sq(a, b) == 1
    assert hausdorff_dist_sq([Point.make(0, 0)], [Point.make(3, 4)]) == 25
    with pytest.raises(ChainValidationError):
        hausdorff_dist_sq([], b)


def test_segments_connected_matches_bruteforce():
    comb = [seg(0, 0, 0, 2), seg(-1, 1, 1, 1), seg(-1, 2, 1, 2), seg(1, 1, 1, F(3, 2))]
    apart = comb + [seg(5, 5, 6, 5)]
    assert segments_connected(comb) and segments_connected_bruteforce(comb)
    assert not segments_connected(apart) and not segments_connected_bruteforce(apart)
    assert total_length(comb) == F(13, 2)
    assert [segment_length(s) for s in comb] == [2, 2, 2, F(1, 2)]


def test_clip_segment_tracks_open_ends():
    piece = clip_segment(seg(0, 0, 1, 0), R(F(1, 2), 2, -1, 1))
    assert (piece.lo, piece.hi) == (F(1, 2), 1)
    assert not piece.lo_closed and piece.hi_closed
    assert clip_segment(seg(0, 1, 1, 1), R(0, 2, 0, 1)) is None


def test_merged_trace_joins_collinear_pieces():
    pieces = merged_trace([seg(0, 0, 1, 0), seg(F(1, 2), 0, 2, 0)], R(-1, 3, -1, 1))
    assert len(pieces) == 1
    assert (pieces[0].lo, pieces[0].hi) == (0, 2)


def test_pieces_connected_through_a_crossing():
    segs = [seg(0, 0, 0, 2), seg(-1, 1, 1, 1)]
    assert pieces_connected(trace_on_rects(segs, [R(-1, 1, 0, 2)]))
    # the crossing lies outside this window, so the two pieces fall apart
    assert not pieces_connected(trace_on_rects(segs, [R(F(-1, 2), F(1, 2), 0, F(1, 2)), R(F(1, 4), 1, F(1, 2), F(3, 2))]))


def _grid_value(rng: random.Random, span: int = 32) -> F:
    return F(rng.randint(-span, span), 16)


def _random_rect(rng: random.Random) -> Rect:
    x, y = _grid_value(rng), _grid_value(rng)
    return R(x, x + F(rng.randint(1, 16), 16), y, y + F(rng.randint(1, 16), 16))


def _random_segment(rng: random.Random) -> Segment:
    fixed, a = rng.randint(-4, 4), rng.randint(-4, 3)
    b = rng.randint(a + 1, 4)
    return seg(a, fixed, b, fixed) if rng.random() < 0.5 else seg(fixed, a, fixed, b)


def _within_sum(x: F, y: F, z: F) -> bool:
    """sqrt(x) <= sqrt(y) + sqrt(z), decided on squares."""
    slack = x - y - z
    return slack <= 0 or slack * slack <= 4 * y * z


@pytest.mark.parametrize("seed", range(5))
def test_dist_sq_is_symmetric(seed):
    rng = random.Random(seed)
    for _ in range(200):
        shapes = [Point(_grid_value(rng), _grid_value(rng)), _random_rect(rng), _random_segment(rng)]
        a, b = rng.choice(shapes), rng.choice(shapes)
        assert dist_sq(a, b) == dist_sq(b, a)
        assert dist_sq(a, a) == 0


@pytest.mark.parametrize("seed", range(5))
def test_hausdorff_obeys_the_triangle_inequality(seed):
    rng = random.Random(seed)
    for _ in range(50):
        a, b, c = (
            [Point(_grid_value(rng), _grid_value(rng)) for _ in range(rng.randint(1, 8))]
            for _ in range(3)
        )
        assert hausdorff_dist_sq(a, b) == hausdorff_dist_sq(b, a)
        assert _within_sum(hausdorff_dist_sq(a, c), hausdorff_dist_sq(a, b), hausdorff_dist_sq(b, c))


@pytest.mark.parametrize("seed", range(5))
def test_union_area_grows_with_the_union(seed):
    rng = random.Random(seed)
    rects = []
    area = F(0)
    for _ in range(12):
        r = _random_rect(rng)
        rects.append(r)
        grown = union_area(rects)
        assert max(area, r.width * r.height) <= grown <= area + r.width * r.height
        area = grown


@pytest.mark.parametrize("seed", range(10))
def test_segments_connected_agrees_with_bruteforce_on_random_sets(seed):
    rng = random.Random(seed)
    for _ in range(40):
        segs = [_random_segment(rng) for _ in range(rng.randint(1, 12))]
        assert segments_connected(segs) == segments_connected_bruteforce(segs)

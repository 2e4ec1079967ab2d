# chaincalc/evaluation.py - Labelling, point evaluation and chain covers
"""
Turns a descending sequence of arc chains into labelled arc chains, evaluates
the induced injective map at rational parameters, finds the depth at which
two parameters separate, and covers axis-aligned polylines by witnessing
chains of small squares.
"""

from __future__ import annotations

import bisect
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .chains import (
    ArcChain, LabelledArcChain, WitnessingChain, make_labelled, validate_descending,
)
from .errors import ChainValidationError, InsufficientDepthError, RefinementError
from .geometry import (
    Interval, Point, Rect, Segment, bounding_rect, closed_box_pairs, closure_in_union,
    diameter_sq, largest_power_below, pow2, rect_intersects, segments_intersect,
)

logger = logging.getLogger("chaincalc.evaluation")

INFLATION_OFFSET = 4  # enclosure margin is 2^-(k + INFLATION_OFFSET)


@dataclass(frozen=True)
class EvaluationResult:
    depth_used: int
    enclosure: Rect
    guarantee_sq: Fraction


@dataclass(frozen=True)
class Polyline:
    vertices: Tuple[Point, ...]

    def __post_init__(self):
        if len(self.vertices) < 2:
            raise ChainValidationError("polyline needs at least two vertices")

    @classmethod
    def of(cls, *coords) -> "Polyline":
        return cls(tuple(Point.make(x, y) for x, y in coords))

    def segments(self) -> List[Segment]:
        return [Segment(a, b) for a, b in zip(self.vertices[:-1], self.vertices[1:])]

    def bbox(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)


def _direction(seg: Segment) -> Tuple[int, int]:
    dx = seg.b.x - seg.a.x
    dy = seg.b.y - seg.a.y
    return (dx > 0) - (dx < 0), (dy > 0) - (dy < 0)


def validate_polyline(poly: Polyline) -> Polyline:
    """
    Check that the polyline is an injective curve: adjacent segments meet
    only at their shared vertex, non-adjacent segments are disjoint.
    """
    segs = poly.segments()
    for i in range(len(segs) - 1):
        d1, d2 = _direction(segs[i]), _direction(segs[i + 1])
        if d1[0] == -d2[0] and d1[1] == -d2[1]:
            raise ChainValidationError(f"polyline folds back at vertex {i + 1}")
    boxes = [(min(s.a.x, s.b.x), max(s.a.x, s.b.x), min(s.a.y, s.b.y), max(s.a.y, s.b.y)) for s in segs]
    for i, j in sorted(closed_box_pairs(boxes)):
        if j - i >= 2 and segments_intersect(segs[i], segs[j]):
            raise ChainValidationError(f"polyline not injective: segments {i + 1} and {j + 1} meet")
    return poly


#  Labelling (uniform sub-partitions along the refinement types)

def _uniform(iv: Interval, parts: int) -> List[Interval]:
    step = (iv.hi - iv.lo) / parts
    return [Interval(iv.lo + step * i, iv.lo + step * (i + 1), closed=True) for i in range(parts)]


def label_sequence(seq: Sequence[ArcChain]) -> List[LabelledArcChain]:
    """
    Label a descending sequence: level 0 gets the uniform partition of [0,1],
    each later interval is split uniformly into s_i parts.

    Raises:
        RefinementError: when the sequence is not descending
    """
    report = validate_descending(seq, enforce_diam=False)
    if not report['valid']:
        raise RefinementError(report['errors'][0])
    labels = _uniform(Interval(Fraction(0), Fraction(1), closed=True), seq[0].length)
    out = [make_labelled(seq[0], labels)]
    for arc, sizes in zip(seq[1:], report['stats']['types']):
        labels = [sub for iv, s in zip(labels, sizes) for sub in _uniform(iv, s)]
        out.append(make_labelled(arc, labels))
    return out


def containing_indices(lab: LabelledArcChain, x: Fraction) -> List[int]:
    """Indices i with x in I_i (one, or two at a shared endpoint)."""
    los = [iv.lo for iv in lab.labels]
    i = bisect.bisect_right(los, x) - 1
    found = [j for j in (i - 1, i) if 0 <= j < lab.length and lab.labels[j].contains(x)]
    return found


def containing_rects(seq: Sequence[LabelledArcChain], x: Fraction, depth: int) -> List[Rect]:
    """Rectangles of S_{x,depth}, the union of V_i over intervals holding x."""
    lab = seq[depth]
    return [r for i in containing_indices(lab, x) for r in lab.arc.union(i)]


def nesting_holds(seq: Sequence[LabelledArcChain], x: Fraction, depth: int) -> bool:
    """closure(bbox(S_{x,depth+1})) lies inside S_{x,depth}."""
    inner = bounding_rect(containing_rects(seq, x, depth + 1))
    return closure_in_union(inner, containing_rects(seq, x, depth))


def evaluate_point(seq: Sequence[LabelledArcChain], x: Fraction, k: int,
                   inflation_offset: int = INFLATION_OFFSET) -> EvaluationResult:
    """
    Enclose f(x) in an open rectangle of diameter below 2^-k.

    Args:
        seq: Labelled descending sequence
        x: Parameter in [0,1]
        k: Precision exponent

    Returns:
        EvaluationResult at the first depth meeting the precision

    Raises:
        InsufficientDepthError: when no available depth is fine enough
    """
    x = Fraction(x)
    if not (0 <= x <= 1):
        raise ChainValidationError(f"parameter {x} outside [0,1]")
    bound = pow2(-2 * k)
    margin = pow2(-(k + inflation_offset))
    for depth in range(len(seq)):
        box = bounding_rect(containing_rects(seq, x, depth)).inflate(margin)
        if diameter_sq(box) < bound:
            logger.debug(f"x={x} resolved at depth {depth}")
            return EvaluationResult(depth, box, bound)
    raise InsufficientDepthError()


def separation_depth(seq: Sequence[LabelledArcChain], x1: Fraction, x2: Fraction) -> int:
    """Least depth at which x1 and x2 sit in intervals at index distance >= 2."""
    x1, x2 = Fraction(x1), Fraction(x2)
    if not (0 <= x1 < x2 <= 1):
        raise ChainValidationError("precondition violation: need 0 <= x1 < x2 <= 1")
    for depth, lab in enumerate(seq):
        i1 = containing_indices(lab, x1)
        i2 = containing_indices(lab, x2)
        if min(abs(a - b) for a in i1 for b in i2) < 2:
            continue
        s1 = containing_rects(seq, x1, depth)
        s2 = containing_rects(seq, x2, depth)
        if any(rect_intersects(a, b) for a in s1 for b in s2):
            raise ChainValidationError(f"separated labels but overlapping unions at depth {depth}")
        return depth
    raise InsufficientDepthError()


#  Covers of polylines

def _samples(seg: Segment, step: Fraction) -> List[Point]:
    n = max(1, math.ceil(seg.length / step))
    return [Point(seg.a.x + (seg.b.x - seg.a.x) * i / n, seg.a.y + (seg.b.y - seg.a.y) * i / n)
            for i in range(n + 1)]


def cover_polyline(a: Polyline, eps_sq: Fraction) -> WitnessingChain:
    """
    Witnessing chain of squares covering the polyline, each of squared
    diameter below eps_sq. The square side is the largest dyadic r with
    2r^2 < eps_sq; squares are centred on samples at spacing r/2.

    Raises:
        ChainValidationError: bad eps_sq, or a polyline that is not an arc
    """
    eps_sq = Fraction(eps_sq)
    if eps_sq <= 0:
        raise ChainValidationError("eps_sq must be positive")
    validate_polyline(a)
    side = largest_power_below(eps_sq / 2, squared=True)
    half = side / 2
    xlo, xhi, ylo, yhi = a.bbox()
    if xhi - xlo < side and yhi - ylo < side:
        centre = Point((xlo + xhi) / 2, (ylo + yhi) / 2)
        return WitnessingChain((Rect.around(centre, half),))
    points: List[Point] = []
    for seg in a.segments():
        for p in _samples(seg, half):
            if not points or points[-1] != p:
                points.append(p)
    return WitnessingChain(tuple(Rect.around(p, half) for p in points))


def polyline_covered(a: Polyline, rects: Sequence[Rect]) -> bool:
    """Exact test that every point of the polyline lies in some open rect."""
    for seg in a.segments():
        spans = []
        for r in rects:
            if seg.horizontal:
                if r.ylo < seg.fixed < r.yhi:
                    spans.append((r.xlo, r.xhi))
            elif r.xlo < seg.fixed < r.xhi:
                spans.append((r.ylo, r.yhi))
        spans.sort()
        # cur must lie strictly inside some span starting before it
        cur, idx, best = seg.lo, 0, None
        while True:
            while idx < len(spans) and spans[idx][0] < cur:
                best = spans[idx][1] if best is None else max(best, spans[idx][1])
                idx += 1
            if best is None or best <= cur:
                return False
            if best > seg.hi:
                break
            cur = best
    return True

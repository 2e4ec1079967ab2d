# chaincalc/geometry.py - Exact rational planar primitives
"""
Exact rational arithmetic on axis-aligned points, segments, open rectangles
and regions. Every metric predicate compares squared quantities, so no
irrational value is ever produced. Bulk routines (union area, overlap
detection, Hausdorff distance) scale coordinates to a common integer grid
and work on integers or numpy arrays.
"""

from __future__ import annotations

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from collections import defaultdict
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from .errors import ChainValidationError, FormatError

logger = logging.getLogger("chaincalc.geometry")

ZERO = Fraction(0)

INT64_SAFE = 2 ** 30  # scaled magnitudes below this keep products inside int64


#  Rationals

def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise FormatError(f"refusing float {value!r}; use 'p/q'")
    return Fraction(value)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse the "p/q" wire syntax (bare integers mean q = 1).

    Args:
        text: String such as "-3/8" or "5", or an int/Fraction

    Returns:
        Exact Fraction in lowest terms
    """
    if isinstance(text, (int, Fraction)) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(f"not a rational: {text!r}")
    raw = text.strip()
    parts = raw.split("/")
    try:
        if len(parts) == 1:
            return Fraction(int(parts[0]))
        if len(parts) == 2:
            den = int(parts[1])
            if den == 0:
                raise FormatError(f"zero denominator in {text!r}")
            return Fraction(int(parts[0]), den)
    except ValueError:
        pass
    raise FormatError(f"not a rational: {text!r}")


def format_rational(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def pow2(exponent: int) -> Fraction:
    """2**exponent as an exact Fraction (negative exponents allowed)."""
    if exponent >= 0:
        return Fraction(2 ** exponent)
    return Fraction(1, 2 ** (-exponent))


def largest_power_below(bound: Fraction, squared: bool = False) -> Fraction:
    """
    Largest 2^-m (m any integer) strictly below bound, or whose square is
    strictly below bound when squared is set.
    """
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("bound must be positive")
    m = 0
    value = Fraction(1)
    test = (lambda v: v * v < bound) if squared else (lambda v: v < bound)
    while not test(value):
        value /= 2
        m += 1
    while test(value * 2):
        value *= 2
    return value


def common_scale(values: Iterable[Fraction]) -> int:
    scale = 1
    for den in {Fraction(v).denominator for v in values}:
        scale = scale * den // math.gcd(scale, den)
    return scale


def scale_int(value: Fraction, scale: int) -> int:
    return value.numerator * (scale // value.denominator)


#  Domain types

@dataclass(frozen=True, slots=True)
class Point:
    x: Fraction
    y: Fraction

    @classmethod
    def make(cls, x, y) -> "Point":
        return cls(as_rational(x), as_rational(y))


@dataclass(frozen=True, slots=True)
class Interval:
    lo: Fraction
    hi: Fraction
    closed: bool = False

    def __post_init__(self):
        if self.closed and self.lo > self.hi:
            raise ChainValidationError(f"closed interval [{self.lo}, {self.hi}] is empty")
        if not self.closed and self.lo >= self.hi:
            raise ChainValidationError(f"open interval ({self.lo}, {self.hi}) is empty")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Fraction) -> bool:
        if self.closed:
            return self.lo <= value <= self.hi
        return self.lo < value < self.hi


@dataclass(frozen=True, slots=True)
class Rect:
    """Open axis-aligned rational rectangle (xlo, xhi) x (ylo, yhi)."""
    xlo: Fraction
    xhi: Fraction
    ylo: Fraction
    yhi: Fraction

    def __post_init__(self):
        if not (self.xlo < self.xhi and self.ylo < self.yhi):
            raise ChainValidationError(
                f"degenerate rectangle ({self.xlo},{self.xhi})x({self.ylo},{self.yhi})")

    @classmethod
    def make(cls, xlo, xhi, ylo, yhi) -> "Rect":
        return cls(as_rational(xlo), as_rational(xhi), as_rational(ylo), as_rational(yhi))

    @classmethod
    def around(cls, center: Point, half_w: Fraction, half_h: Optional[Fraction] = None) -> "Rect":
        half_h = half_w if half_h is None else half_h
        return cls(center.x - half_w, center.x + half_w, center.y - half_h, center.y + half_h)

    @property
    def width(self) -> Fraction:
        return self.xhi - self.xlo

    @property
    def height(self) -> Fraction:
        return self.yhi - self.ylo

    def corners(self) -> Tuple[Point, Point, Point, Point]:
        return (Point(self.xlo, self.ylo), Point(self.xhi, self.ylo),
                Point(self.xlo, self.yhi), Point(self.xhi, self.yhi))

    def inflate(self, margin: Fraction) -> "Rect":
        return Rect(self.xlo - margin, self.xhi + margin, self.ylo - margin, self.yhi + margin)

    def translate(self, dx: Fraction, dy: Fraction) -> "Rect":
        return Rect(self.xlo + dx, self.xhi + dx, self.ylo + dy, self.yhi + dy)

    def contains_point(self, p: Point) -> bool:
        return self.xlo < p.x < self.xhi and self.ylo < p.y < self.yhi


@dataclass(frozen=True, slots=True)
class Segment:
    """Closed axis-aligned segment between two distinct rational points."""
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ChainValidationError(f"degenerate segment at ({self.a.x},{self.a.y})")
        if self.a.x != self.b.x and self.a.y != self.b.y:
            raise ChainValidationError("segment is not axis-aligned")

    @classmethod
    def make(cls, ax, ay, bx, by) -> "Segment":
        return cls(Point.make(ax, ay), Point.make(bx, by))

    @property
    def horizontal(self) -> bool:
        return self.a.y == self.b.y

    @property
    def fixed(self) -> Fraction:
        """The constant coordinate (y for horizontal, x for vertical)."""
        return self.a.y if self.horizontal else self.a.x

    @property
    def lo(self) -> Fraction:
        return min(self.a.x, self.b.x) if self.horizontal else min(self.a.y, self.b.y)

    @property
    def hi(self) -> Fraction:
        return max(self.a.x, self.b.x) if self.horizontal else max(self.a.y, self.b.y)

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Point:
        return Point((self.a.x + self.b.x) / 2, (self.a.y + self.b.y) / 2)

    def point_at(self, coord: Fraction) -> Point:
        """Point of the segment's line at running coordinate coord."""
        return Point(coord, self.fixed) if self.horizontal else Point(self.fixed, coord)

    def contains_point(self, p: Point) -> bool:
        if self.horizontal:
            return p.y == self.fixed and self.lo <= p.x <= self.hi
        return p.x == self.fixed and self.lo <= p.y <= self.hi

    def translate(self, dx: Fraction, dy: Fraction) -> "Segment":
        return Segment(Point(self.a.x + dx, self.a.y + dy), Point(self.b.x + dx, self.b.y + dy))


@dataclass(frozen=True, slots=True)
class Region:
    """Finite union of pairwise disjoint open rectangles."""
    parts: Tuple[Rect, ...]

    def __post_init__(self):
        if not self.parts:
            raise ChainValidationError("region needs at least one part")
        for i in range(len(self.parts)):
            for j in range(i + 1, len(self.parts)):
                if rect_intersects(self.parts[i], self.parts[j]):
                    raise ChainValidationError(f"region parts {i} and {j} overlap")

    @classmethod
    def of(cls, *parts: Rect) -> "Region":
        return cls(tuple(parts))

    def contains_point(self, p: Point) -> bool:
        return any(r.contains_point(p) for r in self.parts)


#  Predicates

def rect_intersects(a: Rect, b: Rect) -> bool:
    """True iff the open rectangles share a point."""
    return a.xlo < b.xhi and b.xlo < a.xhi and a.ylo < b.yhi and b.ylo < a.yhi


def closure_contained(inner: Rect, outer: Rect) -> bool:
    """True iff the closed rectangle [inner] lies inside the open rectangle outer."""
    return (outer.xlo < inner.xlo and inner.xhi < outer.xhi
            and outer.ylo < inner.ylo and inner.yhi < outer.yhi)


def diameter_sq(r: Rect) -> Fraction:
    return r.width * r.width + r.height * r.height


def bounding_rect(rects: Sequence[Rect]) -> Rect:
    return Rect(min(r.xlo for r in rects), max(r.xhi for r in rects),
                min(r.ylo for r in rects), max(r.yhi for r in rects))


Shape = Union[Point, Segment, Rect]


def _spans(s: Shape) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    if isinstance(s, Point):
        return s.x, s.x, s.y, s.y
    if isinstance(s, Segment):
        return (min(s.a.x, s.b.x), max(s.a.x, s.b.x), min(s.a.y, s.b.y), max(s.a.y, s.b.y))
    if isinstance(s, Rect):
        return s.xlo, s.xhi, s.ylo, s.yhi
    raise TypeError(f"unsupported shape {type(s).__name__}")


def _gap(alo, ahi, blo, bhi) -> Fraction:
    return max(ZERO, blo - ahi, alo - bhi)


def dist_sq(a: Shape, b: Shape) -> Fraction:
    """
    Exact squared Euclidean distance between two axis-aligned sets.

    Args:
        a, b: Point, Segment or Rect

    Returns:
        gap_x^2 + gap_y^2 (0 when the closures meet)
    """
    axlo, axhi, aylo, ayhi = _spans(a)
    bxlo, bxhi, bylo, byhi = _spans(b)
    gx = _gap(axlo, axhi, bxlo, bxhi)
    gy = _gap(aylo, ayhi, bylo, byhi)
    return gx * gx + gy * gy


def point_dist_sq(p: Point, q: Point) -> Fraction:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


def max_corner_dist_sq(rects: Sequence[Rect]) -> Fraction:
    """Squared diameter of a finite union of boxes (attained at corners)."""
    if len(rects) == 1:
        return diameter_sq(rects[0])
    corners = [c for r in rects for c in r.corners()]
    if len(corners) > 64:
        return _max_pair_dist_sq(corners)
    best = ZERO
    for i in range(len(corners)):
        for j in range(i + 1, len(corners)):
            d = point_dist_sq(corners[i], corners[j])
            if d > best:
                best = d
    return best


def _max_pair_dist_sq(points: Sequence[Point]) -> Fraction:
    """Diameter of a point set via its convex hull (exact)."""
    hull = convex_hull(points)
    best = ZERO
    for i in range(len(hull)):
        for j in range(i + 1, len(hull)):
            d = point_dist_sq(hull[i], hull[j])
            if d > best:
                best = d
    return best


def convex_hull(points: Sequence[Point]) -> List[Point]:
    pts = sorted(set((p.x, p.y) for p in points))
    if len(pts) <= 2:
        return [Point(x, y) for x, y in pts]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower: list = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return [Point(x, y) for x, y in lower[:-1] + upper[:-1]]


#  Segments

def segment_length(seg: Segment) -> Fraction:
    return seg.length


def total_length(segs: Iterable[Segment]) -> Fraction:
    return sum((s.length for s in segs), ZERO)


def segments_intersect(s: Segment, t: Segment) -> bool:
    """Closed-segment intersection test."""
    if s.horizontal == t.horizontal:
        return s.fixed == t.fixed and s.lo <= t.hi and t.lo <= s.hi
    h, v = (s, t) if s.horizontal else (t, s)
    return h.lo <= v.fixed <= h.hi and v.lo <= h.fixed <= v.hi


def segments_connected(segs: Sequence[Segment]) -> bool:
    """
    True iff the union of the closed segments is connected.

    Components are merged over the exact pairwise-intersection relation,
    with candidate pairs found by grid bucketing.
    """
    n = len(segs)
    if n <= 1:
        return True
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    boxes = [_spans(s) for s in segs]
    for i, j in closed_box_pairs(boxes):
        if segments_intersect(segs[i], segs[j]):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    root = find(0)
    return all(find(i) == root for i in range(n))


def segments_connected_bruteforce(segs: Sequence[Segment]) -> bool:
    """Breadth-first reachability over the intersection graph."""
    if len(segs) <= 1:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        i = frontier.pop()
        for j in range(len(segs)):
            if j not in seen and segments_intersect(segs[i], segs[j]):
                seen.add(j)
                frontier.append(j)
    return len(seen) == len(segs)


@dataclass(frozen=True, slots=True)
class Piece:
    """
    Part of an axis-aligned segment with per-end openness, the shape of
    a closed segment clipped to an open rectangle.
    """
    horizontal: bool
    fixed: Fraction
    lo: Fraction
    hi: Fraction
    lo_closed: bool
    hi_closed: bool

    def holds(self, coord: Fraction) -> bool:
        above = coord > self.lo or (self.lo_closed and coord == self.lo)
        below = coord < self.hi or (self.hi_closed and coord == self.hi)
        return above and below

    def contains_point(self, p: Point) -> bool:
        if self.horizontal:
            return p.y == self.fixed and self.holds(p.x)
        return p.x == self.fixed and self.holds(p.y)

    @property
    def degenerate(self) -> bool:
        return self.lo == self.hi


def clip_segment(seg: Segment, rect: Rect) -> Optional[Piece]:
    """Intersection of a closed segment with an open rectangle, if any."""
    if seg.horizontal:
        if not (rect.ylo < seg.fixed < rect.yhi):
            return None
        lo_b, hi_b = rect.xlo, rect.xhi
    else:
        if not (rect.xlo < seg.fixed < rect.xhi):
            return None
        lo_b, hi_b = rect.ylo, rect.yhi
    lo, lo_closed = (seg.lo, True) if seg.lo > lo_b else (lo_b, False)
    hi, hi_closed = (seg.hi, True) if seg.hi < hi_b else (hi_b, False)
    if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
        return None
    return Piece(seg.horizontal, seg.fixed, lo, hi, lo_closed, hi_closed)


def pieces_meet(p: Piece, q: Piece) -> bool:
    if p.horizontal == q.horizontal:
        if p.fixed != q.fixed:
            return False
        lo = max(p.lo, q.lo)
        hi = min(p.hi, q.hi)
        if lo < hi:
            return True
        return lo == hi and p.holds(lo) and q.holds(lo)
    h, v = (p, q) if p.horizontal else (q, p)
    return h.holds(v.fixed) and v.holds(h.fixed)


def pieces_connected(pieces: Sequence[Piece]) -> bool:
    """Connectedness of a finite union of segment pieces."""
    n = len(pieces)
    if n <= 1:
        return True
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if pieces_meet(pieces[i], pieces[j]):
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    root = find(0)
    return all(find(i) == root for i in range(n))


def trace_on_rects(segs: Sequence[Segment], rects: Sequence[Rect]) -> List[Piece]:
    """All pieces of the segments lying in some rectangle of rects."""
    pieces = []
    for s in segs:
        for r in rects:
            piece = clip_segment(s, r)
            if piece is not None:
                pieces.append(piece)
    return pieces


def merged_trace(segs: Sequence[Segment], rect: Rect) -> List[Piece]:
    """Pieces of segs inside rect, collinear overlapping pieces merged."""
    pieces = [p for p in (clip_segment(s, rect) for s in segs) if p is not None]
    by_line: Dict[tuple, List[Piece]] = defaultdict(list)
    for p in pieces:
        by_line[(p.horizontal, p.fixed)].append(p)
    merged: List[Piece] = []
    for (horizontal, fixed), group in by_line.items():
        group.sort(key=lambda p: (p.lo, not p.lo_closed))
        cur = group[0]
        for p in group[1:]:
            if p.lo < cur.hi or (p.lo == cur.hi and (p.lo_closed or cur.hi_closed)):
                if p.hi > cur.hi or (p.hi == cur.hi and p.hi_closed):
                    cur = Piece(horizontal, fixed, cur.lo, p.hi, cur.lo_closed, p.hi_closed)
            else:
                merged.append(cur)
                cur = p
        merged.append(cur)
    return merged


#  Bulk routines on a common integer grid

def closed_box_pairs(boxes: Sequence[Tuple]) -> Set[Tuple[int, int]]:
    """
    Index pairs (i < j) whose closed boxes intersect.

    Args:
        boxes: (xlo, xhi, ylo, yhi) rationals per item

    Returns:
        Set of candidate pairs, exact on the closed boxes
    """
    if len(boxes) < 2:
        return set()
    scale = common_scale(v for b in boxes for v in b)
    ib = [tuple(scale_int(Fraction(v), scale) for v in b) for b in boxes]
    if len(ib) <= 48:
        return {(i, j) for i in range(len(ib)) for j in range(i + 1, len(ib))
                if ib[i][0] <= ib[j][1] and ib[j][0] <= ib[i][1]
                and ib[i][2] <= ib[j][3] and ib[j][2] <= ib[i][3]}
    extents = sorted(max(b[1] - b[0], b[3] - b[2]) for b in ib)
    cell = max(1, extents[len(extents) // 2])
    grid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for idx, (x0, x1, y0, y1) in enumerate(ib):
        for cx in range(x0 // cell, x1 // cell + 1):
            for cy in range(y0 // cell, y1 // cell + 1):
                grid[(cx, cy)].append(idx)
    pairs: Set[Tuple[int, int]] = set()
    for members in grid.values():
        for a in range(len(members)):
            i = members[a]
            bi = ib[i]
            for b in range(a + 1, len(members)):
                j = members[b]
                bj = ib[j]
                if bi[0] <= bj[1] and bj[0] <= bi[1] and bi[2] <= bj[3] and bj[2] <= bi[3]:
                    pairs.add((i, j) if i < j else (j, i))
    return pairs


def overlapping_pairs(rects: Sequence[Rect]) -> Set[Tuple[int, int]]:
    """Index pairs (i < j) of strictly overlapping open rectangles."""
    boxes = [(r.xlo, r.xhi, r.ylo, r.yhi) for r in rects]
    return {(i, j) for i, j in closed_box_pairs(boxes) if rect_intersects(rects[i], rects[j])}


def _int_array(values: Sequence[int]) -> np.ndarray:
    if values and max(abs(v) for v in values) < INT64_SAFE:
        return np.asarray(values, dtype=np.int64)
    return np.asarray(values, dtype=object)


def union_area(rects: Sequence[Rect]) -> Fraction:
    """
    Exact area of a union of open rectangles by a slab sweep over the
    compressed x coordinates.
    """
    if not rects:
        return ZERO
    scale = common_scale(v for r in rects for v in (r.xlo, r.xhi, r.ylo, r.yhi))
    xlo = _int_array([scale_int(r.xlo, scale) for r in rects])
    xhi = _int_array([scale_int(r.xhi, scale) for r in rects])
    ylo = _int_array([scale_int(r.ylo, scale) for r in rects])
    yhi = _int_array([scale_int(r.yhi, scale) for r in rects])
    order = np.argsort(ylo, kind="stable")
    xlo, xhi, ylo, yhi = xlo[order], xhi[order], ylo[order], yhi[order]
    xs = sorted(set(xlo.tolist()) | set(xhi.tolist()))
    total = 0
    for x0, x1 in zip(xs[:-1], xs[1:]):
        mask = (xlo <= x0) & (xhi >= x1)
        if not mask.any():
            continue
        total += (x1 - x0) * _covered_length(ylo[mask], yhi[mask])
    return Fraction(int(total), scale * scale)


def _covered_length(ylo: np.ndarray, yhi: np.ndarray) -> int:
    """Length of a union of intervals given sorted by lower end."""
    reach = np.maximum.accumulate(yhi)
    prev = np.concatenate([ylo[:1], reach[:-1]])
    start = np.maximum(ylo, prev)
    gained = yhi - start
    return int(gained[gained > 0].sum())


def _uncovered_runs(lo: Fraction, hi: Fraction, spans: List[Tuple[Fraction, Fraction]]):
    """Open sub-intervals of (lo, hi) missed by the closed spans."""
    runs = []
    cur = lo
    for a, b in sorted(spans):
        if b <= cur:
            continue
        if a > cur:
            runs.append((cur, min(a, hi)))
        cur = max(cur, b)
        if cur >= hi:
            break
    if cur < hi:
        runs.append((cur, hi))
    return [(a, b) for a, b in runs if a < b]


def rect_complement(rects: Sequence[Rect], within: Rect) -> List[Rect]:
    """
    Open rectangles decomposing `within` minus the closed union of rects,
    up to the finitely many slab boundary lines. Horizontally adjacent
    slabs with identical runs are merged.
    """
    clipped = sorted((r for r in rects if rect_intersects(r, within)), key=lambda r: r.xlo)
    xs = sorted({within.xlo, within.xhi} | {v for r in clipped for v in (r.xlo, r.xhi)
                                            if within.xlo < v < within.xhi})
    out: List[Rect] = []
    open_runs: Dict[Tuple[Fraction, Fraction], Fraction] = {}
    active: List[Rect] = []
    nxt = 0
    for x0, x1 in zip(xs[:-1], xs[1:]):
        while nxt < len(clipped) and clipped[nxt].xlo <= x0:
            active.append(clipped[nxt])
            nxt += 1
        active = [r for r in active if r.xhi > x0]
        spans = [(r.ylo, r.yhi) for r in active]
        runs = set(_uncovered_runs(within.ylo, within.yhi, spans))
        for run in list(open_runs):
            if run not in runs:
                out.append(Rect(open_runs.pop(run), x0, run[0], run[1]))
        for run in runs:
            open_runs.setdefault(run, x0)
    for run, start in open_runs.items():
        out.append(Rect(start, within.xhi, run[0], run[1]))
    out.sort(key=lambda r: (r.xlo, r.ylo))
    return out


def closure_in_union(rect: Rect, rects: Sequence[Rect]) -> bool:
    """
    True iff the closed rectangle [rect] lies inside the union of the open
    rects. Decided exactly on the arrangement of the candidate boundaries:
    every vertex, edge piece and face of that arrangement is tested at a
    representative point.
    """
    for r in rects:
        if closure_contained(rect, r):
            return True
    cands = [r for r in rects
             if r.xlo < rect.xhi and rect.xlo < r.xhi and r.ylo < rect.yhi and rect.ylo < r.yhi]
    if not cands:
        return False
    xs = sorted({rect.xlo, rect.xhi} | {v for r in cands for v in (r.xlo, r.xhi) if rect.xlo < v < rect.xhi})
    ys = sorted({rect.ylo, rect.yhi} | {v for r in cands for v in (r.ylo, r.yhi) if rect.ylo < v < rect.yhi})
    xr = xs + [(a + b) / 2 for a, b in zip(xs[:-1], xs[1:])]
    yr = ys + [(a + b) / 2 for a, b in zip(ys[:-1], ys[1:])]
    for x in xr:
        for y in yr:
            p = Point(x, y)
            if not any(r.contains_point(p) for r in cands):
                return False
    return True


def hausdorff_dist_sq(a: Sequence[Point], b: Sequence[Point]) -> Fraction:
    """
    Exact squared Hausdorff distance between finite point sets.

    Raises:
        ChainValidationError: "empty point set" if either input is empty
    """
    if not a or not b:
        raise ChainValidationError("empty point set")
    return max(directed_hausdorff_sq(a, b), directed_hausdorff_sq(b, a))


def directed_hausdorff_sq(a: Sequence[Point], b: Sequence[Point]) -> Fraction:
    """max over p in a of the squared distance to the nearest point of b."""
    if not a or not b:
        raise ChainValidationError("empty point set")
    scale = common_scale(v for p in list(a) + list(b) for v in (p.x, p.y))
    ia = {(scale_int(p.x, scale), scale_int(p.y, scale)) for p in a}
    ib = list({(scale_int(p.x, scale), scale_int(p.y, scale)) for p in b})
    if len(ia) * len(ib) <= 40000:
        worst = max(min((x - u) ** 2 + (y - v) ** 2 for u, v in ib) for x, y in ia)
        return Fraction(worst, scale * scale)
    xs = [p[0] for p in ib]
    ys = [p[1] for p in ib]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1)
    cell = max(1, span // max(1, math.isqrt(len(ib))))
    grid: Dict[Tuple[int, int], List[Tuple[int, int]]] = defaultdict(list)
    for u, v in ib:
        grid[(u // cell, v // cell)].append((u, v))
    worst = 0
    for x, y in ia:
        cx, cy = x // cell, y // cell
        best = None
        ring = 0
        while True:
            for gx in range(cx - ring, cx + ring + 1):
                for gy in range(cy - ring, cy + ring + 1):
                    if max(abs(gx - cx), abs(gy - cy)) != ring:
                        continue
                    for u, v in grid.get((gx, gy), ()):
                        d = (x - u) ** 2 + (y - v) ** 2
                        if best is None or d < best:
                            best = d
            # unvisited points lie at least ring * cell away
            if best is not None and best <= (ring * cell) ** 2:
                break
            ring += 1
        worst = max(worst, best)
    return Fraction(worst, scale * scale)

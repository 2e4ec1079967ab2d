# chaincalc/arcs.py - Concrete computable arcs as descending arc-chain sequences
"""
Generators for straight segments, the quadratic von Koch curve of type 2,
positive-area Osgood-style arcs and the Martin-Lof test assembled from the
complements of those arcs, plus a box-counting dimension estimate.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

import numpy as np

from .chains import ArcChain, WitnessingChain, validate_arc_chain, validate_descending
from .errors import ChainValidationError, RefinementError
from .evaluation import Polyline, validate_polyline
from .geometry import (
    Point, Rect, Segment, common_scale, pow2, rect_complement, scale_int, union_area,
)

logger = logging.getLogger("chaincalc.arcs")

KOCH_BUFFER = Fraction(1, 8)   # initial buffer, in units of the cell scale
KOCH_MAX_SHRINKS = 6
UNIT_SQUARE = Rect(Fraction(0), Fraction(1), Fraction(0), Fraction(1))


def _single_rect_arc(rects: Sequence[Rect]) -> ArcChain:
    return ArcChain(tuple(WitnessingChain((r,)) for r in rects))


#  Straight segments

def segment_nest(a: Point, b: Point, depth: int) -> List[ArcChain]:
    """
    Descending sequence for the straight arc from a to b.

    Level j has 2^(j+1)*ceil(L) single-rectangle witnessing chains; member i
    covers the i-th uniform subsegment extended by a quarter step at both
    ends, with half-height a quarter step. Consecutive levels refine with
    type (2,...,2).
    """
    seg = Segment(a, b)  # rejects degenerate and slanted input
    length = seg.length
    if seg.horizontal:
        start, sign = a.x, (1 if b.x > a.x else -1)
    else:
        start, sign = a.y, (1 if b.y > a.y else -1)
    fixed = seg.fixed
    pieces = max(1, math.ceil(length))
    levels = []
    for j in range(depth + 1):
        n = 2 ** (j + 1) * pieces
        step = length / n
        margin = step / 4
        rects = []
        for i in range(n):
            p0 = start + sign * (step * i - margin)
            p1 = start + sign * (step * (i + 1) + margin)
            lo, hi = min(p0, p1), max(p0, p1)
            if seg.horizontal:
                rects.append(Rect(lo, hi, fixed - margin, fixed + margin))
            else:
                rects.append(Rect(fixed - margin, fixed + margin, lo, hi))
        levels.append(_single_rect_arc(rects))
    return levels


#  Quadratic von Koch curve, type 2

@dataclass(frozen=True)
class KochApprox:
    depth: int
    polyline: Polyline

    @property
    def segment_count(self) -> int:
        return len(self.polyline.vertices) - 1


def koch2_points(depth: int) -> List[Tuple[int, int]]:
    """Vertices of the depth-d approximation in integer units of 4^-d."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    pts = [(0, 0), (1, 0)]
    for _ in range(depth):
        pts = [(4 * x, 4 * y) for x, y in pts]
        out = [pts[0]]
        for (x1, y1), (x2, y2) in zip(pts[:-1], pts[1:]):
            dx, dy = (x2 - x1) // 4, (y2 - y1) // 4
            nx, ny = -dy, dx  # left normal: first bump up, second down
            out.extend([
                (x1 + dx, y1 + dy),
                (x1 + dx + nx, y1 + dy + ny),
                (x1 + 2 * dx + nx, y1 + 2 * dy + ny),
                (x1 + 2 * dx, y1 + 2 * dy),
                (x1 + 2 * dx - nx, y1 + 2 * dy - ny),
                (x1 + 3 * dx - nx, y1 + 3 * dy - ny),
                (x1 + 3 * dx, y1 + 3 * dy),
                (x2, y2),
            ])
        pts = out
    return pts


def koch2_polyline(depth: int, validate: bool = True) -> KochApprox:
    """
    Type-2 quadratic Koch approximation: 8^depth axis-aligned segments of
    length 4^-depth from (0,0) to (1,0).
    """
    scale = 4 ** depth
    vertices = tuple(Point(Fraction(x, scale), Fraction(y, scale)) for x, y in koch2_points(depth))
    poly = Polyline(vertices)
    if validate:
        validate_polyline(poly)
    return KochApprox(depth, poly)


def koch2_length(depth: int) -> Fraction:
    """Length of the depth-d approximation: 8 pieces of a quarter per level."""
    return Fraction(2) ** depth


def _koch_level(depth: int, buffer: Fraction) -> ArcChain:
    scale = 4 ** depth
    s = Fraction(1, scale)
    along = buffer * s
    across = s / 3 + buffer * s
    pts = koch2_points(depth)
    rects = []
    for (x1, y1), (x2, y2) in zip(pts[:-1], pts[1:]):
        if y1 == y2:
            lo, hi = Fraction(min(x1, x2), scale), Fraction(max(x1, x2), scale)
            y = Fraction(y1, scale)
            rects.append(Rect(lo - along, hi + along, y - across, y + across))
        else:
            lo, hi = Fraction(min(y1, y2), scale), Fraction(max(y1, y2), scale)
            x = Fraction(x1, scale)
            rects.append(Rect(x - across, x + across, lo - along, hi + along))
    return _single_rect_arc(rects)


def koch2_nest(depth: int, buffer: Fraction = KOCH_BUFFER,
               max_shrinks: int = KOCH_MAX_SHRINKS, verify: bool = True) -> List[ArcChain]:
    """
    Descending sequence for the type-2 Koch arc. Level i has one box per
    segment of the depth-(i+1) approximation, 8^(i+1) in all: the segment
    extended by buffer*s along and s/3 + buffer*s across, s = 4^-(i+1).
    The buffer is halved while validation fails.

    Raises:
        RefinementError: "buffer search exhausted"
    """
    beta = Fraction(buffer)
    for attempt in range(max_shrinks + 1):
        levels = [_koch_level(i + 1, beta) for i in range(depth + 1)]
        if not verify:
            return levels
        try:
            for level in levels:
                validate_arc_chain(level.chains)
        except ChainValidationError as e:
            logger.warning(f"koch buffer {beta} rejected: {e}")
        else:
            report = validate_descending(levels, enforce_diam=True)
            if report['valid']:
                logger.info(f"koch nest depth {depth} validated with buffer {beta}")
                return levels
            logger.warning(f"koch buffer {beta} rejected: {report['errors'][0]}")
        beta /= 2
    raise RefinementError("buffer search exhausted")


def box_counts(poly: Polyline, m_lo: int, m_hi: int) -> Dict[int, int]:
    """
    Number of closed grid cells of side 4^-m meeting the polyline, for each
    m in [m_lo, m_hi]. Exact: coordinates are scaled to a common integer grid.
    """
    segs = poly.segments()
    scale = common_scale(v for p in poly.vertices for v in (p.x, p.y))
    scale = scale * (4 ** m_hi) // math.gcd(scale, 4 ** m_hi)
    ints = [(scale_int(s.a.x, scale), scale_int(s.a.y, scale),
             scale_int(s.b.x, scale), scale_int(s.b.y, scale)) for s in segs]
    counts = {}
    for m in range(m_lo, m_hi + 1):
        side = scale // (4 ** m)
        cells = set()
        for x1, y1, x2, y2 in ints:
            xa, xb = min(x1, x2), max(x1, x2)
            ya, yb = min(y1, y2), max(y1, y2)
            cols = range(-((-xa) // side) - 1, xb // side + 1)
            rows = range(-((-ya) // side) - 1, yb // side + 1)
            for cx in cols:
                if (cx + 1) * side < xa or cx * side > xb:
                    continue
                for cy in rows:
                    if (cy + 1) * side < ya or cy * side > yb:
                        continue
                    cells.add((cx, cy))
        counts[m] = len(cells)
    return counts


def box_dimension_estimate(poly: Polyline, m_lo: int, m_hi: int) -> Fraction:
    """
    Least-squares slope of log N_m against log 4^m, rounded to 10^-3.

    Returns:
        Fraction with denominator dividing 1000
    """
    if m_lo >= m_hi:
        raise ValueError("need m_lo < m_hi")
    poly.segments()  # rejects degenerate input
    counts = box_counts(poly, m_lo, m_hi)
    ms = sorted(counts)
    log_scale = np.array([m * np.log(4.0) for m in ms])
    log_count = np.log(np.array([counts[m] for m in ms], dtype=float))
    slope = np.polyfit(log_scale, log_count, 1)[0]
    return Fraction(int(round(float(slope) * 1000)), 1000)


#  Osgood-style arcs of positive area

def hilbert_cell(order: int, d: int) -> Tuple[int, int]:
    """Cell (column, row) of index d on the 2^order grid, Hilbert order."""
    n = 2 ** order
    x = y = 0
    s, t = 1, d
    while s < n:
        rx = 1 & (t // 2)
        ry = 1 & (t ^ rx)
        if ry == 0:
            if rx == 1:
                x, y = s - 1 - x, s - 1 - y
            x, y = y, x
        x += s * rx
        y += s * ry
        t //= 4
        s *= 2
    return x, y


def osgood_shrink(k: int, level: int) -> Fraction:
    """
    Trim from each end of every interval at the given level. The 2^(level+2)
    trims add up to 2^-(k+level+3) along each axis.
    """
    return pow2(-(k + 2 * level + 5))


def _split_intervals(parents: List[Tuple[Fraction, Fraction]], delta: Fraction):
    out = []
    for lo, hi in parents:
        mid = (lo + hi) / 2
        out.append((lo + delta, mid - delta))
        out.append((mid + delta, hi - delta))
    return out


def _bridge(xs, ys, a: Tuple[int, int], b: Tuple[int, int], reach: Fraction) -> Rect:
    (ca, ra), (cb, rb) = a, b
    if ra == rb:
        left, right = min(ca, cb), max(ca, cb)
        return Rect(xs[left][1] - reach, xs[right][0] + reach, ys[ra][0], ys[ra][1])
    low, high = min(ra, rb), max(ra, rb)
    return Rect(xs[ca][0], xs[ca][1], ys[low][1] - reach, ys[high][0] + reach)


def osgood_level(k: int, level: int, intervals) -> ArcChain:
    """
    Members are the cores of the 4^(level+1) cells in Hilbert order, each
    joined to its successor by a bridge rectangle spanning the channel
    between the two cores and reaching 4*delta into both.
    """
    reach = 4 * osgood_shrink(k, level)
    order = level + 1
    cells = [hilbert_cell(order, d) for d in range(4 ** order)]
    chains = []
    for idx, (c, r) in enumerate(cells):
        core = Rect(intervals[c][0], intervals[c][1], intervals[r][0], intervals[r][1])
        links = [core]
        if idx + 1 < len(cells):
            links.append(_bridge(intervals, intervals, (c, r), cells[idx + 1], reach))
        chains.append(WitnessingChain(tuple(links)))
    return ArcChain(tuple(chains))


def osgood_nest(k: int, depth: int) -> List[ArcChain]:
    """
    Descending sequence whose unions keep area at least 1 - 2^-k.

    Coordinates follow a fat Cantor scheme: every level splits each interval
    at its midpoint and trims delta_j = 2^-(k+2j+5) from both ends, so the
    cores at level j form a 2^(j+1) x 2^(j+1) product grid and the nest for
    a smaller depth is a prefix of the nest for a larger one. Refinement
    type is 4 everywhere.
    """
    if k < 1 or depth < 0:
        raise ValueError("need k >= 1 and depth >= 0")
    intervals = [(Fraction(0), Fraction(1))]
    levels = []
    for j in range(depth + 1):
        intervals = _split_intervals(intervals, osgood_shrink(k, j))
        levels.append(osgood_level(k, j, intervals))
    logger.info(f"osgood nest k={k} depth={depth}: {levels[-1].length} chains at the last level")
    return levels


def osgood_area_bound(k: int) -> Fraction:
    return 1 - pow2(-k)


#  Martin-Lof test from complements

@dataclass(frozen=True)
class MLTestLevel:
    n: int
    rects: Tuple[Rect, ...]
    measure: Fraction


def osgood_complement(k: int, depth: int) -> List[Rect]:
    """(0,1)^2 minus the closed union of the level-depth Osgood chain."""
    last = osgood_nest(k, depth)[-1]
    return rect_complement(last.all_rects(), UNIT_SQUARE)


def ml_test(n_max: int, depth: int) -> List[MLTestLevel]:
    """
    Levels U_1 .. U_n_max. U_n is the complement of the level-depth Osgood
    chain for k = n, so it does not depend on n_max. Larger k trims less,
    which makes each arc union contain the previous one and the levels
    descend; measure(U_n) <= 2^-(n+1).

    Raises:
        ChainValidationError: when a level breaks its measure bound
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    levels = []
    for n in range(1, n_max + 1):
        rects = tuple(osgood_complement(n, depth))
        measure = union_area(rects) if rects else Fraction(0)
        if measure > pow2(-n):
            raise ChainValidationError(f"level {n} measure {measure} exceeds 2^-{n}")
        levels.append(MLTestLevel(n, rects, measure))
    return levels


def ml_descending(levels: Sequence[MLTestLevel]) -> bool:
    """U_(n+1) inside U_n, checked as union_area(U_n + U_(n+1)) == area(U_n)."""
    for cur, nxt in zip(levels[:-1], levels[1:]):
        if not nxt.rects:
            continue
        if union_area(cur.rects + nxt.rects) != cur.measure:
            return False
    return True

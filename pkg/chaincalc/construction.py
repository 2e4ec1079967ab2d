# chaincalc/construction.py - Finite-stage priority construction and its verifier
"""
Stage-by-stage simulation of a curve built against a list of adversary arc
sequences. Stage 0 lays down a comb with one pair of boxes per requirement;
at each later stage the highest-priority requirement that can act picks a
small dyadic square R on the curve, avoiding the adversary's arc, and a
scaled comb is grafted inside R. Lower-priority regions are rebuilt inside
the new comb (injury).

The verifier re-checks a stored trace: Hausdorff steps, the Cauchy rate of
the distinguished point, length tails, injury discipline, requirement
satisfaction, connectivity and per-action geometry.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from tqdm import tqdm

from .chains import ArcChain, validate_descending
from .errors import (
    BudgetExhaustedError, ChainValidationError, GadgetFitError, InsufficientDepthError,
    fail, make_report,
)
from .geometry import (
    Piece, Point, Rect, Region, Segment, _uncovered_runs, clip_segment, closure_contained,
    closure_in_union, diameter_sq, dist_sq, largest_power_below,
    merged_trace, pieces_connected, point_dist_sq, pow2, rect_intersects,
    segments_connected, total_length, trace_on_rects,
)

logger = logging.getLogger("chaincalc.construction")

EMAX = 8
COMB_DEPTH = 10
BUDGET = 20000
MAX_SCALE_GAP = 16
NET_OFFSET = 3

CHECK_IDS = ("a_hausdorff", "b_cauchy", "c_length", "d_injury",
             "e_requirement", "f_connectivity", "g_action")


#  Types

@dataclass(frozen=True)
class Adversary:
    """The e-th descending sequence; element i converges at stage reveals[i]."""
    e: int
    chains: Tuple[ArcChain, ...]
    reveals: Tuple[int, ...]
    total: bool = True

    def revealed(self, t: int) -> List[int]:
        return [i for i, r in enumerate(self.reveals) if r <= t]

    def fully_revealed(self, t: int) -> bool:
        return all(r <= t for r in self.reveals)

    def rects(self, i: int) -> List[Rect]:
        return self.chains[i].all_rects()


@dataclass(frozen=True)
class ActionRecord:
    stage: int
    e: int
    i: int
    R: Rect
    l: Segment
    p: Point
    scale: Fraction
    gadget: Tuple[Segment, ...]
    new_regions: Dict[int, Region]

    @property
    def gadget_length(self) -> Fraction:
        return total_length(self.gadget)

    @property
    def block(self) -> Rect:
        """The outermost new region, B for this action."""
        return self.new_regions[min(self.new_regions)].parts[0]


@dataclass(frozen=True)
class StageState:
    t: int
    segments: Tuple[Segment, ...]
    regions: Dict[int, Region]
    p: Point
    v: Segment
    rungs: Dict[int, Segment]
    midpoints: Dict[int, Point]
    action_log: Tuple[ActionRecord, ...] = ()

    @property
    def last_action(self) -> Optional[ActionRecord]:
        if self.action_log and self.action_log[-1].stage == self.t:
            return self.action_log[-1]
        return None


@dataclass
class Trace:
    states: List[StageState]
    adversaries: List[Adversary]
    emax: int
    comb_depth: int
    annotations: List[str] = field(default_factory=list)

    @property
    def T(self) -> int:
        return len(self.states) - 1

    @property
    def actions(self) -> List[ActionRecord]:
        return list(self.states[-1].action_log)

    def adversary(self, e: int) -> Optional[Adversary]:
        for a in self.adversaries:
            if a.e == e:
                return a
        return None


def validate_adversary(adv: Adversary, emax: int) -> Adversary:
    if not 1 <= adv.e < emax:
        raise ChainValidationError(f"adversary index {adv.e} outside 1..{emax - 1}")
    if len(adv.reveals) != len(adv.chains):
        raise ChainValidationError(f"adversary {adv.e}: {len(adv.reveals)} reveal stages for {len(adv.chains)} chains")
    if any(b < a for a, b in zip(adv.reveals, adv.reveals[1:])):
        raise ChainValidationError(f"adversary {adv.e}: reveal stages must be nondecreasing")
    if adv.chains:
        report = validate_descending(adv.chains, enforce_diam=True)
        if not report['valid']:
            raise ChainValidationError(f"adversary {adv.e}: {report['errors'][0]}")
    return adv


#  Stage 0

def init_stage0(emax: int = EMAX, comb_depth: int = COMB_DEPTH) -> StageState:
    """
    The comb C_0: spine {0} x [0, 3/2] and rungs j = 1..comb_depth at height
    3*2^-j reaching 3*2^-(j+1) to either side. S_{0,e} is the pair of boxes
    (+-(2^-(e+1), 2^-e)) x (2^-e, 2^-(e-1)); rung e+1 crosses both.
    """
    if emax < 1:
        raise ValueError("emax must be at least 1")
    if comb_depth < emax + 2:
        raise ValueError("comb_depth must be at least emax + 2")
    zero = Fraction(0)
    spine = Segment(Point(zero, zero), Point(zero, Fraction(3, 2)))
    rungs_all = {}
    for j in range(1, comb_depth + 1):
        half = 3 * pow2(-j - 1)
        y = 3 * pow2(-j)
        rungs_all[j] = Segment(Point(-half, y), Point(half, y))
    regions = {}
    rungs = {}
    midpoints = {}
    for e in range(1, emax + 1):
        lo, hi = pow2(-e - 1), pow2(-e)
        ylo, yhi = pow2(-e), pow2(-e + 1)
        regions[e] = Region.of(Rect(-hi, -lo, ylo, yhi), Rect(lo, hi, ylo, yhi))
        rungs[e] = rungs_all[e + 1]
        midpoints[e] = rungs_all[e + 1].midpoint
    segments = (spine,) + tuple(rungs_all[j] for j in range(1, comb_depth + 1))
    return StageState(0, segments, regions, Point(zero, zero), spine, rungs, midpoints)


#  Scanning for an action

def requirement_satisfied(state: StageState, adv: Adversary, t: int) -> bool:
    """Some converged element's union already misses S_{t,e+1}."""
    target = state.regions.get(adv.e + 1)
    if target is None:
        return False
    for j in adv.revealed(t):
        if not any(rect_intersects(part, r) for part in target.parts for r in adv.rects(j)):
            return True
    return False


def _open_runs(piece: Piece, blockers: Sequence[Rect]) -> List[Tuple[Fraction, Fraction]]:
    """Open stretches of the piece missed by the closures of blockers."""
    spans = []
    for r in blockers:
        if piece.horizontal:
            if r.ylo <= piece.fixed <= r.yhi:
                spans.append((r.xlo, r.xhi))
        elif r.xlo <= piece.fixed <= r.xhi:
            spans.append((r.ylo, r.yhi))
    return _uncovered_runs(piece.lo, piece.hi, spans)


def _grid_between(lo: Fraction, hi: Fraction, step: Fraction) -> range:
    """Integers n with lo < n*step < hi."""
    return range(math.floor(lo / step) + 1, math.ceil(hi / step))


def _squares_on_run(part: Rect, horizontal: bool, fixed: Fraction,
                    run: Tuple[Fraction, Fraction], side: Fraction) -> Iterator[Rect]:
    """
    Dyadic squares of the given side on the half-side grid whose closure
    sits in part and whose open interior meets the run on the line.
    Yields in (xlo, ylo) order.
    """
    half = side / 2
    if horizontal:
        a_lo, a_hi, c_lo, c_hi = part.xlo, part.xhi, part.ylo, part.yhi
    else:
        a_lo, a_hi, c_lo, c_hi = part.ylo, part.yhi, part.xlo, part.xhi
    across = [n * half for n in _grid_between(fixed - side, fixed, half)
              if c_lo < n * half and n * half + side < c_hi]
    if not across:
        return
    start = max(math.floor(a_lo / half) + 1, math.floor((run[0] - side) / half) + 1)
    stop = min(math.ceil((a_hi - side) / half), math.ceil(run[1] / half))
    if horizontal:
        for n in range(start, stop):
            for c in across:
                yield Rect(n * half, n * half + side, c, c + side)
    else:
        for c in across:
            for n in range(start, stop):
                yield Rect(c, c + side, n * half, n * half + side)


def candidate_squares(state: StageState, region: Region, blockers: Sequence[Rect],
                      m: int) -> Iterator[Rect]:
    """Squares of side 2^-m meeting C_t off the blockers, in canonical order."""
    side = pow2(-m)
    streams = []
    for part in region.parts:
        for seg in state.segments:
            piece = clip_segment(seg, part)
            if piece is None or piece.degenerate:
                continue
            for run in _open_runs(piece, blockers):
                streams.append(_squares_on_run(part, piece.horizontal, piece.fixed, run, side))
    last = None
    for r in heapq.merge(*streams, key=lambda r: (r.xlo, r.ylo)):
        if r != last:
            yield r
            last = r


def action_conditions(state: StageState, adv: Adversary, i: int, R: Rect) -> Dict[str, bool]:
    """The six conditions for R_e to act through element i and rectangle R."""
    t = state.t
    region = state.regions[adv.e]
    trace = merged_trace(state.segments, R)
    return {
        "unsatisfied": not requirement_satisfied(state, adv, t),
        "revealed": adv.reveals[i] <= t,
        "inside_region": any(closure_contained(R, part) for part in region.parts),
        "single_segment": len(trace) == 1 and not trace[0].degenerate,
        "avoids_arc": not any(rect_intersects(R, r) for r in adv.rects(i)),
        "small": diameter_sq(R) < pow2(-2 * t),
    }


def scan_action(state: StageState, adversaries: Sequence[Adversary], budget: int = BUDGET,
                max_scale_gap: int = MAX_SCALE_GAP) -> Optional[Tuple[int, int, Rect]]:
    """
    Least (e, i, R) for which requirement e may act at stage t+1.

    R ranges over dyadic squares of side 2^-m, m = t+1 .. t+max_scale_gap,
    with corners on the 2^-(m+1) grid, ordered by m and then by corner.
    At most `budget` squares are examined per (e, i).

    The scan stops at the first (e, i) that runs out of budget; no weaker
    pair acts in that stage.

    Returns:
        (e, i, R) or None when no enumerated square qualifies

    Raises:
        BudgetExhaustedError: some (e, i) ran out of budget before a decision
    """
    t = state.t
    for adv in sorted(adversaries, key=lambda a: a.e):
        if adv.e not in state.regions or adv.e + 1 not in state.regions:
            continue
        if requirement_satisfied(state, adv, t):
            continue
        region = state.regions[adv.e]
        for i in adv.revealed(t):
            blockers = adv.rects(i)
            examined = 0
            for m in range(t + 1, t + max_scale_gap + 1):
                for R in candidate_squares(state, region, blockers, m):
                    if examined >= budget:
                        break
                    examined += 1
                    if all(action_conditions(state, adv, i, R).values()):
                        logger.debug(f"stage {t + 1}: e={adv.e} i={i} after {examined} squares")
                        return adv.e, i, R
                if examined >= budget:
                    raise BudgetExhaustedError(exhausted=[(adv.e, i)])
    return None


#  Grafting a comb into R

@dataclass(frozen=True)
class _Frame:
    """Local coordinates at p: u runs along l, w points to the gadget side."""
    origin: Point
    horizontal: bool
    sign: int

    def point(self, u: Fraction, w: Fraction) -> Point:
        if self.horizontal:
            return Point(self.origin.x + u, self.origin.y + self.sign * w)
        return Point(self.origin.x + self.sign * w, self.origin.y + u)

    def segment(self, u0, w0, u1, w1) -> Segment:
        return Segment(self.point(u0, w0), self.point(u1, w1))

    def box(self, u0, u1, w0, w1) -> Rect:
        a, b = self.point(u0, w0), self.point(u1, w1)
        return Rect(min(a.x, b.x), max(a.x, b.x), min(a.y, b.y), max(a.y, b.y))


def _gadget_frame(R: Rect, l: Piece, p: Point) -> Tuple[_Frame, Fraction, Fraction, Fraction]:
    """Frame plus clearances (along, gadget side, far side) inside R."""
    if l.horizontal:
        along = min(p.x - R.xlo, R.xhi - p.x)
        up, down = R.yhi - p.y, p.y - R.ylo
        sign = 1 if up >= down else -1
        near, far = (up, down) if sign > 0 else (down, up)
    else:
        along = min(p.y - R.ylo, R.yhi - p.y)
        left, right = p.x - R.xlo, R.xhi - p.x
        sign = -1 if left >= right else 1
        near, far = (left, right) if sign < 0 else (right, left)
    return _Frame(p, l.horizontal, sign), along, near, far


def gadget_scale(R: Rect, l: Piece, p: Point, t: int) -> Fraction:
    """
    Largest power of two lam with lam < along clearance, 2*lam < gadget-side
    clearance, lam < far clearance and lam <= 2^-(t+3).
    """
    _, along, near, far = _gadget_frame(R, l, p)
    if min(along, near, far) <= 0:
        raise GadgetFitError()
    return min(largest_power_below(along), largest_power_below(near / 2),
               largest_power_below(far), pow2(-(t + 3)))


def apply_action(state: StageState, action: Tuple[int, int, Rect], emax: int) -> StageState:
    """
    Graft a comb at the midpoint of l = closure(R & C_t).

    Spine: w in [0, 3/2 lam]. Rung r = 1 .. emax-e: w = 3*2^-r lam,
    u in +-3*2^-(r+1) lam, serving requirement e+r. New region for e+r:
    u in +-2^(1-r) lam, w in (-2^(1-r) lam, 2^(2-r) lam).

    Raises:
        GadgetFitError: when the gadget cannot be placed inside R
    """
    e, i, R = action
    t = state.t
    trace = merged_trace(state.segments, R)
    if len(trace) != 1 or trace[0].degenerate:
        raise GadgetFitError("R does not meet C_t in one segment")
    piece = trace[0]
    l = Segment(Point(piece.lo, piece.fixed) if piece.horizontal else Point(piece.fixed, piece.lo),
                Point(piece.hi, piece.fixed) if piece.horizontal else Point(piece.fixed, piece.hi))
    p = l.midpoint
    frame, _, _, _ = _gadget_frame(R, piece, p)
    lam = gadget_scale(R, piece, p, t)
    zero = Fraction(0)

    spine = frame.segment(zero, zero, zero, Fraction(3, 2) * lam)
    gadget = [spine]
    rungs = dict(state.rungs)
    midpoints = dict(state.midpoints)
    regions = dict(state.regions)
    new_regions = {}
    for r in range(1, emax - e + 1):
        w = 3 * pow2(-r) * lam
        reach = 3 * pow2(-r - 1) * lam
        rung = frame.segment(-reach, w, reach, w)
        gadget.append(rung)
        rungs[e + r] = rung
        midpoints[e + r] = frame.point(zero, w)
        size = pow2(1 - r) * lam
        new_regions[e + r] = Region.of(frame.box(-size, size, -size, 2 * size))
    regions.update(new_regions)

    if new_regions and not all(closure_contained(part, R) for part in new_regions[e + 1].parts):
        raise GadgetFitError()
    record = ActionRecord(t + 1, e, i, R, l, p, lam, tuple(gadget), new_regions)
    logger.info(f"stage {t + 1}: R_{e} acts via element {i}, scale {lam}")
    return StageState(
        t=t + 1,
        segments=state.segments + tuple(gadget),
        regions=regions,
        p=p,
        v=spine,
        rungs=rungs,
        midpoints=midpoints,
        action_log=state.action_log + (record,),
    )


def carry_over(state: StageState) -> StageState:
    return replace(state, t=state.t + 1)


def run_construction(adversaries: Sequence[Adversary], stages: int, emax: int = EMAX,
                     comb_depth: int = COMB_DEPTH, budget: int = BUDGET,
                     max_scale_gap: int = MAX_SCALE_GAP, progress: bool = False) -> Trace:
    """
    Stages 1..T from the Stage-0 comb. A stage with no qualifying action
    carries the state over; budget exhaustion is noted on the trace.
    """
    advs = [validate_adversary(a, emax) for a in adversaries]
    if len({a.e for a in advs}) != len(advs):
        raise ChainValidationError("duplicate adversary index")
    state = init_stage0(emax, comb_depth)
    trace = Trace([state], advs, emax, comb_depth)
    for _ in tqdm(range(stages), desc="stages", disable=not progress):
        try:
            action = scan_action(state, advs, budget, max_scale_gap)
        except BudgetExhaustedError as e:
            note = f"stage {state.t + 1}: budget exhausted for {e.exhausted}"
            logger.warning(note)
            trace.annotations.append(note)
            action = None
        state = apply_action(state, action, emax) if action else carry_over(state)
        trace.states.append(state)
    logger.info(f"construction finished: {len(trace.actions)} actions in {stages} stages")
    return trace


#  Nets and lengths

def _samples(seg: Segment, spacing: Fraction) -> List[Point]:
    n = max(1, math.ceil(seg.length / spacing))
    step = seg.length / n
    return [seg.point_at(seg.lo + step * i) for i in range(n + 1)]


def segment_net(segments: Sequence[Segment], k: int) -> List[Point]:
    spacing = pow2(-(k + 2))
    return sorted({p for s in segments for p in _samples(s, spacing)}, key=lambda p: (p.x, p.y))


def net_error_sq(segments: Sequence[Segment], k: int) -> Fraction:
    """Squared upper bound on d_H(segment_net(segments, k), union of segments)."""
    spacing = pow2(-(k + 2))
    worst = Fraction(0)
    for s in segments:
        half_gap = s.length / max(1, math.ceil(s.length / spacing)) / 2
        worst = max(worst, half_gap * half_gap)
    return worst


def compact_net(trace: Trace, t: int, k: int) -> List[Point]:
    """
    Finite rational set within 2^-k of C_t in the Hausdorff metric: every
    segment sampled at spacing 2^-(k+2), endpoints included.
    """
    if not 0 <= t <= trace.T:
        raise ValueError(f"stage {t} outside 0..{trace.T}")
    segments = trace.states[t].segments
    net = segment_net(segments, k)
    if net_error_sq(segments, k) >= pow2(-2 * k):
        raise ChainValidationError(f"net at stage {t} misses resolution {k}")
    return net


def curve_length(state: StageState) -> Fraction:
    return total_length(state.segments)


def curve_length_bounds(trace: Trace, t: int) -> Tuple[Fraction, Fraction]:
    """Rational interval [len(C_t), len(C_t) + 2^-(t-3)] holding every later length."""
    base = curve_length(trace.states[t])
    return base, base + pow2(3 - t)


def step_hausdorff_sq(before: StageState, after: StageState, k: int) -> Fraction:
    """
    max over net points of the new segments of the squared distance to C_t.
    C_t is contained in C_(t+1), so this bounds d_H(C_t, C_(t+1)) up to
    the net spacing.
    """
    old = set(before.segments)
    fresh = [s for s in after.segments if s not in old]
    if not fresh:
        return Fraction(0)
    worst = Fraction(0)
    for q in segment_net(fresh, k):
        worst = max(worst, min(dist_sq(q, s) for s in before.segments))
    return worst


#  Verification

def _check(report: dict, check_id: str, message: str) -> None:
    fail(report, f"{check_id}: {message}")
    failed = report['stats'].setdefault('failed_checks', [])
    if check_id not in failed:
        failed.append(check_id)


def _check_hausdorff(trace: Trace, report: dict, net_offset: int) -> None:
    steps = []
    for t in range(trace.T):
        before, after = trace.states[t], trace.states[t + 1]
        k = t + net_offset
        worst = step_hausdorff_sq(before, after, k)
        steps.append(worst)
        slack = pow2(-t) - pow2(-(k + 3))
        if worst >= slack * slack:
            _check(report, "a_hausdorff", f"d_H(C_{t}, C_{t + 1}) not below 2^-{t}")
    report['stats']['hausdorff_sq'] = steps


def _check_cauchy(trace: Trace, report: dict) -> None:
    actions = trace.actions
    for n, a in enumerate(actions):
        if any(b.e <= a.e for b in actions[n + 1:]):
            continue
        t0 = a.stage - 1
        bound = pow2(-2 * t0)
        for state in trace.states[a.stage:]:
            if point_dist_sq(state.p, a.p) >= bound:
                _check(report, "b_cauchy", f"p_{state.t} drifts from p_{a.stage} by 2^-{t0} or more")
                break


def _check_length(trace: Trace, report: dict) -> None:
    final = curve_length(trace.states[-1])
    for t, state in enumerate(trace.states):
        if final - curve_length(state) > pow2(3 - t):
            _check(report, "c_length", f"length gained after stage {t} exceeds 2^{3 - t}")
    for a in trace.actions:
        if a.gadget_length > pow2(3 - a.stage):
            _check(report, "c_length", f"gadget at stage {a.stage} longer than 2^{3 - a.stage}")
    report['stats']['length'] = final


def _check_injury(trace: Trace, report: dict) -> None:
    actions = trace.actions
    for e in sorted({a.e for a in actions}):
        last_higher = max((a.stage for a in actions if a.e < e), default=0)
        count = sum(1 for a in actions if a.e == e and a.stage > last_higher)
        if count > 1:
            _check(report, "d_injury", f"R_{e} acts {count} times after stage {last_higher}")


def _check_requirements(trace: Trace, report: dict) -> None:
    # V is open, so V meets closure(S) exactly when it meets S
    final = trace.states[-1]
    acted = {a.e for a in trace.actions}
    for adv in trace.adversaries:
        if adv.e not in acted or not adv.total or not adv.fully_revealed(trace.T) or adv.e + 1 not in final.regions:
            continue
        if not requirement_satisfied(final, adv, trace.T):
            _check(report, "e_requirement", f"every element of sequence {adv.e} meets S_{adv.e + 1}")


def _check_connectivity(trace: Trace, report: dict) -> None:
    previous = None
    for state in trace.states:
        if state.segments != previous and not segments_connected(state.segments):
            _check(report, "f_connectivity", f"C_{state.t} is not connected")
        previous = state.segments
    for a in trace.actions:
        pieces = trace_on_rects(trace.states[a.stage].segments, [a.block])
        if not pieces_connected(pieces):
            _check(report, "f_connectivity", f"block of stage {a.stage} meets C_{a.stage} in pieces")


def region_clash(regions: Dict[int, Region]) -> Optional[Tuple[int, int]]:
    """
    First pair (e1, e2), e1 < e2, whose regions overlap without the closure of
    every part of S_e2 lying in a part of S_e1. Regions form a nested family:
    any two are disjoint or the weaker sits inside the stronger.
    """
    keys = sorted(regions)
    for n, e1 in enumerate(keys):
        outer = regions[e1].parts
        for e2 in keys[n + 1:]:
            inner = regions[e2].parts
            if not any(rect_intersects(a, b) for a in outer for b in inner):
                continue
            if not all(any(closure_contained(b, a) for a in outer) for b in inner):
                return e1, e2
    return None


def _check_actions(trace: Trace, report: dict) -> None:
    previous = None
    for state in trace.states:
        if state.regions != previous:
            clash = region_clash(state.regions)
            if clash is not None:
                _check(report, "g_action", f"stage {state.t}: S_{clash[0]} and S_{clash[1]} overlap without nesting")
        previous = state.regions
    for a in trace.actions:
        t = a.stage - 1
        if not 0 <= t < trace.T:
            _check(report, "g_action", f"action stage {a.stage} outside the trace")
            continue
        where = f"stage {a.stage}"
        pieces = merged_trace(trace.states[t].segments, a.R)
        if len(pieces) != 1 or pieces[0].degenerate:
            _check(report, "g_action", f"{where}: R meets C_{t} in {len(pieces)} pieces")
        if diameter_sq(a.R) >= pow2(-2 * t):
            _check(report, "g_action", f"{where}: diam(R) not below 2^-{t}")
        if a.p != a.l.midpoint:
            _check(report, "g_action", f"{where}: p is not the midpoint of l")
        adv = trace.adversary(a.e)
        if adv is not None and a.i < len(adv.chains) and any(rect_intersects(a.R, r) for r in adv.rects(a.i)):
            _check(report, "g_action", f"{where}: R meets element {a.i} of sequence {a.e}")
        first = a.new_regions.get(a.e + 1)
        if first is not None and not all(closure_contained(part, a.R) for part in first.parts):
            _check(report, "g_action", f"{where}: S_{a.e + 1} not inside R")
        for r, rung in enumerate(a.gadget[1:], start=1):
            if rung.length >= pow2(-t - r - 1):
                _check(report, "g_action", f"{where}: rung {r} too long")


def verify_trace(trace: Trace, net_offset: int = NET_OFFSET) -> dict:
    """
    Re-check a stored trace. Each failure is prefixed with its check id
    from CHECK_IDS; stats['failed_checks'] lists the ids that failed.
    """
    report = make_report()
    report['stats'].update({'stages': trace.T, 'actions': len(trace.actions), 'failed_checks': []})
    _check_hausdorff(trace, report, net_offset)
    _check_cauchy(trace, report)
    _check_length(trace, report)
    _check_injury(trace, report)
    _check_requirements(trace, report)
    _check_connectivity(trace, report)
    _check_actions(trace, report)
    report['stats']['checks'] = {c: c not in report['stats']['failed_checks'] for c in CHECK_IDS}
    for note in trace.annotations:
        report['warnings'].append(note)
    level = logging.INFO if report['valid'] else logging.WARNING
    logger.log(level, f"trace verification: {len(report['errors'])} errors over {trace.T} stages")
    return report


#  Local connectivity witnesses

WITNESS_CASES = (5, 3, 1, 2, 4)


@dataclass(frozen=True)
class Witness:
    """Connected neighbourhood V of q inside U, with the case that produced it."""
    case: int
    t0: int
    e: int
    F0: Rect
    parts: Tuple[Rect, ...]

    def contains_point(self, q: Point) -> bool:
        return any(r.contains_point(q) for r in self.parts)


def _piece_on(piece: Piece, seg: Segment) -> bool:
    return (piece.horizontal == seg.horizontal and piece.fixed == seg.fixed
            and seg.lo <= piece.lo and piece.hi <= seg.hi)


def _inside_region(rect: Rect, region: Optional[Region]) -> bool:
    return region is not None and any(closure_contained(rect, part) for part in region.parts)


def _overlap(a: Rect, b: Rect) -> Optional[Rect]:
    if not rect_intersects(a, b):
        return None
    return Rect(max(a.xlo, b.xlo), min(a.xhi, b.xhi), max(a.ylo, b.ylo), min(a.yhi, b.yhi))


def _witness_radius(q: Point, U: Region) -> Fraction:
    """Largest power of two eps with the eps-square around q inside U."""
    parts = [r for r in U.parts if r.contains_point(q)]
    if not parts:
        raise ChainValidationError("point lies outside the neighbourhood")
    r = parts[0]
    gap = min(q.x - r.xlo, r.xhi - q.x, q.y - r.ylo, r.yhi - q.y)
    eps = largest_power_below(gap)
    return eps * 2 if eps * 2 <= gap else eps


def _squares_around(q: Point, side: Fraction) -> List[Rect]:
    half = side / 2
    xs = _grid_between(q.x - side, q.x, half)
    ys = _grid_between(q.y - side, q.y, half)
    return [Rect(n * half, n * half + side, k * half, k * half + side) for n in xs for k in ys]


def _case_holds(case: int, trace: Trace, state: StageState, e: int, F0: Rect,
                pieces: List[Piece]) -> bool:
    t0 = state.t
    near = pow2(-2 * t0)
    region = state.regions.get(e)
    rung = state.rungs.get(e)
    if case == 5:
        return _inside_region(F0, region) and any(
            a.e == e and a.stage <= t0 + 1 and F0.contains_point(a.p) for a in trace.actions)
    if case == 3:
        q_e = state.midpoints.get(e)
        return q_e is not None and F0.contains_point(q_e) and _inside_region(F0, region)
    if case == 1:
        return (rung is not None and all(_piece_on(pc, rung) for pc in pieces)
                and dist_sq(F0, state.v) > near and _inside_region(F0, region))
    if case == 2:
        return (rung is not None and all(_piece_on(pc, state.v) for pc in pieces)
                and dist_sq(F0, rung) > near and _inside_region(F0, region))
    nxt = state.regions.get(e + 1)
    nxt_rung = state.rungs.get(e + 1)
    if region is None or nxt is None or rung is None or nxt_rung is None:
        return False
    if not all(_piece_on(pc, state.v) for pc in pieces):
        return False
    shared = []
    for a in region.parts:
        for b in nxt.parts:
            both = _overlap(a, b)
            inside = _overlap(both, F0) if both is not None else None
            if inside is not None:
                shared.append(inside)
    return (bool(trace_on_rects(state.segments, shared))
            and closure_in_union(F0, list(region.parts) + list(nxt.parts))
            and dist_sq(F0, rung) > near and dist_sq(F0, nxt_rung) > near)


def _witness_parts(case: int, trace: Trace, t0: int, e: int, F0: Rect) -> List[Rect]:
    parts = [F0]
    if case == 5:
        acted = [a.stage for a in trace.actions if a.e == e and a.stage <= t0 + 1 and F0.contains_point(a.p)]
        state = trace.states[max(t0, acted[-1])]
        bound = pow2(-2 * t0)
        for e2, region in sorted(state.regions.items()):
            if e2 > e:
                parts += [r for r in region.parts if diameter_sq(r) < bound]
        return parts
    for a in trace.actions:
        if a.stage >= t0 + 1 and rect_intersects(a.block, F0):
            parts.append(a.block)
    return parts


def local_connectivity_witness(trace: Trace, q: Point, U: Region,
                               max_scale_gap: int = 12) -> Witness:
    """
    A connected open V with q in V inside U, with V & C_T connected.

    Searches the earliest stage t0 with q on C_t0 and 2^-(t0-1) below the
    radius of U at q, then dyadic squares F0 around q from the finest scale,
    then requirement indices, trying the cases in order 5, 3, 1, 2, 4.

    Raises:
        ChainValidationError: q is not on C_T or not in U
        InsufficientDepthError: no witness within the trace's stages
    """
    final = trace.states[-1]
    if not any(s.contains_point(q) for s in final.segments):
        raise ChainValidationError("point is not on the final curve")
    eps = _witness_radius(q, U)
    for t0 in range(trace.T + 1):
        state = trace.states[t0]
        reach = pow2(1 - t0)
        if eps <= reach or not any(s.contains_point(q) for s in state.segments):
            continue
        limit = (eps - reach) ** 2
        for m in range(t0 + max_scale_gap, t0, -1):
            for F0 in _squares_around(q, pow2(-m)):
                if diameter_sq(F0) >= limit:
                    continue
                pieces = trace_on_rects(state.segments, [F0])
                for e in sorted(state.regions):
                    for case in WITNESS_CASES:
                        if not _case_holds(case, trace, state, e, F0, pieces):
                            continue
                        parts = _witness_parts(case, trace, t0, e, F0)
                        if not all(closure_in_union(r, U.parts) for r in parts):
                            continue
                        if not pieces_connected(trace_on_rects(final.segments, parts)):
                            continue
                        logger.debug(f"witness for {q}: case {case}, t0={t0}, e={e}")
                        return Witness(case, t0, e, F0, tuple(parts))
    raise InsufficientDepthError("insufficient stage depth")

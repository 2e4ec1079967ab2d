# chaincalc/fixtures.py - Bundled adversaries and corrupted traces for checking the verifier
"""
A small three-requirement scenario that exercises the construction:

- sequence 1 nests a vertical arc at x = -3/16 and converges from stage 3,
- sequence 2 nests a vertical arc at x = -3/32 and converges from stage 0,
- sequence 3 is a single coarse chain that is never total.

trace_mutations() corrupts a verified trace in ten ways; each mutation
names the check that must catch it.
"""

from __future__ import annotations

import logging
from dataclasses import replace
from fractions import Fraction
from typing import Dict, List, Tuple

from .arcs import segment_nest
from .chains import ArcChain, WitnessingChain
from .construction import EMAX, COMB_DEPTH, ActionRecord, Adversary, Trace, run_construction
from .geometry import Point, Rect, Region, Segment

logger = logging.getLogger("chaincalc.fixtures")

BUNDLED_STAGES = 12
NEST_DEPTH = 4


def bundled_adversaries() -> List[Adversary]:
    F = Fraction
    first = segment_nest(Point(F(-3, 16), F(9, 32)), Point(F(-3, 16), F(15, 32)), NEST_DEPTH)
    second = segment_nest(Point(F(-3, 32), F(5, 32)), Point(F(-3, 32), F(7, 32)), NEST_DEPTH)
    coarse = ArcChain((WitnessingChain((Rect(F(-1, 4), F(1, 4), F(0), F(1, 2)),)),))
    return [
        Adversary(1, tuple(first), (3, 4, 5, 6, 7)),
        Adversary(2, tuple(second), (0, 1, 2, 3, 4)),
        Adversary(3, (coarse,), (0,), total=False),
    ]


def bundled_trace(stages: int = BUNDLED_STAGES, progress: bool = False) -> Trace:
    return run_construction(bundled_adversaries(), stages, emax=EMAX,
                            comb_depth=COMB_DEPTH, progress=progress)


#  Mutations

def _copy(trace: Trace, states) -> Trace:
    return Trace(list(states), list(trace.adversaries), trace.emax, trace.comb_depth,
                 list(trace.annotations))


def _swap_action(trace: Trace, old: ActionRecord, new: ActionRecord) -> Trace:
    """Replace an action record and the geometry it put on the curve."""
    moved = dict(zip(old.gadget, new.gadget))
    states = []
    for s in trace.states:
        if s.t >= old.stage:
            regions = dict(s.regions)
            for e, region in old.new_regions.items():
                if regions.get(e) == region:
                    regions[e] = new.new_regions[e]
            s = replace(
                s,
                segments=tuple(moved.get(g, g) for g in s.segments),
                regions=regions,
                action_log=tuple(new if a == old else a for a in s.action_log),
            )
        states.append(s)
    return _copy(trace, states)


def _stretched(seg: Segment, extra: Fraction) -> Segment:
    f = (seg.length + extra) / seg.length
    a, b = seg.a, seg.b
    return Segment(a, Point(a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f))


def _widened(seg: Segment, reach: Fraction) -> Segment:
    m = seg.midpoint
    if seg.horizontal:
        return Segment(Point(m.x - reach, m.y), Point(m.x + reach, m.y))
    return Segment(Point(m.x, m.y - reach), Point(m.x, m.y + reach))


def _translated_regions(regions: Dict[int, Region], dx: Fraction, dy: Fraction) -> Dict[int, Region]:
    return {e: Region(tuple(r.translate(dx, dy) for r in reg.parts)) for e, reg in regions.items()}


def _with_final(trace: Trace, **changes) -> Trace:
    return _copy(trace, trace.states[:-1] + [replace(trace.states[-1], **changes)])


def trace_mutations(trace: Trace) -> Dict[str, Tuple[Trace, str]]:
    """
    Corrupted copies of a trace, keyed by name, each with the id of the
    check expected to reject it. The trace needs an action and two stages.
    """
    if not trace.actions or trace.T < 2:
        raise ValueError("mutations need a trace with an action and at least two stages")
    F = Fraction
    last = trace.actions[-1]
    final = trace.states[-1]
    spine, rung = last.gadget[0], last.gadget[1]
    far = Segment(Point(F(3), F(0)), Point(F(3), F(1)))
    block_e = last.e + 1

    out: Dict[str, Tuple[Trace, str]] = {}
    out["long_gadget"] = (_swap_action(trace, last, replace(
        last, gadget=(_stretched(spine, F(2)),) + last.gadget[1:])), "c_length")
    moved = dict(last.new_regions)
    moved[block_e] = _translated_regions({block_e: moved[block_e]}, F(1), F(0))[block_e]
    out["region_outside_R"] = (_swap_action(trace, last, replace(last, new_regions=moved)), "g_action")
    out["p_shifted"] = (_with_final(trace, p=Point(final.p.x + F(1, 4), final.p.y)), "b_cauchy")
    out["long_rung"] = (_swap_action(trace, last, replace(
        last, gadget=(spine, _widened(rung, F(1, 4))) + last.gadget[2:])), "g_action")
    out["duplicate_action"] = (_with_final(
        trace, action_log=final.action_log + (replace(last, stage=trace.T),)), "d_injury")
    regions = dict(final.regions)
    regions[2] = Region.of(Rect(F(-1, 2), F(1, 2), F(0), F(1)))
    out["requirement_region"] = (_with_final(trace, regions=regions), "e_requirement")
    isolated = Segment(Point(F(2), F(2)), Point(F(2), F(3)))
    out["isolated_segment"] = (_with_final(trace, segments=final.segments + (isolated,)), "f_connectivity")
    out["far_segment"] = (_copy(trace, [s if s.t < 2 else replace(s, segments=s.segments + (far,))
                                        for s in trace.states]), "a_hausdorff")
    shift = F(1, 8)
    out["translated_gadget"] = (_swap_action(trace, last, replace(
        last, gadget=tuple(g.translate(F(0), shift) for g in last.gadget),
        new_regions=_translated_regions(last.new_regions, F(0), shift))), "f_connectivity")
    out["enlarged_R"] = (_swap_action(trace, last, replace(
        last, R=Rect(F(-1), F(1), F(-1), F(1)))), "g_action")
    logger.debug(f"built {len(out)} mutations of a {trace.T}-stage trace")
    return out

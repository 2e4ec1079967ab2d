# chaincalc/chains.py - Witnessing chains, arc chains and typed refinement
"""
Witnessing chains are chains of open rational rectangles; an arc chain is a
sequence of witnessing chains whose unions form a simple chain. A finer
arc chain refines a coarser one with type (s_1, ..., s_k) when it splits
into consecutive blocks of sizes s_j >= 2 whose member closures lie inside
the j-th coarser union.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Set, Tuple

from .errors import ChainValidationError, make_report, fail
from .geometry import (
    Interval, Rect, bounding_rect, closure_in_union, max_corner_dist_sq,
    overlapping_pairs, pow2, rect_intersects,
)

logger = logging.getLogger("chaincalc.chains")


@dataclass(frozen=True)
class WitnessingChain:
    links: Tuple[Rect, ...]

    @classmethod
    def of(cls, *links: Rect) -> "WitnessingChain":
        return cls(tuple(links))

    @property
    def k(self) -> int:
        return len(self.links)

    def bbox(self) -> Rect:
        return bounding_rect(self.links)


@dataclass(frozen=True)
class ArcChain:
    chains: Tuple[WitnessingChain, ...]

    @property
    def length(self) -> int:
        return len(self.chains)

    def union(self, i: int) -> Tuple[Rect, ...]:
        """Rectangles of V_{p,i}."""
        return self.chains[i].links

    def all_rects(self) -> List[Rect]:
        return [r for w in self.chains for r in w.links]


@dataclass(frozen=True)
class RefinementType:
    s: Tuple[int, ...]

    def __post_init__(self):
        if any(v < 2 for v in self.s):
            raise ChainValidationError(f"refinement type {self.s} has a block below 2")

    @property
    def total(self) -> int:
        return sum(self.s)

    def blocks(self) -> List[range]:
        out, start = [], 0
        for v in self.s:
            out.append(range(start, start + v))
            start += v
        return out


@dataclass(frozen=True)
class LabelledArcChain:
    arc: ArcChain
    labels: Tuple[Interval, ...]

    @property
    def length(self) -> int:
        return self.arc.length


#  Validation

def validate_witnessing_chain(links: Sequence[Rect], where: str = "") -> WitnessingChain:
    if not links:
        raise ChainValidationError(f"empty witnessing chain{where}")
    for i in range(len(links) - 1):
        if not rect_intersects(links[i], links[i + 1]):
            raise ChainValidationError(f"not a chain at ({i + 1}){where}")
    return WitnessingChain(tuple(links))


def union_meeting_pairs(chains: Sequence[WitnessingChain]) -> Set[Tuple[int, int]]:
    """Pairs (i < j) of chain indices whose unions V_i, V_j intersect."""
    rects, owner = [], []
    for idx, w in enumerate(chains):
        for r in w.links:
            rects.append(r)
            owner.append(idx)
    pairs = set()
    for a, b in overlapping_pairs(rects):
        i, j = owner[a], owner[b]
        if i != j:
            pairs.add((min(i, j), max(i, j)))
    return pairs


def validate_arc_chain(raw: Sequence) -> ArcChain:
    """
    Validate raw witnessing chains as an arc chain.

    Args:
        raw: Sequence of WitnessingChain or of rectangle sequences

    Returns:
        The validated ArcChain

    Raises:
        ChainValidationError: "not a chain at (i)" or "not simple at (i,j)",
            indices 1-based
    """
    if not raw:
        raise ChainValidationError("empty arc chain")
    chains = []
    for idx, item in enumerate(raw):
        links = item.links if isinstance(item, WitnessingChain) else tuple(item)
        chains.append(validate_witnessing_chain(links, f" of witnessing chain {idx + 1}"))
    pairs = union_meeting_pairs(chains)
    for i in range(len(chains) - 1):
        if (i, i + 1) not in pairs:
            raise ChainValidationError(f"not a chain at ({i + 1})")
    bad = sorted((i, j) for i, j in pairs if j - i >= 2)
    if bad:
        i, j = bad[0]
        raise ChainValidationError(f"not simple at ({i + 1},{j + 1})")
    return ArcChain(tuple(chains))


def chain_diameter_sq(p: ArcChain) -> Fraction:
    """Max squared diameter of the unions V_{p,i}."""
    return max(max_corner_dist_sq(w.links) for w in p.chains)


#  Refinement

def _block_search(n_fine: int, n_coarse: int, fits: Callable[[int, int], bool]) -> Optional[Tuple[int, ...]]:
    """
    Lexicographically least block sizes (each >= 2) splitting n_fine items
    over n_coarse targets, item f allowed in block j iff fits(f, j).
    Backward feasibility sets first, then a greedy forward pass.
    """
    if n_coarse == 0 or n_fine < 2 * n_coarse:
        return None
    feasible: List[Set[int]] = [set() for _ in range(n_coarse + 1)]
    feasible[n_coarse] = {n_fine}
    for j in range(n_coarse - 1, -1, -1):
        targets = feasible[j + 1]
        if not targets:
            return None
        for q in sorted(targets, reverse=True):
            p = q - 1
            while p >= 0 and fits(p, j):
                if q - p >= 2:
                    if p in feasible[j]:
                        break
                    feasible[j].add(p)
                p -= 1
    if 0 not in feasible[0]:
        return None
    sizes, pos = [], 0
    for j in range(n_coarse):
        s = 1
        chosen = None
        while pos + s <= n_fine and fits(pos + s - 1, j):
            if s >= 2 and (pos + s) in feasible[j + 1]:
                chosen = s
                break
            s += 1
        if chosen is None:
            return None
        sizes.append(chosen)
        pos += chosen
    return tuple(sizes)


def _containment(fine: ArcChain, coarse: ArcChain) -> Callable[[int, int], bool]:
    memo: Dict[Tuple[int, int], bool] = {}
    boxes = [w.bbox() for w in coarse.chains]

    def fits(f: int, j: int) -> bool:
        key = (f, j)
        if key not in memo:
            links = fine.chains[f].links
            box = boxes[j]
            target = coarse.chains[j].links
            memo[key] = all(
                rect_intersects(r, box) and closure_in_union(r, target) for r in links)
        return memo[key]

    return fits


def check_refinement(fine: ArcChain, coarse: ArcChain) -> Optional[RefinementType]:
    """
    Find the lexicographically least refinement type of fine over coarse.

    Returns:
        RefinementType, or None when no block decomposition exists
    """
    sizes = _block_search(fine.length, coarse.length, _containment(fine, coarse))
    return RefinementType(sizes) if sizes else None


def certified_containments(fine: ArcChain, coarse: ArcChain, rtype: RefinementType) -> bool:
    """Re-check every closure containment a refinement type certifies."""
    if rtype.total != fine.length or len(rtype.s) != coarse.length:
        return False
    for j, block in enumerate(rtype.blocks()):
        for f in block:
            for r in fine.chains[f].links:
                if not closure_in_union(r, coarse.chains[j].links):
                    return False
    return True


def validate_descending(seq: Sequence[ArcChain], enforce_diam: bool = True) -> dict:
    """
    Check that each arc chain refines its predecessor and, when enforce_diam
    is set, that diam(p_i) < 2^-i for every i.

    Returns:
        Report dict; stats['types'] lists the refinement types found
    """
    report = make_report()
    report['stats'] = {'levels': len(seq), 'types': [], 'diameters_sq': []}
    if not seq:
        return fail(report, "empty sequence")
    for i, p in enumerate(seq):
        d = chain_diameter_sq(p)
        report['stats']['diameters_sq'].append(d)
        if enforce_diam and d >= pow2(-2 * i):
            return fail(report, f"diameter bound fails at {i}")
        if i == 0:
            continue
        rtype = check_refinement(p, seq[i - 1])
        if rtype is None:
            return fail(report, f"refinement fails at step {i}")
        report['stats']['types'].append(rtype.s)
        logger.debug(f"level {i}: {p.length} chains, type blocks {len(rtype.s)}")
    return report


#  Labelled chains

def validate_labels(labels: Sequence[Interval]) -> None:
    if not labels:
        raise ChainValidationError("empty label sequence")
    if any(not iv.closed for iv in labels):
        raise ChainValidationError("labels must be closed intervals")
    if labels[0].lo != 0 or labels[-1].hi != 1:
        raise ChainValidationError("labels must cover [0,1]")
    for i in range(len(labels) - 1):
        if labels[i].hi < labels[i + 1].lo:
            raise ChainValidationError(f"labels not a chain at ({i + 1})")
        if labels[i + 1].lo < labels[i].lo:
            raise ChainValidationError(f"labels out of order at ({i + 1})")
    for i in range(len(labels) - 2):
        if labels[i].hi >= labels[i + 2].lo:
            raise ChainValidationError(f"labels not simple at ({i + 1},{i + 3})")


def make_labelled(arc: ArcChain, labels: Sequence[Interval]) -> LabelledArcChain:
    if len(labels) != arc.length:
        raise ChainValidationError(f"{len(labels)} labels for {arc.length} chains")
    validate_labels(labels)
    return LabelledArcChain(arc, tuple(labels))


def check_labelled_refinement(fine: LabelledArcChain, coarse: LabelledArcChain) -> Optional[RefinementType]:
    """One type certifying both the chain refinement and label containment."""
    spatial = _containment(fine.arc, coarse.arc)

    def fits(f: int, j: int) -> bool:
        a, b = fine.labels[f], coarse.labels[j]
        return b.lo <= a.lo and a.hi <= b.hi and spatial(f, j)

    sizes = _block_search(fine.length, coarse.length, fits)
    return RefinementType(sizes) if sizes else None

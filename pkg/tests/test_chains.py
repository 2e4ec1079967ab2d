import random
from fractions import Fraction as F

import pytest

from chaincalc.chains import (
    ArcChain, RefinementType, WitnessingChain, _block_search, certified_containments,
    chain_diameter_sq, check_labelled_refinement, check_refinement, make_labelled,
    validate_arc_chain, validate_descending, validate_labels, validate_witnessing_chain,
)
from chaincalc.errors import ChainValidationError
from chaincalc.evaluation import label_sequence
from chaincalc.geometry import Interval, closure_contained, pow2

from conftest import R


def closed(lo, hi) -> Interval:
    return Interval(F(lo), F(hi), closed=True)


def test_witnessing_chain_needs_overlaps():
    assert validate_witnessing_chain([R(0, 2, 0, 1), R(1, 3, 0, 1)]).k == 2
    with pytest.raises(ChainValidationError, match=r"not a chain at \(1\)"):
        validate_witnessing_chain([R(0, 1, 0, 1), R(1, 2, 0, 1)])


def test_arc_chain_must_be_simple():
    row = [[R(0, 2, 0, 1)], [R(1, 3, 0, 1)], [R(F(3, 2), 4, 0, 1)]]
    with pytest.raises(ChainValidationError, match=r"not simple at \(1,3\)"):
        validate_arc_chain(row)
    ok = validate_arc_chain([[R(0, 2, 0, 1)], [R(1, 3, 0, 1)], [R(F(5, 2), 4, 0, 1)]])
    assert ok.length == 3


def test_arc_chain_unions_must_meet():
    with pytest.raises(ChainValidationError, match=r"not a chain at \(1\)"):
        validate_arc_chain([[R(0, 1, 0, 1)], [R(2, 3, 0, 1)]])


def test_block_search_prefers_small_leading_blocks():
    assert _block_search(5, 2, lambda f, j: True) == (2, 3)
    assert _block_search(3, 2, lambda f, j: True) is None
    # item 2 only fits block 1
    assert _block_search(6, 2, lambda f, j: not (f == 2 and j == 0)) == (2, 4)


def test_refinement_type_rejects_small_blocks():
    with pytest.raises(ChainValidationError):
        RefinementType((2, 1))
    assert [list(b) for b in RefinementType((2, 3)).blocks()] == [[0, 1], [2, 3, 4]]


def test_segment_nest_refines_with_type_two(unit_segment_nest):
    nest = unit_segment_nest
    report = validate_descending(nest)
    assert report['valid'], report['errors']
    for i, s in enumerate(report['stats']['types'], start=1):
        assert s == (2,) * nest[i - 1].length
    for i, p in enumerate(nest):
        assert chain_diameter_sq(p) == F(10, 16) * pow2(-2 * i)
        if i:
            rtype = check_refinement(p, nest[i - 1])
            assert certified_containments(p, nest[i - 1], rtype)


def test_descending_reports_first_failure(unit_segment_nest):
    nest = unit_segment_nest
    # level 2 still refines level 0, level 1 cannot refine level 2
    report = validate_descending([nest[0], nest[2], nest[1]], enforce_diam=False)
    assert not report['valid']
    assert report['errors'] == ["refinement fails at step 2"]
    assert validate_descending([nest[0], nest[2], nest[1]])['errors'] == ["diameter bound fails at 2"]

    big = ArcChain((WitnessingChain((R(0, 1, 0, 1),)),))
    report = validate_descending([big])
    assert report['errors'] == ["diameter bound fails at 0"]
    assert validate_descending([big], enforce_diam=False)['valid']
    assert validate_descending([])['errors'] == ["empty sequence"]


def test_disjoint_chains_do_not_refine(unit_segment_nest):
    shifted = validate_arc_chain([[r.translate(F(5), F(0)) for r in w.links] for w in unit_segment_nest[1].chains])
    assert check_refinement(shifted, unit_segment_nest[0]) is None


def test_labels_must_form_a_simple_chain_over_unit_interval():
    validate_labels([closed(0, F(1, 2)), closed(F(1, 2), 1)])
    with pytest.raises(ChainValidationError, match="cover"):
        validate_labels([closed(0, F(1, 2)), closed(F(1, 2), F(3, 4))])
    with pytest.raises(ChainValidationError, match="not simple"):
        validate_labels([closed(0, F(1, 2)), closed(F(1, 4), F(3, 4)), closed(F(1, 2), 1)])
    with pytest.raises(ChainValidationError):
        validate_labels([Interval(F(0), F(1))])


def test_labelled_refinement_agrees_with_spatial_type(unit_segment_nest):
    labelled = label_sequence(unit_segment_nest[:4])
    for fine, coarse in zip(labelled[1:], labelled[:-1]):
        assert check_labelled_refinement(fine, coarse) == check_refinement(fine.arc, coarse.arc)
    with pytest.raises(ChainValidationError):
        make_labelled(unit_segment_nest[1], [closed(0, 1)])


def random_refinement(rng: random.Random):
    """A coarse row of overlapping boxes and a fine row cut from it, both shifted at random."""
    dx, dy = F(rng.randint(-64, 64), 32), F(rng.randint(-64, 64), 32)
    n = rng.randint(1, 6)
    coarse = [[R(j - F(1, 4) + dx, j + F(5, 4) + dx, F(-1, 2) + dy, F(1, 2) + dy)] for j in range(n)]
    fine = []
    for j in range(n):
        s = rng.randint(2, 5)
        for i in range(s):
            fine.append([R(j + F(i, s) - F(1, 24) + dx, j + F(i + 1, s) + F(1, 24) + dx,
                           F(-1, 4) + dy, F(1, 4) + dy)])
    return validate_arc_chain(fine), validate_arc_chain(coarse)


def test_random_refinements_are_found_and_certified():
    rng = random.Random(20240917)
    for _ in range(500):
        fine, coarse = random_refinement(rng)
        rtype = check_refinement(fine, coarse)
        assert rtype is not None
        assert len(rtype.s) == coarse.length
        assert all(v >= 2 for v in rtype.s)
        assert rtype.total == fine.length
        assert certified_containments(fine, coarse, rtype)
        for j, block in enumerate(rtype.blocks()):
            (outer,) = coarse.union(j)
            assert all(closure_contained(fine.union(f)[0], outer) for f in block)

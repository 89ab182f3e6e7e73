import itertools
import random
import time

import pytest

from generators import balanced_slice_map
from spdcheck.cosets import Coset, SetExpr, coset_points, spd_decide, ubiquity_decide
from spdcheck.lattice import LatticeSubgroup
from spdcheck.product import (
    DualSliceMap,
    HalfLine,
    StaircaseSet,
    decide_main,
    lift_witness,
    product_scan,
    product_spd_sufficient,
    random_slice_map,
    staircase_check,
)
from spdcheck.trigpoly import Character, evaluate
from spdcheck.verify import ubiquity_scan

span = LatticeSubgroup.from_generators


def mod(n, shift=0):
    return Coset.make((shift,), span([[n]], 1))


def Z(r=1):
    return SetExpr.everything(r)


def test_slice_examples():
    full = DualSliceMap((2,), 1, {(0,): Z(), (1,): Z()})
    assert full.slice((1,)) == Z()
    empty = DualSliceMap((3,), 2)
    assert all(empty.slice(b) == SetExpr.nothing(2) for b in [(0,), (1,), (2,)])
    K = DualSliceMap((2,), 1, {(0,): SetExpr.of([mod(2)]), (1,): SetExpr.of([mod(2, 1)])})
    assert K.slice((1,)) == SetExpr.of([mod(2, 1)])
    with pytest.raises(ValueError):
        K.slice((2,))
    with pytest.raises(ValueError):
        DualSliceMap((2,), 1, {(0,): Z(2)})


def test_membership_and_json():
    K = DualSliceMap((2,), 1, {(0,): SetExpr.of([mod(2)]), (1,): SetExpr.of([mod(2, 1)])})
    assert K(Character((0,), (4,))) and not K(Character((0,), (3,)))
    assert K(Character((1,), (3,))) and not K(Character((1,), (0,)))
    assert DualSliceMap.from_json(K.to_json()).slices == K.slices
    bad = K.to_json()
    bad["slices"].append(bad["slices"][0])
    with pytest.raises(ValueError, match="given twice"):
        DualSliceMap.from_json(bad)


def test_decide_main_examples():
    full = DualSliceMap((2,), 1, {(0,): Z(), (1,): Z()})
    v = decide_main(full)
    assert v.ubiquitous.ubiquitous and v.spd.spd
    K = DualSliceMap((2,), 1, {(0,): SetExpr.of([mod(2)]), (1,): Z()})
    v = decide_main(K)
    assert not v.ubiquitous.ubiquitous and not v.spd.spd
    assert v.ubiquitous.witness == Coset.make((0, 1), span([(2, 0), (0, 2)], 2))
    assert K.coset_disjoint(v.ubiquitous.witness)
    covered = DualSliceMap((2,), 1, {(0,): SetExpr.of([mod(2), mod(2, 1)]), (1,): Z()})
    assert decide_main(covered).spd.spd


def test_product_polynomial_certificate():
    K = DualSliceMap((2,), 1, {(0,): SetExpr.of([mod(2)]), (1,): Z()})
    v = decide_main(K)
    b, m = v.nonzero_at
    assert not evaluate(v.polynomial, Character(b, m)).is_zero()
    for c in (0, 1):
        for n in range(-6, 7):
            if K(Character((c,), (n,))):
                assert evaluate(v.polynomial, Character((c,), (n,))).is_zero()


def test_product_spd_sufficient_examples():
    assert product_spd_sufficient(DualSliceMap((2,), 1, {(0,): Z(), (1,): Z()}))
    assert not product_spd_sufficient(DualSliceMap((2,), 1))
    K = DualSliceMap((2,), 1, {(0,): Z(), (1,): SetExpr.of([mod(2)])})
    assert not product_spd_sufficient(K)
    # one-sided: the failing sufficient condition agrees here with a real failure
    assert not decide_main(K).spd.spd


def test_lift_witness_shape():
    W = lift_witness(DualSliceMap((2, 3), 1), (1, 2), mod(4, 1))
    assert W == Coset.make((1, 2, 1), span([(2, 0, 0), (0, 3, 0), (0, 0, 4)], 3))


@pytest.mark.parametrize("inv", [(2,), (3,), (2, 2)])
def test_random_consistency(inv):
    rng = random.Random(sum(inv) * 31)
    for _ in range(25):
        K = random_slice_map(rng, inv)
        v = decide_main(K)
        per = [ubiquity_decide(s).ubiquitous for s in K.slices.values()]
        assert v.ubiquitous.ubiquitous == all(per) == v.spd.spd
        assert v.spd.spd == all(spd_decide(s).spd for s in K.slices.values())
        if product_spd_sufficient(K):
            assert v.spd.spd
        if not v.ubiquitous.ubiquitous:
            W = v.ubiquitous.witness
            assert K.coset_disjoint(W)
            assert all(t in W.subgroup for t in K.lattice_torsion())
            # membership over the witness residue system, checked point by point
            for x in itertools.islice(coset_points(W), 60):
                assert not K(Character(x[:len(inv)], x[len(inv):]))
            b, m = v.nonzero_at
            assert not evaluate(v.polynomial, Character(b, m)).is_zero()


@pytest.mark.parametrize("inv", [(2,), (3,)])
def test_balanced_against_scan(inv):
    rng = random.Random(7 + sum(inv))
    for i in range(10):
        K = balanced_slice_map(rng, inv, ubiquitous=i % 2 == 0)
        v = decide_main(K, with_polynomial=False)
        assert v.ubiquitous.ubiquitous == (i % 2 == 0)
        scan = product_scan(K, 8)
        assert scan.refuted != v.ubiquitous.ubiquitous


def test_fibre_and_residues():
    K = DualSliceMap((2,), 1)
    C = Coset.make((1, 3), span([(2, 0), (0, 4)], 2))
    assert K.fibre(C, (1,)) == mod(4, 3)
    assert K.fibre(C, (0,)) is None
    graph = Coset.make((0, 0), span([(2, 0), (1, 1)], 2))
    assert K.fibre(graph, (1,)) == mod(2, 1)
    assert K.fibre(graph, (0,)) == mod(2, 0)


def test_staircase_examples():
    S = StaircaseSet()
    assert S(Character((), (3, -3))) and not S(Character((), (0, 0))) and not S(Character((), (2, 3)))
    assert StaircaseSet(swapped=True)(Character((), (-3, 3)))
    rep = staircase_check(1, 6, 100)
    assert rep.slice_spd == {-1: False, 0: False, 1: False}
    assert rep.k1_empty and rep.scan.no_counterexample and rep.ok
    assert rep.to_json()["scan"]["bounds"] == {"maxIndex": 6, "radius": 100}
    assert ubiquity_scan(HalfLine(0), 1, max_index=6, radius=100).no_counterexample
    with pytest.raises(ValueError):
        staircase_check(0)


def test_staircase_slices_are_finite():
    K = StaircaseSet()
    for n in range(-5, 6):
        s = K.first_axis_slice(n)
        pts = {m for m in range(-10, 11) if s.contains((m,))}
        assert pts == {m for m in range(-10, 11) if K(Character((), (n, m)))}
        assert not spd_decide(s).spd


def test_staircase_timing():
    t = time.perf_counter()
    assert staircase_check(20, 6, 200).ok
    assert time.perf_counter() - t < 30

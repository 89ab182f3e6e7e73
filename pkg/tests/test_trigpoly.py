import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from generators import random_lattice, random_poly, random_proper_union
from oracles import box, float_value
from spdcheck.cosets import Coset, CosetUnion, SetExpr, coset_points
from spdcheck.cyclotomic import CycloNumber
from spdcheck.lattice import LatticeSubgroup
from spdcheck.trigpoly import (
    Character,
    DegenerateCosetWarning,
    GroupPoint,
    TrigPoly,
    annihilator,
    evaluate,
    evaluate_float,
    finite_indicator,
    non_spd_witness,
    set_witness_polynomial,
    vanish_on_coset,
    vanish_outside_coset,
    zero_set,
)

span = LatticeSubgroup.from_generators
F = Fraction


def torus(*pairs, r=1):
    return TrigPoly.torus({(p if isinstance(p, tuple) else (p,)): c for p, c in pairs}, r)


def test_eval_examples():
    one = TrigPoly.constant(1, (), 1)
    assert all(evaluate(one, (m,)) == 1 for m in range(-3, 4))
    p = torus((F(1, 2), 1), (0, 1))
    assert evaluate(p, (1,)).is_zero()
    assert evaluate(p, (2,)) == 2
    q = torus((F(1, 3), 1), (0, 1))
    assert evaluate(q, (3,)) == 2
    v = evaluate(q, (1,))
    assert not v.is_zero()
    assert abs(complex(v) - evaluate_float(q, (1,))) < 1e-12


def test_eval_on_product_group():
    # point (1, 1/4) in Z/2 x T; character (1, 1) gives (-1) * i
    p = TrigPoly((2,), 1, [(GroupPoint((1,), (F(1, 4),)), 1)])
    assert evaluate(p, Character((1,), (1,))) == CycloNumber.gaussian(0, -1)
    with pytest.raises(ValueError):
        evaluate(p, Character((), (1,)))


def test_zero_set_examples():
    assert zero_set(torus((F(1, 2), 1), (0, -1))) == CosetUnion([Coset.make((0,), span([[2]], 1))])
    assert zero_set(torus((F(1, 2), 1), (0, 1))) == CosetUnion([Coset.make((1,), span([[2]], 1))])
    p = torus((0, 1), (F(1, 3), 1), (F(2, 3), 1))
    three = span([[3]], 1)
    assert zero_set(p) == CosetUnion([Coset.make((1,), three), Coset.make((2,), three)])


def test_zero_set_rejects_finite_part_and_large_box():
    p = TrigPoly((2,), 1, [(GroupPoint((1,), (0,)), 1)])
    with pytest.raises(ValueError):
        zero_set(p)
    big = torus(((F(1, 1000), F(1, 999)), 1), r=2)
    with pytest.raises(ValueError):
        zero_set(big, box_cap=10**4)


def test_vanish_on_coset_examples():
    p = vanish_on_coset((1,), span([[2]], 1))
    assert [evaluate(p, (m,)) for m in range(4)] == [4, 0, 4, 0]
    with pytest.warns(DegenerateCosetWarning):
        assert vanish_on_coset((0,), LatticeSubgroup.full(1)).is_zero()
    q = vanish_on_coset((0, 0), LatticeSubgroup.scaled(2, 2))
    assert evaluate(q, (1, 0)) == 8
    assert zero_set(q) == CosetUnion([Coset.make((0, 0), LatticeSubgroup.scaled(2, 2))])
    with pytest.raises(ValueError):
        vanish_on_coset((0, 0), span([(1, 1)], 2))


def test_annihilator_size():
    H = span([(2, 1), (0, 3)], 2)
    pts = annihilator(H)
    assert len(pts) == len(set(pts)) == 6
    for t in pts:
        for h in H.basis:
            assert sum(a * q for a, q in zip(h, t)) % 1 == 0


def test_non_spd_witness_examples():
    p = non_spd_witness(CosetUnion([Coset.make((0,), span([[2]], 1))]), (1,))
    assert zero_set(p) == CosetUnion([Coset.make((0,), span([[2]], 1))])
    diag = Coset.make((0, 0), span([(1, 1)], 2))
    p = non_spd_witness(CosetUnion([diag]), (1, 0))
    assert not evaluate(p, (1, 0)).is_zero()
    for k in range(-5, 5):
        assert evaluate(p, (k, k)).is_zero()
    Z = zero_set(p)
    fat = Coset.make((0, 0), span([(1, 1), (0, 2)], 2))
    assert all(Z.contains(m) == (m in fat) for m in box(4, 2))
    empty = non_spd_witness(CosetUnion([], 1), (0,))
    assert empty == TrigPoly.constant(1, (), 1)
    with pytest.raises(ValueError):
        non_spd_witness(CosetUnion([diag]), (2, 2))


def test_algebra_examples():
    p = torus((F(1, 2), 1), (0, -1))
    q = torus((F(1, 2), 1), (0, 1))
    assert p * TrigPoly.constant(1, (), 1) == p
    assert p.conjugate().conjugate() == p
    prod = p * q
    assert prod.is_zero()
    for m in range(6):
        assert evaluate(prod, (m,)) == evaluate(p, (m,)) * evaluate(q, (m,))


def test_json_roundtrip():
    p = torus((F(1, 3), CycloNumber.root_of_unity(F(1, 3))), (0, CycloNumber.gaussian(1, -2)))
    d = p.to_json()
    assert TrigPoly.from_json(d) == p
    assert any("coeff" in t for t in d["terms"])
    g = torus((F(1, 2), CycloNumber.gaussian(F(1, 2), 3)))
    assert g.to_json()["terms"][0] == {"finite": [], "phases": ["1/2"], "re": "1/2", "im": "3"}
    with pytest.raises(ValueError, match=r"terms\[0\]"):
        TrigPoly.from_json({"r": 2, "terms": [{"re": "1", "phases": ["0"]}]})


def test_finite_indicator():
    p = finite_indicator((2, 3), (1, 2), r=1)
    for b in itertools.product(range(2), range(3)):
        v = evaluate(p, Character(b, (5,)))
        assert v == (6 if b == (1, 2) else 0)


def test_restrict_and_embed():
    base = torus((F(1, 2), 1), (0, -1))
    lifted = finite_indicator((3,), (1,), 1) * base.embed((3,), 1)
    for b in range(3):
        for m in range(-3, 4):
            assert evaluate(lifted.restrict((b,)), (m,)) == evaluate(lifted, Character((b,), (m,)))


@st.composite
def polys(draw, max_r=2):
    r = draw(st.integers(1, max_r))
    L = draw(st.integers(1, 12))
    seed = draw(st.integers(0, 10**6))
    return random_poly(random.Random(seed), r, L)


@given(polys())
def test_eval_matches_float(p):
    terms = [(c.to_complex(), x.phases) for x, c in p.terms.items()]
    for m in box(2, p.r):
        assert abs(complex(evaluate(p, m)) - float_value(terms, m)) < 1e-10


@given(polys())
def test_zero_set_both_inclusions(p):
    Z = zero_set(p)
    L = p.period()
    terms = [(c.to_complex(), x.phases) for x, c in p.terms.items()]
    for m in box(2 * L if p.r == 1 else min(2 * L, 8), p.r):
        exact = evaluate(p, m).is_zero()
        assert exact == Z.contains(m)
        assert exact == (abs(float_value(terms, m)) < 1e-9)


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_vanish_on_coset_sign(seed, r):
    rng = random.Random(seed)
    H = random_lattice(rng, r, 4, finite=True)
    gamma = tuple(rng.randint(-3, 3) for _ in range(r))
    if H.index == 1:
        return
    p = vanish_on_coset(gamma, H)
    C = Coset.make(gamma, H)
    for m in box(4, r):
        v = evaluate(p, m)
        if m in C:
            assert v.is_zero()
        else:
            z = complex(v)
            assert z.real > 0.5 and abs(z.imag) < 1e-9
            assert v == v.conjugate()


@given(st.integers(0, 10**6), st.integers(1, 2))
def test_vanish_outside_coset(seed, r):
    rng = random.Random(seed)
    H = random_lattice(rng, r, 3, finite=True)
    gamma = tuple(rng.randint(-3, 3) for _ in range(r))
    p = vanish_outside_coset(gamma, H)
    C = Coset.make(gamma, H)
    for m in box(3, r):
        assert evaluate(p, m).is_zero() == (m not in C)


@given(st.integers(0, 10**6))
def test_non_spd_witness_random(seed):
    rng = random.Random(seed)
    U = random_proper_union(rng, 2, 3, 4)
    found = set_witness_polynomial(SetExpr("union", U))
    assert found is not None
    p, miss = found
    assert not p.is_zero()
    assert not evaluate(p, miss).is_zero()
    for piece in U.pieces:
        for x in itertools.islice(coset_points(piece), 10):
            assert evaluate(p, x).is_zero()


def test_set_witness_for_complement():
    piece = Coset.make((1, 0), span([(2, 0), (0, 1)], 2))
    p, at = set_witness_polynomial(SetExpr.complement_of([piece]))
    assert not evaluate(p, at).is_zero()
    for m in box(3, 2):
        assert evaluate(p, m).is_zero() == (m not in piece)
    assert set_witness_polynomial(SetExpr.everything(2)) is None


def test_characters_are_independent():
    # nonzero polynomial with distinct points is nonzero somewhere in its period box
    rng = random.Random(7)
    for _ in range(30):
        p = random_poly(rng, 2, rng.randint(2, 6))
        if p.is_zero():
            continue
        L = p.period()
        assert any(not evaluate(p, m).is_zero() for m in itertools.product(range(L), repeat=2))

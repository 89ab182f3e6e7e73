"""Brute-force oracles, independent of the package's own algorithms."""
from __future__ import annotations

import cmath
import itertools
import math

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form


def invariant_factors(gens, r):
    """Nonzero Smith invariants of the lattice spanned by ``gens`` in Z^r."""
    rows = [list(g) for g in gens if any(g)]
    if not rows:
        return []
    S = smith_normal_form(Matrix(rows), domain=ZZ)
    return [abs(int(S[i, i])) for i in range(min(S.shape)) if S[i, i] != 0]


def lattice_index(gens, r):
    inv = invariant_factors(gens, r)
    return math.prod(inv) if len(inv) == r else math.inf


def lattice_member(v, gens, r):
    """v lies in the lattice iff adding it leaves rank and covolume unchanged."""
    if not any(v):
        return True
    a = invariant_factors(gens, r)
    b = invariant_factors(list(gens) + [list(v)], r)
    return len(a) == len(b) and math.prod(a) == math.prod(b)


def box(radius, r):
    return itertools.product(range(-radius, radius + 1), repeat=r)


def coset_member(v, shift, gens, r):
    return lattice_member([a - b for a, b in zip(v, shift)], gens, r)


def finite_subgroups(invariants):
    """All subgroups by testing every subset for closure (tiny groups only)."""
    elems = list(itertools.product(*(range(n) for n in invariants)))
    zero = tuple(0 for _ in invariants)
    out = []
    rest = [e for e in elems if e != zero]
    for mask in range(1 << len(rest)):
        S = {zero} | {rest[i] for i in range(len(rest)) if mask >> i & 1}
        if all(tuple((x + y) % n for x, y, n in zip(a, b, invariants)) in S for a in S for b in S):
            out.append(frozenset(S))
    return out


def finite_ubiquitous(invariants, K, subgroups=None):
    elems = list(itertools.product(*(range(n) for n in invariants)))
    K = set(map(tuple, K))
    for H in subgroups or finite_subgroups(invariants):
        for g in elems:
            coset = {tuple((x + y) % n for x, y, n in zip(g, h, invariants)) for h in H}
            if not coset & K:
                return False
    return True


def float_value(terms, m):
    """``sum c e(m . t)`` for terms ``[(complex c, phases)]``."""
    return sum(c * cmath.exp(2j * math.pi * sum(a * float(t) for a, t in zip(m, ph)))
               for c, ph in terms)

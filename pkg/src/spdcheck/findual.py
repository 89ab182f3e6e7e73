"""Finite abelian groups F = Z/n_1 + ... + Z/n_k and their duals.

The dual is identified with F itself through the pairing
``chi_b(a) = exp(2 pi i * sum a_i b_i / n_i)``.  On a finite group a set
of characters is strictly positive definite exactly when no nonzero
polynomial vanishes on it; that is decided here by an exact rank
computation over Q(zeta_L), L = lcm(n_i).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .cosets import UbiquityVerdict
from .cyclotomic import CycloNumber, cyclotomic_poly, lcm
from .lattice import LatticeSubgroup
from .trigpoly import GroupPoint, TrigPoly

Element = tuple[int, ...]


@dataclass(frozen=True)
class FiniteGroup:
    invariants: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "invariants", tuple(int(n) for n in self.invariants))
        if any(n < 2 for n in self.invariants):
            raise ValueError(f"invariants must be >= 2, got {list(self.invariants)}")

    @property
    def order(self) -> int:
        out = 1
        for n in self.invariants:
            out *= n
        return out

    @property
    def exponent(self) -> int:
        return lcm(*self.invariants)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.invariants)))

    def check(self, a: Sequence[int]) -> Element:
        a = tuple(int(x) for x in a)
        if len(a) != len(self.invariants) or any(not 0 <= x < n for x, n in zip(a, self.invariants)):
            raise ValueError(f"{list(a)} is not an element of Z/{self.invariants}")
        return a

    def add(self, a: Element, b: Element) -> Element:
        return tuple((x + y) % n for x, y, n in zip(a, b, self.invariants))

    def to_json(self) -> dict:
        return {"invariants": list(self.invariants)}

    @classmethod
    def from_json(cls, data) -> FiniteGroup:
        return cls(tuple(data.get("invariants", [])))


@dataclass(frozen=True)
class FiniteCoset:
    shift: Element
    subgroup: frozenset

    def to_json(self) -> dict:
        return {"shift": list(self.shift), "subgroup": sorted(list(e) for e in self.subgroup)}


@dataclass(frozen=True)
class FiniteSPDVerdict:
    spd: bool
    rank: int
    coefficients: tuple[CycloNumber, ...] | None = None
    polynomial: TrigPoly | None = None


def char_eval(G: FiniteGroup, b: Sequence[int], a: Sequence[int]) -> Fraction:
    """Phase q in [0, 1) with chi_b(a) = exp(2 pi i q)."""
    b, a = G.check(b), G.check(a)
    return sum((Fraction(x * y, n) for x, y, n in zip(a, b, G.invariants)), Fraction(0)) % 1


def _exponent(G: FiniteGroup, b: Element, a: Element, L: int) -> int:
    return sum(x * y * (L // n) for x, y, n in zip(a, b, G.invariants)) % L


def _check_subset(G: FiniteGroup, K: Iterable) -> list[Element]:
    return list(dict.fromkeys(G.check(b) for b in K))


@lru_cache(maxsize=None)
def _roots(L: int) -> tuple[CycloNumber, ...]:
    return tuple(CycloNumber.from_exponents(L, {k: 1}) for k in range(L))


class _IntegerRing:
    """Z[zeta_L] on plain integer coefficient lists, for the elimination loop."""

    def __init__(self, L: int):
        phi = cyclotomic_poly(L)
        self.L = L
        self.d = d = len(phi) - 1
        # x^k mod Phi_L for d <= k <= 2d - 2
        self.tails = []
        cur = [-c for c in phi[:d]]
        for _ in range(max(d - 1, 0)):
            self.tails.append(cur)
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [a - top * c for a, c in zip(cur, phi[:d])]

    def mul(self, a, b):
        d = self.d
        out = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        low = out[:d]
        for k, c in enumerate(out[d:]):
            if c:
                tail = self.tails[k]
                for j in range(d):
                    if tail[j]:
                        low[j] += c * tail[j]
        return low

    def root(self, k: int):
        return list(CycloNumber.from_exponents(self.L, {k: 1}).nums)


def _row_reduce(rows: list[list[list[int]]], ncols: int, ring: _IntegerRing):
    """Fraction-free row echelon form over Z[zeta].

    Returns the echelon rows and their pivot columns.
    """
    rows = [list(r) for r in rows]
    mul = ring.mul
    pivots = []
    p = 0
    for col in range(ncols):
        hit = next((i for i in range(p, len(rows)) if any(rows[i][col])), None)
        if hit is None:
            continue
        rows[p], rows[hit] = rows[hit], rows[p]
        prow = rows[p]
        piv = prow[col]
        for i in range(p + 1, len(rows)):
            if any(rows[i][col]):
                f = rows[i][col]
                new = []
                for x, y in zip(rows[i], prow):
                    u = mul(piv, x) if any(x) else x
                    v = mul(f, y) if any(y) else y
                    new.append([s - t for s, t in zip(u, v)])
                rows[i] = _content_free(new)
        pivots.append(col)
        p += 1
    return rows[:p], pivots


def _content_free(row: list[list[int]]) -> list[list[int]]:
    g = 0
    for x in row:
        for a in x:
            if a:
                g = math.gcd(g, a)
                if g == 1:
                    return row
    if g <= 1:
        return row
    return [[a // g for a in x] for x in row]


def spd_test_finite(G: FiniteGroup, K: Iterable) -> FiniteSPDVerdict:
    """Decide strict positive definiteness of K inside the dual of G.

    Builds the evaluation map ``c -> (sum_a c_a chi(a))_{chi in K}`` and
    computes its rank exactly.  K is strictly positive definite iff the map
    is injective (rank |G|), which must coincide with K being the whole
    dual.  Otherwise a nonzero kernel vector is returned as the
    coefficients of a polynomial vanishing on K.
    """
    K = _check_subset(G, K)
    elems = G.elements
    L = max(G.exponent, 1)
    ring = _ring(L)
    roots = [ring.root(k) for k in range(L)]
    rows = [[roots[_exponent(G, b, a, L)] for a in elems] for b in K]
    _, pivots = _row_reduce(rows, len(elems), ring)
    rank = len(pivots)
    by_rank = rank == G.order
    by_set = len(K) == G.order
    if by_rank != by_set:
        raise RuntimeError(f"rank criterion ({rank}/{G.order}) disagrees with set criterion")
    if by_rank:
        return FiniteSPDVerdict(True, rank)

    # The eliminated pivots grow quickly, so the kernel vector is taken from
    # orthogonality instead: conj(chi) for a character chi outside K is
    # annihilated by every other character.
    Kset = set(K)
    chi = next(b for b in elems if b not in Kset)
    coeffs = [CycloNumber.from_exponents(L, {(-_exponent(G, chi, a, L)) % L: 1}) for a in elems]
    poly = TrigPoly(G.invariants, 0, [(GroupPoint(a, ()), c) for a, c in zip(elems, coeffs)])
    return FiniteSPDVerdict(False, rank, tuple(coeffs), poly)


@lru_cache(maxsize=None)
def _ring(L: int) -> _IntegerRing:
    return _IntegerRing(L)


def evaluate_finite(G: FiniteGroup, coeffs: Sequence[CycloNumber], b: Sequence[int]) -> CycloNumber:
    """``sum_a c_a chi_b(a)`` exactly."""
    L = max(G.exponent, 1)
    roots = _roots(L)
    total = CycloNumber.zero(L)
    for a, c in zip(G.elements, coeffs):
        if not c.is_zero():
            total = total + c * roots[_exponent(G, G.check(b), a, L)]
    return total


def generated_subgroup(G: FiniteGroup, gens: Iterable[Sequence[int]]) -> frozenset:
    seen = {tuple(0 for _ in G.invariants)}
    gens = [G.check(g) for g in gens]
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def subgroups(G: FiniteGroup) -> list[frozenset]:
    """All subgroups of G, largest first, as joins of cyclic subgroups."""
    return list(_subgroups(G.invariants))


@lru_cache(maxsize=None)
def _subgroups(invariants: tuple[int, ...]) -> tuple[frozenset, ...]:
    G = FiniteGroup(invariants)
    cyclic = {generated_subgroup(G, [g]) for g in G.elements}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if not C <= H:
                    J = generated_subgroup(G, list(H | C))
                    if J not in found:
                        found.add(J)
                        nxt.append(J)
        frontier = nxt
    return tuple(sorted(found, key=lambda H: (-len(H), sorted(H))))


@lru_cache(maxsize=None)
def _coset_table(invariants: tuple[int, ...]):
    G = FiniteGroup(invariants)
    pos = {a: i for i, a in enumerate(G.elements)}
    table = []
    for H in _subgroups(invariants):
        done = set()
        for g in G.elements:
            if g in done:
                continue
            coset = {G.add(g, h) for h in H}
            done |= coset
            mask = 0
            for x in coset:
                mask |= 1 << pos[x]
            table.append((min(coset), H, mask))
    return pos, table


def ubiquity_bruteforce_finite(G: FiniteGroup, K: Iterable) -> UbiquityVerdict:
    """Check every coset of every subgroup of the dual against K."""
    K = _check_subset(G, K)
    pos, table = _coset_table(G.invariants)
    kmask = 0
    for b in K:
        kmask |= 1 << pos[b]
    for shift, H, mask in table:
        if not mask & kmask:
            return UbiquityVerdict(False, FiniteCoset(shift, H))
    return UbiquityVerdict(True)


def generates_dual(G: FiniteGroup, K: Iterable) -> bool:
    K = _check_subset(G, K)
    k = len(G.invariants)
    if k == 0:
        return True
    gens = [list(b) for b in K] + [[n if i == j else 0 for j in range(k)]
                                   for i, n in enumerate(G.invariants)]
    return LatticeSubgroup.from_generators(gens, k).index == 1


def abelian_groups(max_order: int) -> list[FiniteGroup]:
    """One group per isomorphism type of order <= max_order, invariant-factor form."""
    out = []
    for n in range(1, max_order + 1):
        for inv in _invariant_factor_shapes(n):
            out.append(FiniteGroup(inv))
    return out


def _invariant_factor_shapes(n: int, min_factor: int = 2):
    # chains n_1 | n_2 | ... | n_k with product n
    if n == 1:
        yield ()
        return

    def rec(rest, prev):
        if rest == 1:
            yield ()
            return
        for d in range(prev, rest + 1):
            if rest % d == 0 and d % prev == 0:
                for tail in rec(rest // d, d):
                    if not tail or tail[0] % d == 0:
                        yield (d,) + tail

    for first in range(min_factor, n + 1):
        if n % first == 0:
            for tail in rec(n // first, first):
                yield (first,) + tail

"""Subsets of the dual of F x T^r, described slice by slice.

A set K in F^ x Z^r is given by its slices ``K_2(b) = {m : (b, m) in K}``,
one ``SetExpr`` per character b of F.  K is ubiquitous exactly when every
slice is, and on these groups ubiquity and strict positive definiteness
coincide, so both questions reduce to the Z^r machinery slice by slice.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cosets import (
    Coset,
    CosetUnion,
    SetExpr,
    SPDVerdict,
    UbiquityVerdict,
    coarsen_witness,
    coset_disjoint_from,
    coset_intersect,
    spd_decide,
    ubiquity_decide,
)
from .findual import FiniteGroup, spd_test_finite
from .lattice import LatticeSubgroup, hnf_reduce
from .trigpoly import TrigPoly, finite_indicator, set_witness_polynomial
from .verify import ScanResult, ubiquity_scan


class DualSliceMap:
    """Total map from characters of F to slices in Z^r (missing = empty)."""

    def __init__(self, group: FiniteGroup | Sequence[int], r: int,
                 slices: Mapping[Sequence[int], SetExpr] | None = None):
        self.group = group if isinstance(group, FiniteGroup) else FiniteGroup(tuple(group))
        self.r = int(r)
        given = {self.group.check(b): s for b, s in (slices or {}).items()}
        for s in given.values():
            if s.r != self.r:
                raise ValueError(f"slice lives in Z^{s.r}, expected Z^{self.r}")
        self.slices = {b: given.get(b, SetExpr.nothing(self.r)) for b in self.group.elements}

    @property
    def invariants(self) -> tuple[int, ...]:
        return self.group.invariants

    def slice(self, b: Sequence[int]) -> SetExpr:
        return self.slices[self.group.check(b)]

    def __call__(self, gamma) -> bool:
        return self.contains(gamma)

    def contains(self, gamma) -> bool:
        b = tuple(a % n for a, n in zip(gamma.finite, self.invariants))
        return self.slices[b].contains(gamma.m)

    def lattice_torsion(self) -> list[tuple[int, ...]]:
        k = len(self.invariants)
        return [tuple(n if j == i else 0 for j in range(k + self.r))
                for i, n in enumerate(self.invariants)]

    def fibre(self, C: Coset, b: Sequence[int]) -> Coset | None:
        """``{m : (b, m) in C}`` for a coset C of Z^(k+r) containing the torsion lattice."""
        k, r = len(self.invariants), self.r
        vertical = LatticeSubgroup.from_generators(
            [[int(j == k + i) for j in range(k + r)] for i in range(r)], k + r)
        meet = coset_intersect(C, Coset.make(tuple(b) + (0,) * r, vertical))
        if meet is None:
            return None
        gens = [row[k:] for row in meet.subgroup.basis]
        assert all(not any(row[:k]) for row in meet.subgroup.basis)
        return Coset.make(meet.shift[k:], hnf_reduce(gens, r))

    def coset_disjoint(self, C: Coset) -> bool:
        """Exact emptiness of ``C ∩ K`` for C in Z^(k+r) containing the torsion lattice."""
        for b in self.group.elements:
            fib = self.fibre(C, b)
            if fib is not None and not coset_disjoint_from(fib, self.slices[b]):
                return False
        return True

    def to_json(self) -> dict:
        return {"finiteDual": self.group.to_json(), "r": self.r,
                "slices": [{"char": list(b), "set": s.to_json()} for b, s in self.slices.items()]}

    @classmethod
    def from_json(cls, data: Mapping) -> DualSliceMap:
        group = FiniteGroup.from_json(data.get("finiteDual", {}))
        r = int(data["r"])
        slices = {}
        for i, item in enumerate(data.get("slices", [])):
            b = group.check(item["char"])
            if b in slices:
                raise ValueError(f"slices[{i}]: character {list(b)} given twice")
            slices[b] = SetExpr.from_json(item["set"], r)
        return cls(group, r, slices)


@dataclass(frozen=True)
class MainVerdict:
    ubiquitous: UbiquityVerdict
    spd: SPDVerdict
    per_slice: dict = field(default_factory=dict)
    polynomial: TrigPoly | None = None
    nonzero_at: tuple | None = None


def lift_witness(K: DualSliceMap, b: Sequence[int], slice_witness: Coset) -> Coset:
    """Coset ``(b, w) + ({0} x H_2)`` of F^ x Z^r, as a coset of Z^(k+r)."""
    k = len(K.invariants)
    gens = K.lattice_torsion()
    gens += [(0,) * k + row for row in slice_witness.subgroup.basis]
    return Coset.make(tuple(b) + slice_witness.shift, hnf_reduce(gens, k + K.r))


def decide_main(K: DualSliceMap, with_polynomial: bool = True) -> MainVerdict:
    """Ubiquity and strict positive definiteness of K, slice by slice.

    On failure a non-ubiquitous slice supplies the witness: its coset,
    coarsened where possible and lifted to the product, and optionally a
    nonzero polynomial on F x T^r vanishing on K.  Among failing slices the
    one with the smallest witness index is used.
    """
    per_slice = {b: ubiquity_decide(s) for b, s in K.slices.items()}
    failing = {b: coarsen_witness(v.witness, K.slices[b])
               for b, v in per_slice.items() if not v.ubiquitous}
    if not failing:
        return MainVerdict(UbiquityVerdict(True), SPDVerdict(True), per_slice)
    bad = min(failing, key=lambda b: (failing[b].subgroup.index, b))
    witness = lift_witness(K, bad, failing[bad])
    ubi = UbiquityVerdict(False, witness)
    poly = nonzero = None
    if with_polynomial:
        found = set_witness_polynomial(K.slices[bad])
        assert found is not None
        p2, m0 = found
        poly = finite_indicator(K.invariants, bad, K.r) * p2.embed(K.invariants, K.r)
        nonzero = (tuple(bad), tuple(m0))
    return MainVerdict(ubi, SPDVerdict(False, ubi), per_slice, poly, nonzero)


def product_spd_sufficient(K: DualSliceMap) -> bool:
    """One-sided test: K_1 = {b : slice b is SPD} being SPD in F^ forces K SPD.

    False only means the sufficient condition fails, never that K is not SPD.
    """
    K1 = [b for b, s in K.slices.items() if spd_decide(s).spd]
    return spd_test_finite(K.group, K1).spd


def product_scan(K: DualSliceMap, max_index: int = 8) -> ScanResult:
    return ubiquity_scan(K, K.r, K.invariants, max_index=max_index)


# -- the staircase example -------------------------------------------------

@dataclass(frozen=True)
class StaircaseSet:
    """``{(a, b) in Z^2 : a >= 1, |b| <= a}``; ``swapped`` exchanges the axes."""

    swapped: bool = False

    def __call__(self, gamma) -> bool:
        a, b = gamma.m if not self.swapped else gamma.m[::-1]
        return a >= 1 and abs(b) <= a

    def first_axis_slice(self, n: int) -> SetExpr:
        """``{b : (n, b) in K}`` as a finite union of points."""
        pts = range(-n, n + 1) if n >= 1 else ()
        zero = LatticeSubgroup.zero(1)
        return SetExpr.of([Coset.make((b,), zero) for b in pts], 1)


@dataclass(frozen=True)
class HalfLine:
    """``{k in Z : k >= start}``, a slice of the swapped staircase."""

    start: int

    def __call__(self, gamma) -> bool:
        return gamma.m[0] >= self.start


@dataclass(frozen=True)
class StaircaseReport:
    truncation: int
    slice_spd: dict
    k1_empty: bool
    scan: ScanResult
    swapped_scans: dict

    @property
    def ok(self) -> bool:
        return (self.k1_empty and self.scan.no_counterexample
                and all(s.no_counterexample for s in self.swapped_scans.values()))

    def to_json(self) -> dict:
        return {
            "truncation": self.truncation,
            "firstAxisSlicesSPD": {str(n): v for n, v in self.slice_spd.items()},
            "K1Empty": self.k1_empty,
            "scan": self.scan.to_json(),
            "swappedSliceScans": {str(m): s.to_json() for m, s in self.swapped_scans.items()},
        }


def staircase_check(N: int = 20, max_index: int = 6, radius: int = 200,
                    swapped_slices: Sequence[int] = (0, 1, -1)) -> StaircaseReport:
    """Desk-scale check of the staircase set in Z^2.

    Slices along the first axis are finite, hence never SPD, so the
    sufficient product condition is empty in that orientation.  The set is
    still ubiquitous: a bounded scan over cosets of index <= max_index finds
    a member of every coset.  Slices along the other axis are half-lines,
    which meet every progression.
    """
    if N < 1:
        raise ValueError("truncation must be at least 1")
    K = StaircaseSet()
    slice_spd = {n: spd_decide(K.first_axis_slice(n)).spd for n in range(-N, N + 1)}
    scan = ubiquity_scan(K, 2, (), max_index=max_index, radius=radius)
    swapped = {m: ubiquity_scan(HalfLine(abs(m)), 1, (), max_index=max_index, radius=radius)
               for m in swapped_slices}
    return StaircaseReport(N, slice_spd, not any(slice_spd.values()), scan, swapped)


def random_slice_map(rng, invariants: Sequence[int], r: int = 1, max_pieces: int = 3,
                     moduli: Sequence[int] = (0, 1, 2)) -> DualSliceMap:
    """Random slice map for tests; ``0`` in ``moduli`` stands for the zero subgroup."""
    G = FiniteGroup(tuple(invariants))
    slices = {}
    for b in G.elements:
        pieces = []
        for _ in range(rng.randint(0, max_pieces)):
            rows = []
            for i in range(r):
                d = rng.choice(moduli)
                if d:
                    rows.append([d if j == i else 0 for j in range(r)])
            shift = [rng.randint(-3, 3) for _ in range(r)]
            pieces.append(Coset.make(shift, hnf_reduce(rows, r)))
        kind = rng.choice(["union", "complement"])
        slices[b] = SetExpr(kind, CosetUnion(pieces, r))
    return DualSliceMap(G, r, slices)


__all__ = [
    "DualSliceMap",
    "HalfLine",
    "MainVerdict",
    "StaircaseReport",
    "StaircaseSet",
    "decide_main",
    "lift_witness",
    "product_scan",
    "product_spd_sufficient",
    "random_slice_map",
    "staircase_check",
]

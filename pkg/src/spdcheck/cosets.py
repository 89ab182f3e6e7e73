"""Cosets of subgroups of Z^r, their finite unions, and complements.

These are exactly the sets that arise as zero sets of trigonometric
polynomials on Z^r, which makes ubiquity and strict positive definiteness
decidable for them.  Negative verdicts come with a witness: a finite-index
coset that misses the set.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from .lattice import (
    LatticeSubgroup,
    enumerate_fi_subgroups,
    fatten,
    hnf_reduce,
    intersect,
    residues,
    solve_combination,
)

SEARCH_CAP = 10**6


@dataclass(frozen=True)
class Coset:
    """``shift + subgroup`` with the shift reduced to its canonical representative."""

    shift: tuple[int, ...]
    subgroup: LatticeSubgroup

    @classmethod
    def make(cls, shift: Sequence[int], subgroup: LatticeSubgroup) -> Coset:
        return cls(subgroup.reduce(shift), subgroup)

    @property
    def r(self) -> int:
        return self.subgroup.r

    @property
    def is_finite_index(self) -> bool:
        return self.subgroup.is_finite_index

    def __contains__(self, v) -> bool:
        return self.subgroup.reduce(tuple(a - b for a, b in zip(v, self.shift))) == (0,) * self.r

    def to_json(self) -> dict:
        return {"shift": list(self.shift), "subgroup": self.subgroup.to_json()}

    @classmethod
    def from_json(cls, data: Mapping) -> Coset:
        return cls.make(data["shift"], LatticeSubgroup.from_json(data["subgroup"]))

    def __str__(self) -> str:
        return f"{self.shift} + {self.subgroup}"


class CosetUnion:
    """Finite union of cosets in Z^r; duplicates are dropped."""

    __slots__ = ("r", "pieces")

    def __init__(self, pieces: Sequence[Coset] = (), r: int | None = None):
        pieces = list(pieces)
        if r is None:
            if not pieces:
                raise ValueError("an empty union needs an explicit ambient rank")
            r = pieces[0].r
        if any(c.r != r for c in pieces):
            raise ValueError("pieces live in different ambient ranks")
        self.r = r
        self.pieces: tuple[Coset, ...] = tuple(dict.fromkeys(pieces))

    def contains(self, v: Sequence[int]) -> bool:
        return any(v in c for c in self.pieces)

    __contains__ = contains

    def __len__(self) -> int:
        return len(self.pieces)

    def __iter__(self) -> Iterator[Coset]:
        return iter(self.pieces)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CosetUnion):
            return NotImplemented
        return self.r == other.r and set(self.pieces) == set(other.pieces)

    def __hash__(self):
        return hash((self.r, frozenset(self.pieces)))

    def __repr__(self) -> str:
        return f"CosetUnion(r={self.r}, [{'; '.join(map(str, self.pieces))}])"


@dataclass(frozen=True)
class SetExpr:
    """Either a coset union or the complement of one in Z^r."""

    kind: str
    union: CosetUnion

    def __post_init__(self):
        if self.kind not in ("union", "complement"):
            raise ValueError(f"unknown set kind {self.kind!r}")

    @classmethod
    def of(cls, pieces: Sequence[Coset], r: int | None = None) -> SetExpr:
        return cls("union", CosetUnion(pieces, r))

    @classmethod
    def complement_of(cls, pieces: Sequence[Coset], r: int | None = None) -> SetExpr:
        return cls("complement", CosetUnion(pieces, r))

    @classmethod
    def everything(cls, r: int) -> SetExpr:
        return cls("complement", CosetUnion((), r))

    @classmethod
    def nothing(cls, r: int) -> SetExpr:
        return cls("union", CosetUnion((), r))

    @property
    def r(self) -> int:
        return self.union.r

    def contains(self, v: Sequence[int]) -> bool:
        return self.union.contains(v) != (self.kind == "complement")

    __contains__ = contains

    def to_json(self) -> dict:
        return {"kind": self.kind, "r": self.r,
                "pieces": [c.to_json() for c in self.union.pieces]}

    @classmethod
    def from_json(cls, data: Mapping, r: int | None = None) -> SetExpr:
        r = int(data.get("r", r)) if data.get("r", r) is not None else None
        pieces = [Coset.from_json(c) for c in data.get("pieces", [])]
        return cls(data.get("kind", "union"), CosetUnion(pieces, r))


@dataclass(frozen=True)
class UbiquityVerdict:
    ubiquitous: bool
    witness: Coset | None = None

    def to_json(self) -> dict:
        out: dict = {"verdict": "ubiquitous" if self.ubiquitous else "not-ubiquitous"}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass(frozen=True)
class SPDVerdict:
    spd: bool
    reason: UbiquityVerdict | None = field(default=None)

    def to_json(self) -> dict:
        out: dict = {"verdict": "spd" if self.spd else "not-spd"}
        if self.reason is not None:
            out["reason"] = self.reason.to_json()
        return out


def _sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def coset_intersect(C1: Coset, C2: Coset) -> Coset | None:
    """The intersection, a coset of ``H1 ∩ H2``, or None when empty."""
    if C1.r != C2.r:
        raise ValueError("cosets live in different ambient ranks")
    B1, B2 = C1.subgroup.basis, C2.subgroup.basis
    coeff = solve_combination(_sub(C2.shift, C1.shift), B1 + B2, C1.r)
    if coeff is None:
        return None
    x = list(C1.shift)
    for a, row in zip(coeff, B1):
        for k in range(C1.r):
            x[k] += a * row[k]
    return Coset.make(x, intersect(C1.subgroup, C2.subgroup))


def shell(radius: int, dim: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors with sup-norm exactly ``radius``, in a fixed order."""
    if dim == 0:
        if radius == 0:
            yield ()
        return
    if radius == 0:
        yield (0,) * dim
        return
    box = range(-radius, radius + 1)
    for c0 in box:
        if abs(c0) == radius:
            for rest in itertools.product(box, repeat=dim - 1):
                yield (c0,) + rest
        else:
            for rest in shell(radius, dim - 1):
                yield (c0,) + rest


def coset_points(C: Coset, cap: int = SEARCH_CAP) -> Iterator[tuple[int, ...]]:
    """Points of C in order of growing coefficient sup-norm."""
    B = C.subgroup.basis
    seen = 0
    for radius in itertools.count():
        for c in shell(radius, len(B)):
            seen += 1
            if seen > cap:
                raise RuntimeError(f"point search exceeded {cap} combinations")
            x = list(C.shift)
            for a, row in zip(c, B):
                if a:
                    for k in range(C.r):
                        x[k] += a * row[k]
            yield tuple(x)
        if not B:
            return


def covers_group(S: CosetUnion, cap: int = SEARCH_CAP) -> tuple[int, ...] | None:
    """None when S is all of Z^r, otherwise a point outside S.

    Finite-index pieces are compared residue by residue modulo the
    intersection of their subgroups.  An uncovered residue class is then
    searched for a point avoiding the infinite-index pieces; those meet the
    class in a set of density zero, so the search terminates.
    """
    r = S.r
    finite = [c for c in S.pieces if c.is_finite_index]
    thin = [c for c in S.pieces if not c.is_finite_index]
    common = LatticeSubgroup.full(r)
    for c in finite:
        common = intersect(common, c.subgroup)
    for rho in residues(common):
        if any(rho in c for c in finite):
            continue
        for x in coset_points(Coset.make(rho, common), cap):
            if not any(x in c for c in thin):
                return x
    return None


def contains_fi_coset(S: CosetUnion) -> Coset | None:
    return next((c for c in S.pieces if c.is_finite_index), None)


def _witness_for_miss(S: CosetUnion, miss: tuple[int, ...]) -> Coset:
    r = S.r
    H = LatticeSubgroup.full(r)
    for c in S.pieces:
        if c.is_finite_index:
            H = intersect(H, c.subgroup)
    for c in S.pieces:
        if not c.is_finite_index:
            H = intersect(H, fatten(c.subgroup, _sub(miss, c.shift)))
    witness = Coset.make(miss, H)
    for c in S.pieces:
        if coset_intersect(witness, c) is not None:
            raise RuntimeError(f"witness {witness} meets piece {c}")
    return witness


def ubiquity_decide(S: SetExpr) -> UbiquityVerdict:
    """Decide whether S meets every coset of every finite-index subgroup."""
    if S.kind == "union":
        miss = covers_group(S.union)
        if miss is None:
            return UbiquityVerdict(True)
        return UbiquityVerdict(False, _witness_for_miss(S.union, miss))
    piece = contains_fi_coset(S.union)
    if piece is None:
        return UbiquityVerdict(True)
    return UbiquityVerdict(False, piece)


def coarsen_witness(C: Coset, S: SetExpr, max_index: int = 64) -> Coset:
    """A coset of smallest index containing C and still missing S.

    Searches the supergroups of C's subgroup; C is returned unchanged when
    its index exceeds ``max_index``.
    """
    n = C.subgroup.index
    if n == math.inf or n > max_index or n == 1:
        return C
    supers = [H for H in enumerate_fi_subgroups(C.r, n)
              if n % H.index == 0 and all(row in H for row in C.subgroup.basis)]
    for H in sorted(supers, key=lambda H: (H.index, H.basis)):
        cand = Coset.make(C.shift, H)
        if coset_disjoint_from(cand, S):
            return cand
    return C


def spd_decide(S: SetExpr) -> SPDVerdict:
    """Strict positive definiteness of S as a subset of the dual of T^r."""
    verdict = ubiquity_decide(S)
    return SPDVerdict(True) if verdict.ubiquitous else SPDVerdict(False, verdict)


def coset_within_union(C: Coset, S: CosetUnion) -> bool:
    """True when every point of C lies in some piece of S."""
    B = C.subgroup.basis
    s = len(B)
    if s == 0:
        return S.contains(C.shift)
    pulled = []
    for piece in S.pieces:
        meet = coset_intersect(C, piece)
        if meet is None:
            continue
        c0 = solve_combination(_sub(meet.shift, C.shift), B, C.r)
        gens = [solve_combination(row, B, C.r) for row in meet.subgroup.basis]
        pulled.append(Coset.make(c0, hnf_reduce(gens, s)))
    return covers_group(CosetUnion(pulled, s)) is None


def coset_disjoint_from(C: Coset, S: SetExpr) -> bool:
    """Exact emptiness of ``C ∩ S``."""
    if S.kind == "union":
        return all(coset_intersect(C, piece) is None for piece in S.union.pieces)
    return coset_within_union(C, S.union)

"""Trigonometric polynomials on the dual of F x T^r with rational phases.

A polynomial ``p(gamma) = sum_i c_i * gamma(x_i)`` is stored as a map from
group points ``x_i`` to exact cyclotomic coefficients.  Characters of
``F x T^r`` are pairs ``(b, m)`` with ``b`` a residue vector of F and
``m`` in Z^r; a character pairs with a point ``(a, t)`` as
``exp(2 pi i (sum a_k b_k / n_k + m . t))``.
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .cosets import Coset, CosetUnion, SetExpr, contains_fi_coset, covers_group
from .cyclotomic import CycloNumber, lcm
from .lattice import (
    LatticeSubgroup,
    adapted_basis,
    fatten,
    residues,
)

DEFAULT_BOX_CAP = 10**6


class DegenerateCosetWarning(UserWarning):
    """The coset is the whole group, so the vanishing polynomial is zero."""


@dataclass(frozen=True)
class GroupPoint:
    finite: tuple[int, ...]
    phases: tuple[Fraction, ...]

    @classmethod
    def make(cls, finite: Sequence[int], phases: Sequence, invariants: Sequence[int] = ()):
        finite = tuple(int(a) % n for a, n in zip(finite, invariants)) if invariants else tuple(finite)
        return cls(finite, tuple(Fraction(q) % 1 for q in phases))


@dataclass(frozen=True)
class Character:
    finite: tuple[int, ...]
    m: tuple[int, ...]

    @classmethod
    def torus(cls, m: Sequence[int]) -> Character:
        return cls((), tuple(int(x) for x in m))


class TrigPoly:
    """Finite sum of characters evaluated at fixed group points.

    Points are merged on construction and zero coefficients dropped, so
    the polynomial is the zero function exactly when it has no terms.
    """

    __slots__ = ("invariants", "r", "_terms")

    def __init__(self, invariants: Sequence[int], r: int,
                 terms: Iterable[tuple[GroupPoint, CycloNumber]] = ()):
        self.invariants = tuple(int(n) for n in invariants)
        self.r = int(r)
        merged: dict[GroupPoint, CycloNumber] = {}
        for point, c in terms:
            point = self._canon(point)
            if not isinstance(c, CycloNumber):
                c = _as_cyclo(c)
            merged[point] = merged[point] + c if point in merged else c
        self._terms = {x: c for x, c in merged.items() if not c.is_zero()}

    def _canon(self, point: GroupPoint) -> GroupPoint:
        if len(point.finite) != len(self.invariants) or len(point.phases) != self.r:
            raise ValueError(f"point {point} does not belong to F={self.invariants} x T^{self.r}")
        finite = tuple(a % n for a, n in zip(point.finite, self.invariants))
        return GroupPoint(finite, tuple(Fraction(q) % 1 for q in point.phases))

    @classmethod
    def constant(cls, c, invariants: Sequence[int] = (), r: int = 1) -> TrigPoly:
        origin = GroupPoint(tuple(0 for _ in invariants), tuple(Fraction(0) for _ in range(r)))
        return cls(invariants, r, [(origin, c)])

    @classmethod
    def torus(cls, terms: Mapping | Iterable, r: int = 1) -> TrigPoly:
        """Pure Z^r polynomial from ``{phases: coefficient}`` pairs."""
        items = terms.items() if isinstance(terms, Mapping) else terms
        pts = []
        for phases, c in items:
            if not isinstance(phases, (tuple, list)):
                phases = (phases,)
            pts.append((GroupPoint((), tuple(Fraction(q) for q in phases)), c))
        return cls((), r, pts)

    # -- views ----------------------------------------------------------
    @property
    def terms(self) -> dict[GroupPoint, CycloNumber]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def period(self) -> int:
        """Least L with every torus phase in (1/L) Z."""
        return lcm(*(q.denominator for x in self._terms for q in x.phases))

    def _compatible(self, other: TrigPoly):
        if (self.invariants, self.r) != (other.invariants, other.r):
            raise ValueError("polynomials live on different groups")

    # -- algebra --------------------------------------------------------
    def __add__(self, other: TrigPoly) -> TrigPoly:
        self._compatible(other)
        return TrigPoly(self.invariants, self.r,
                        itertools.chain(self._terms.items(), other._terms.items()))

    def __neg__(self) -> TrigPoly:
        return TrigPoly(self.invariants, self.r, [(x, -c) for x, c in self._terms.items()])

    def __sub__(self, other: TrigPoly) -> TrigPoly:
        return self + (-other)

    def __mul__(self, other) -> TrigPoly:
        if not isinstance(other, TrigPoly):
            c = other if isinstance(other, CycloNumber) else _as_cyclo(other)
            return TrigPoly(self.invariants, self.r, [(x, a * c) for x, a in self._terms.items()])
        self._compatible(other)
        out = []
        for (x, a), (y, b) in itertools.product(self._terms.items(), other._terms.items()):
            pt = GroupPoint(tuple(u + v for u, v in zip(x.finite, y.finite)),
                            tuple(u + v for u, v in zip(x.phases, y.phases)))
            out.append((pt, a * b))
        return TrigPoly(self.invariants, self.r, out)

    __rmul__ = __mul__

    def conjugate(self) -> TrigPoly:
        return TrigPoly(self.invariants, self.r,
                        [(GroupPoint(tuple(-a for a in x.finite), tuple(-q for q in x.phases)),
                          c.conjugate()) for x, c in self._terms.items()])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TrigPoly):
            return NotImplemented
        if (self.invariants, self.r) != (other.invariants, other.r):
            return False
        return (self - other).is_zero()

    __hash__ = None

    def embed(self, invariants: Sequence[int], r: int) -> TrigPoly:
        """View a pure-F or pure-T^r polynomial on the product F x T^r."""
        invariants = tuple(invariants)
        if self.invariants and self.invariants != invariants or self.r and self.r != r:
            raise ValueError("cannot embed into a group with different factors")
        out = []
        for x, c in self._terms.items():
            finite = x.finite if self.invariants else tuple(0 for _ in invariants)
            phases = x.phases if self.r else tuple(Fraction(0) for _ in range(r))
            out.append((GroupPoint(finite, phases), c))
        return TrigPoly(invariants, r, out)

    def restrict(self, finite_char: Sequence[int]) -> TrigPoly:
        """The Z^r polynomial ``m -> p(b, m)`` for a fixed F-character ``b``."""
        b = tuple(finite_char)
        out = []
        for x, c in self._terms.items():
            phase = sum(Fraction(a * bb, n) for a, bb, n in zip(x.finite, b, self.invariants))
            out.append((GroupPoint((), x.phases), c * CycloNumber.root_of_unity(phase % 1)))
        return TrigPoly((), self.r, out)

    def __repr__(self) -> str:
        body = " + ".join(f"({c.to_complex():.4g})*[{x.finite}|{','.join(map(str, x.phases))}]"
                          for x, c in self._terms.items())
        return f"TrigPoly(F={self.invariants}, r={self.r}: {body or '0'})"

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        terms = []
        for x, c in sorted(self._terms.items(), key=lambda kv: (kv[0].finite, kv[0].phases)):
            entry: dict = {"finite": list(x.finite), "phases": [str(q) for q in x.phases]}
            if c.conductor in (1, 2, 4):
                c4 = c.lift(4)
                re, im = c4.coeffs
                entry.update(re=str(re), im=str(im))
            else:
                entry["coeff"] = c.to_json()
            terms.append(entry)
        return {"invariants": list(self.invariants), "r": self.r, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> TrigPoly:
        invariants = tuple(data.get("invariants", ()))
        r = int(data["r"])
        pts = []
        for i, t in enumerate(data["terms"]):
            if "coeff" in t:
                c = CycloNumber.from_json(t["coeff"])
            else:
                c = CycloNumber.gaussian(Fraction(t.get("re", "0")), Fraction(t.get("im", "0")))
            phases = [Fraction(q) for q in t.get("phases", [])]
            finite = [int(a) for a in t.get("finite", [])]
            if len(phases) != r or len(finite) != len(invariants):
                raise ValueError(f"terms[{i}]: shape does not match F={list(invariants)}, r={r}")
            pts.append((GroupPoint(tuple(finite), tuple(phases)), c))
        return cls(invariants, r, pts)


def _as_cyclo(c) -> CycloNumber:
    if isinstance(c, CycloNumber):
        return c
    if isinstance(c, complex):
        return CycloNumber.gaussian(Fraction(c.real), Fraction(c.imag))
    return CycloNumber.rational(c)


def _character(gamma, invariants: Sequence[int], r: int) -> Character:
    if isinstance(gamma, Character):
        return gamma
    gamma = tuple(gamma)
    if invariants:
        raise TypeError("pass a Character when the group has a finite factor")
    return Character((), tuple(int(x) for x in gamma))


def character_value(gamma: Character, x: GroupPoint, invariants: Sequence[int]) -> Fraction:
    """Phase q in [0, 1) with gamma(x) = exp(2 pi i q)."""
    q = sum(Fraction(a * b, n) for a, b, n in zip(x.finite, gamma.finite, invariants))
    q += sum(m * t for m, t in zip(gamma.m, x.phases))
    return q % 1


def evaluate(p: TrigPoly, gamma) -> CycloNumber:
    """Exact value ``sum_i c_i gamma(x_i)`` in Q(zeta_N).

    N is the lcm of 4, every phase denominator, the finite invariants and
    the coefficient conductors.
    """
    gamma = _character(gamma, p.invariants, p.r)
    if len(gamma.finite) != len(p.invariants) or len(gamma.m) != p.r:
        raise ValueError(f"character {gamma} does not match F={p.invariants}, r={p.r}")
    terms = p._terms
    N = lcm(4, p.period(), *p.invariants, *(c.conductor for c in terms.values()))
    den = lcm(*(c.den for c in terms.values()))
    arr = [0] * N
    for x, c in terms.items():
        e = int(character_value(gamma, x, p.invariants) * N)
        step = N // c.conductor
        scale = den // c.den
        for k, a in enumerate(c.nums):
            if a:
                arr[(e + k * step) % N] += a * scale
    return CycloNumber(N, arr, den)


def evaluate_float(p: TrigPoly, gamma) -> complex:
    """Double-precision evaluation, used only as a cross-check."""
    gamma = _character(gamma, p.invariants, p.r)
    total = 0j
    for x, c in p._terms.items():
        q = float(sum(Fraction(a * b, n) for a, b, n in zip(x.finite, gamma.finite, p.invariants)))
        q += sum(m * float(t) for m, t in zip(gamma.m, x.phases))
        total += c.to_complex() * complex(math.cos(2 * math.pi * q), math.sin(2 * math.pi * q))
    return total


def zero_set(p: TrigPoly, box_cap: int = DEFAULT_BOX_CAP, consolidate: bool = True) -> CosetUnion:
    """Exact zero set in Z^r of a rational-phase polynomial.

    ``p`` is periodic modulo ``L Z^r`` with L the phase period, so its zeros
    are the zero residues in ``[0, L)^r`` shifted by ``L Z^r``.
    """
    if p.r < 1:
        raise ValueError("zero_set works on Z^r with r >= 1")
    if p.invariants and any(a for x in p._terms for a in x.finite):
        raise ValueError("zero_set needs a pure Z^r polynomial; restrict the finite part first")
    q = p if not p.invariants else TrigPoly((), p.r, [(GroupPoint((), x.phases), c)
                                                      for x, c in p._terms.items()])
    r = q.r
    L = q.period()
    if L**r > box_cap:
        raise ValueError(f"period box {L}^{r} exceeds the cap {box_cap}")
    zeros = {m for m in itertools.product(range(L), repeat=r) if evaluate(q, m).is_zero()}
    lattice = LatticeSubgroup.scaled(L, r)
    if not consolidate:
        return CosetUnion([Coset.make(m, lattice) for m in sorted(zeros)], r)
    return CosetUnion(_consolidate(zeros, L, r), r)


def _consolidate(zeros: set, L: int, r: int) -> list[Coset]:
    # Greedy: cover each zero residue by the coarsest diagonal coset inside the zero set.
    divisors = [d for d in range(1, L + 1) if L % d == 0]
    candidates = sorted(itertools.product(divisors, repeat=r), key=lambda ds: (math.prod(ds), ds))
    covered: set = set()
    pieces = []
    for m0 in sorted(zeros):
        if m0 in covered:
            continue
        for ds in candidates:
            block = {tuple((a + k * d) % L for a, k, d in zip(m0, ks, ds))
                     for ks in itertools.product(*(range(L // d) for d in ds))}
            if block <= zeros:
                covered |= block
                sub = LatticeSubgroup.from_generators(
                    [[d if i == j else 0 for j in range(r)] for i, d in enumerate(ds)], r)
                pieces.append(Coset.make(m0, sub))
                break
    return pieces


def annihilator(H: LatticeSubgroup) -> list[tuple[Fraction, ...]]:
    """Points of T^r (as phase vectors) killed by every character in H.

    H must have finite index; the annihilator then has exactly
    ``index(H)`` points, read off from an adapted basis.
    """
    if not H.is_finite_index:
        raise ValueError("annihilator of an infinite-index subgroup is infinite")
    ab = adapted_basis(H)
    r = H.r
    # dual basis vector j has entries coords[k][j]
    duals = [[ab.coords[k][j] for k in range(r)] for j in range(r)]
    points = []
    for betas in itertools.product(*(range(a) for a in ab.divisors)):
        pt = [Fraction(0)] * r
        for b, a, dual in zip(betas, ab.divisors, duals):
            if b:
                for k in range(r):
                    pt[k] += Fraction(b * dual[k], a)
        points.append(tuple(q % 1 for q in pt))
    return points


def vanish_on_coset(gamma: Sequence[int], H: LatticeSubgroup) -> TrigPoly:
    """Nonnegative polynomial on Z^r vanishing exactly on ``gamma + H``.

    ``p(mu) = sum_{x in H^perp} |mu(x) - gamma(x)|^2`` expanded into
    character form.  When H is all of Z^r the result is the zero
    polynomial and a ``DegenerateCosetWarning`` is issued.
    """
    gamma = tuple(int(g) for g in gamma)
    r = H.r
    if len(gamma) != r:
        raise ValueError("shift and subgroup have different ranks")
    if not H.is_finite_index:
        raise ValueError("vanish_on_coset needs a finite-index subgroup")
    total = TrigPoly((), r)
    origin = GroupPoint((), tuple(Fraction(0) for _ in range(r)))
    for x in annihilator(H):
        phase = sum(g * t for g, t in zip(gamma, x)) % 1
        q = TrigPoly((), r, [(GroupPoint((), x), 1),
                             (origin, -CycloNumber.root_of_unity(phase))])
        total = total + q * q.conjugate()
    if total.is_zero():
        warnings.warn(f"coset {gamma} + {H} is all of Z^{r}; returning the zero polynomial",
                      DegenerateCosetWarning, stacklevel=2)
    return total


def vanish_outside_coset(gamma: Sequence[int], H: LatticeSubgroup) -> TrigPoly:
    """Polynomial vanishing on every coset of H except ``gamma + H``.

    Product of ``vanish_on_coset`` over the other cosets; nonzero on
    ``gamma + H``.
    """
    gamma = H.reduce(gamma)
    out = TrigPoly.constant(1, (), H.r)
    for rho in residues(H):
        if H.reduce(rho) != gamma:
            out = out * vanish_on_coset(rho, H)
    return out


def non_spd_witness(S: CosetUnion, miss: Sequence[int]) -> TrigPoly:
    """Nonzero polynomial vanishing on every piece of S, nonzero at ``miss``.

    Finite-index pieces contribute their own vanishing polynomial;
    infinite-index pieces are first enlarged to a finite-index supergroup
    that still avoids ``miss``.
    """
    r = S.r
    miss = tuple(int(v) for v in miss)
    if S.contains(miss):
        raise ValueError(f"{miss} lies in the set")
    out = TrigPoly.constant(1, (), r)
    for piece in S.pieces:
        sub = piece.subgroup
        if not sub.is_finite_index:
            sub = fatten(sub, tuple(a - b for a, b in zip(miss, piece.shift)))
        out = out * vanish_on_coset(piece.shift, sub)
    if evaluate(out, miss).is_zero():
        raise RuntimeError("witness polynomial vanishes at the missed point")
    return out


def finite_indicator(invariants: Sequence[int], b: Sequence[int], r: int = 0) -> TrigPoly:
    """Polynomial on F x T^r equal to |F| at characters with finite part ``b``, else 0."""
    invariants = tuple(invariants)
    pts = []
    for a in itertools.product(*(range(n) for n in invariants)):
        phase = sum(Fraction(x * y, n) for x, y, n in zip(a, b, invariants)) % 1
        pts.append((GroupPoint(a, tuple(Fraction(0) for _ in range(r))),
                    CycloNumber.root_of_unity(-phase % 1)))
    return TrigPoly(invariants, r, pts)


def set_witness_polynomial(S: SetExpr) -> tuple[TrigPoly, tuple[int, ...]] | None:
    """Nonzero polynomial vanishing on the set S, with a point where it is nonzero.

    Returns None when S is strictly positive definite (no such polynomial).
    """
    if S.kind == "union":
        hit = covers_group(S.union)
        if hit is None:
            return None
        return non_spd_witness(S.union, hit), hit
    piece = contains_fi_coset(S.union)
    if piece is None:
        return None
    return vanish_outside_coset(piece.shift, piece.subgroup), piece.shift

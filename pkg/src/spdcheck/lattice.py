"""Exact subgroups of the integer lattice Z^r.

Subgroups are stored in row Hermite normal form (HNF): rows in echelon
shape, positive pivots, entries above each pivot reduced into
``[0, pivot)``.  That form is canonical, so two ``LatticeSubgroup`` values
are equal exactly when they describe the same subgroup.

Everything here works on Python ints; nothing is ever converted to float.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

INFINITE = math.inf

Vector = tuple[int, ...]


def _as_vector(v: Sequence[int], r: int) -> Vector:
    v = tuple(int(x) for x in v)
    if len(v) != r:
        raise ValueError(f"expected a vector of length {r}, got length {len(v)}")
    return v


def _echelon(rows: list[list[int]], ncols: int, transform: bool = False):
    """Row-reduce ``rows`` in place to HNF.

    Returns ``(hnf_rows, pivot_cols, U)`` where ``U`` (only when
    ``transform`` is set) is the unimodular matrix with ``U * rows = H``,
    including the zero rows at the bottom.
    """
    A = rows
    m = len(A)
    U = [[int(i == j) for j in range(m)] for i in range(m)] if transform else None

    def swap(i, j):
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]

    def addmul(i, j, q):
        # row_i -= q * row_j
        Ai, Aj = A[i], A[j]
        for k in range(ncols):
            if Aj[k]:
                Ai[k] -= q * Aj[k]
        if U is not None:
            Ui, Uj = U[i], U[j]
            for k in range(m):
                if Uj[k]:
                    Ui[k] -= q * Uj[k]

    p = 0
    pivots = []
    for col in range(ncols):
        if p == m:
            break
        while True:
            nz = [i for i in range(p, m) if A[i][col]]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(A[i][col]))
            if best != p:
                swap(best, p)
            clean = True
            for i in range(p + 1, m):
                if A[i][col]:
                    addmul(i, p, A[i][col] // A[p][col])
                    if A[i][col]:
                        clean = False
            if clean:
                break
        if not A[p][col]:
            continue
        if A[p][col] < 0:
            A[p] = [-x for x in A[p]]
            if U is not None:
                U[p] = [-x for x in U[p]]
        for i in range(p):
            if A[i][col]:
                addmul(i, p, A[i][col] // A[p][col])
        pivots.append(col)
        p += 1
    return A[:p], pivots, U


@dataclass(frozen=True)
class LatticeSubgroup:
    """Subgroup of Z^r given by its HNF basis (one generator per row)."""

    r: int
    basis: tuple[Vector, ...]

    def __post_init__(self):
        if self.r < 1:
            raise ValueError("ambient rank must be at least 1")

    @classmethod
    def from_generators(cls, generators: Sequence[Sequence[int]], r: int) -> LatticeSubgroup:
        return hnf_reduce(generators, r)

    @classmethod
    def full(cls, r: int) -> LatticeSubgroup:
        return cls(r, tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))

    @classmethod
    def zero(cls, r: int) -> LatticeSubgroup:
        return cls(r, ())

    @classmethod
    def scaled(cls, n: int, r: int) -> LatticeSubgroup:
        """The subgroup n * Z^r."""
        return hnf_reduce([[n * int(i == j) for j in range(r)] for i in range(r)], r)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @property
    def index(self):
        return index(self)

    @property
    def is_finite_index(self) -> bool:
        return self.rank == self.r

    def __contains__(self, v) -> bool:
        return member(v, self)

    def reduce(self, v: Sequence[int]) -> Vector:
        """Canonical representative of ``v + H``."""
        w = list(_as_vector(v, self.r))
        for row, p in zip(self.basis, self.pivots):
            q = w[p] // row[p]
            if q:
                for k in range(p, self.r):
                    w[k] -= q * row[k]
        return tuple(w)

    def to_json(self) -> dict:
        return {"r": self.r, "basis": [list(row) for row in self.basis]}

    @classmethod
    def from_json(cls, data: dict) -> LatticeSubgroup:
        return hnf_reduce(data.get("basis", []), int(data["r"]))

    def __str__(self) -> str:
        return f"<{', '.join(str(row) for row in self.basis)}> in Z^{self.r}"


@dataclass(frozen=True)
class AdaptedBasis:
    """Basis ``x_1..x_r`` of Z^r and divisors with ``alpha_i x_i`` spanning H."""

    full_basis: tuple[Vector, ...]
    divisors: tuple[int, ...]
    # Inverse of the full basis matrix: coordinates of y are y @ coords.
    coords: tuple[Vector, ...]

    def coefficients(self, y: Sequence[int]) -> Vector:
        """Integer coordinates of ``y`` with respect to ``full_basis``."""
        r = len(self.full_basis)
        y = _as_vector(y, r)
        return tuple(sum(y[k] * self.coords[k][j] for k in range(r)) for j in range(r))


def hnf_reduce(generators: Sequence[Sequence[int]], r: int) -> LatticeSubgroup:
    rows = [list(_as_vector(g, r)) for g in generators]
    hnf, _, _ = _echelon(rows, r)
    return LatticeSubgroup(r, tuple(tuple(row) for row in hnf))


def member(v: Sequence[int], H: LatticeSubgroup) -> bool:
    return not any(H.reduce(v))


def index(H: LatticeSubgroup):
    """Index of H in Z^r: an int, or ``INFINITE`` when H is rank deficient."""
    if H.rank < H.r:
        return INFINITE
    return math.prod(row[i] for i, row in enumerate(H.basis))


def _check_same(H1: LatticeSubgroup, H2: LatticeSubgroup):
    if H1.r != H2.r:
        raise ValueError(f"ambient ranks differ: {H1.r} vs {H2.r}")


def join(H1: LatticeSubgroup, H2: LatticeSubgroup) -> LatticeSubgroup:
    _check_same(H1, H2)
    return hnf_reduce(H1.basis + H2.basis, H1.r)


def intersect(H1: LatticeSubgroup, H2: LatticeSubgroup) -> LatticeSubgroup:
    """H1 ∩ H2 via the Zassenhaus stacking [[B1, B1], [B2, 0]]."""
    _check_same(H1, H2)
    r = H1.r
    rows = [list(b) + list(b) for b in H1.basis]
    rows += [list(b) + [0] * r for b in H2.basis]
    hnf, pivots, _ = _echelon(rows, 2 * r)
    gens = [row[r:] for row, p in zip(hnf, pivots) if p >= r]
    return hnf_reduce(gens, r)


def solve_combination(v: Sequence[int], generators: Sequence[Sequence[int]], r: int):
    """Integer coefficients ``c`` with ``sum c_i * generators[i] == v``, or None."""
    v = _as_vector(v, r)
    rows = [list(_as_vector(g, r)) for g in generators]
    m = len(rows)
    hnf, pivots, U = _echelon(rows, r, transform=True)
    w = list(v)
    coeff = [0] * len(hnf)
    for i, (row, p) in enumerate(zip(hnf, pivots)):
        if any(w[:p]):
            return None
        q, rem = divmod(w[p], row[p])
        if rem:
            return None
        coeff[i] = q
        for k in range(p, r):
            w[k] -= q * row[k]
    if any(w):
        return None
    return tuple(sum(coeff[i] * U[i][j] for i in range(len(hnf))) for j in range(m))


def smith_form(B: Sequence[Sequence[int]], ncols: int):
    """Diagonalise ``B`` by unimodular row/column operations.

    Returns ``(diag, Q, Qinv)`` with ``P @ B @ Q`` equal to ``diag`` padded
    with zeros for some unimodular ``P``.  ``diag`` is a positive divisor
    chain.
    """
    A = [list(row) for row in B]
    m, n = len(A), ncols
    Q = [[int(i == j) for j in range(n)] for i in range(n)]
    Qi = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_swap(j, k):
        for row in A:
            row[j], row[k] = row[k], row[j]
        for row in Q:
            row[j], row[k] = row[k], row[j]
        Qi[j], Qi[k] = Qi[k], Qi[j]

    def col_add(k, j, c):
        # col_k += c * col_j
        for row in A:
            row[k] += c * row[j]
        for row in Q:
            row[k] += c * row[j]
        Qi[j] = [a - c * b for a, b in zip(Qi[j], Qi[k])]

    def row_add(i, j, c):
        A[i] = [a + c * b for a, b in zip(A[i], A[j])]

    diag = []
    t = 0
    while t < min(m, n):
        entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        A[t], A[i] = A[i], A[t]
        if j != t:
            col_swap(t, j)
        while True:
            piv = A[t][t]
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_add(i, t, -(A[i][t] // piv))
                    changed = changed or A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    col_add(j, t, -(A[t][j] // piv))
                    changed = changed or A[t][j] != 0
            if changed:
                entries = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
                entries += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
                _, i, j = min(entries)
                if i != t:
                    A[t], A[i] = A[i], A[t]
                if j != t:
                    col_swap(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv),
                None,
            )
            if bad is None:
                break
            row_add(t, bad[0], 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
        diag.append(A[t][t])
        t += 1
    return diag, Q, Qi


def adapted_basis(H: LatticeSubgroup) -> AdaptedBasis:
    """Basis of Z^r adapted to H, realised through the Smith normal form."""
    if H.rank == 0:
        raise ValueError("the zero subgroup has no adapted basis")
    diag, Q, Qi = smith_form(H.basis, H.r)
    return AdaptedBasis(
        full_basis=tuple(tuple(row) for row in Qi),
        divisors=tuple(diag),
        coords=tuple(tuple(row) for row in Q),
    )


def fi_supergroup(H: LatticeSubgroup, y: Sequence[int]) -> LatticeSubgroup:
    """A finite-index subgroup containing H but not ``y``.

    H must have infinite index and ``y`` must lie outside H.  Follows the
    adapted-basis construction: coordinates of ``y`` past the rank of H pick
    the extra moduli, ``|beta| + 1`` where nonzero and 2 otherwise.
    """
    r = H.r
    y = _as_vector(y, r)
    if H.is_finite_index:
        raise ValueError("subgroup already has finite index")
    if member(y, H):
        raise ValueError(f"{y} lies in the subgroup")
    if H.rank == 0:
        xs = [tuple(int(i == j) for j in range(r)) for i in range(r)]
        alphas: list[int] = []
        beta = y
    else:
        ab = adapted_basis(H)
        xs = list(ab.full_basis)
        alphas = list(ab.divisors)
        beta = ab.coefficients(y)
    s = len(alphas)
    tail = beta[s:]
    if not any(tail):
        gens = [tuple(a * c for c in x) for a, x in zip(alphas, xs)] + list(xs[s:])
    else:
        extra = [abs(b) + 1 if b else 2 for b in tail]
        gens = [tuple(a * c for c in x) for a, x in zip(alphas + extra, xs)]
    G = hnf_reduce(gens, r)
    assert G.is_finite_index and not member(y, G)
    return G


def enumerate_fi_subgroups(r: int, max_index: int) -> Iterator[LatticeSubgroup]:
    """Every subgroup of Z^r with index at most ``max_index``, each once.

    Walks the upper-triangular HNF matrices: positive diagonal with product
    bounded by ``max_index``, entries above a pivot reduced modulo it.
    """
    if max_index < 1:
        raise ValueError("max_index must be at least 1")

    def diagonals(k, budget):
        if k == r:
            yield ()
            return
        for d in range(1, budget + 1):
            for rest in diagonals(k + 1, budget // d):
                yield (d,) + rest

    def fill(diag):
        cells = [(i, j) for j in range(r) for i in range(j)]

        def rec(c, M):
            if c == len(cells):
                yield LatticeSubgroup(r, tuple(tuple(row) for row in M))
                return
            i, j = cells[c]
            for a in range(diag[j]):
                M[i][j] = a
                yield from rec(c + 1, M)
            M[i][j] = 0

        M = [[diag[i] if i == j else 0 for j in range(r)] for i in range(r)]
        yield from rec(0, M)

    for diag in diagonals(0, max_index):
        yield from fill(diag)


FATTEN_SEARCH_INDEX = 12


@functools.lru_cache(maxsize=None)
def _small_subgroups(r: int, bound: int) -> tuple[LatticeSubgroup, ...]:
    return tuple(sorted(enumerate_fi_subgroups(r, bound), key=lambda H: (H.index, H.basis)))


def fatten(H: LatticeSubgroup, y: Sequence[int]) -> LatticeSubgroup:
    """A finite-index supergroup of H avoiding y, of small index.

    Searches supergroups of index <= FATTEN_SEARCH_INDEX first (smallest
    wins); falls back to the adapted-basis construction, whose index can be
    large and would blow up the period of the witness polynomial.
    """
    y = tuple(y)
    if H.r <= 3:
        for G in _small_subgroups(H.r, FATTEN_SEARCH_INDEX):
            if y not in G and all(v in G for v in H.basis):
                return G
    return fi_supergroup(H, y)


def residues(H: LatticeSubgroup) -> Iterator[Vector]:
    """Canonical representatives of Z^r / H for finite-index H."""
    if not H.is_finite_index:
        raise ValueError("infinite index: residues are not finite")
    ds = [row[i] for i, row in enumerate(H.basis)]

    def rec(k):
        if k == H.r:
            yield ()
            return
        for a in range(ds[k]):
            for rest in rec(k + 1):
                yield (a,) + rest

    yield from rec(0)


def coordinates(v: Sequence[int], H: LatticeSubgroup) -> tuple[Fraction, ...]:
    """Rational coordinates of ``v`` in the HNF basis of a full-rank H."""
    if not H.is_finite_index:
        raise ValueError("coordinates need a full-rank basis")
    w = [Fraction(x) for x in _as_vector(v, H.r)]
    c = []
    for i, row in enumerate(H.basis):
        q = w[i] / row[i]
        c.append(q)
        for k in range(i, H.r):
            w[k] -= q * row[k]
    return tuple(c)

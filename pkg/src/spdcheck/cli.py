"""Command-line front end.

Every command reads one JSON document (``--input FILE`` or ``-`` for stdin),
prints one JSON (or plain text) report and exits with

    0   decided positive / certificate verified
    1   decided negative, certificate attached (or certificate rejected)
    2   inconclusive: a bounded scan found nothing, or a search cap was hit
    64  malformed input; the report names the offending JSON path
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .cosets import (
    Coset,
    CosetUnion,
    SetExpr,
    coset_disjoint_from,
    coset_within_union,
    covers_group,
    ubiquity_decide,
)
from .cyclotomic import CycloNumber
from .findual import (
    FiniteGroup,
    generated_subgroup,
    spd_test_finite,
    ubiquity_bruteforce_finite,
)
from .lattice import LatticeSubgroup
from .product import DualSliceMap, HalfLine, StaircaseSet, decide_main, staircase_check
from .trigpoly import Character, GroupPoint, TrigPoly, evaluate, set_witness_polynomial, zero_set
from .verify import gram_matrix, identity_check, psd_check, synth, ubiquity_scan

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_INPUT = 0, 1, 2, 64

COMMANDS = ("decide-ubiquity", "decide-spd", "witness", "zero-set", "scan", "synth-verify", "staircase")


class InputError(Exception):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


@dataclass
class Request:
    command: str
    payload: Any = None
    max_index: int = 12
    radius: int = 1000
    tolerance: float = 1e-9
    seed: int = 0
    truncation: int = 20

    def parameters(self) -> dict:
        return {"maxIndex": self.max_index, "radius": self.radius,
                "tolerance": self.tolerance, "seed": self.seed}


@dataclass
class Response:
    body: dict
    exit_code: int


# -- input validation ------------------------------------------------------

def _obj(d, path):
    if not isinstance(d, dict):
        raise InputError(path, "expected an object")
    return d


def _field(d, key, path):
    _obj(d, path)
    if key not in d:
        raise InputError(f"{path}.{key}", "missing")
    return d[key]


def _int(v, path):
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(path, f"expected an integer, got {v!r}")
    return v


def _ints(v, path, length=None):
    if not isinstance(v, list):
        raise InputError(path, "expected a list of integers")
    out = [_int(x, f"{path}[{i}]") for i, x in enumerate(v)]
    if length is not None and len(out) != length:
        raise InputError(path, f"expected {length} entries, got {len(out)}")
    return out


def _rational(v, path):
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise InputError(path, f"expected an integer or a \"p/q\" string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise InputError(path, f"not a rational number: {v!r}") from None


def _rank(d, path, r=None):
    if r is None:
        r = _int(_field(d, "r", path), f"{path}.r")
    if r < 0:
        raise InputError(f"{path}.r", "rank must be non-negative")
    return r


def parse_lattice(d, path, r=None) -> LatticeSubgroup:
    _obj(d, path)
    r = _rank(d, path, d.get("r", r))
    basis = _field(d, "basis", path)
    if not isinstance(basis, list):
        raise InputError(f"{path}.basis", "expected a list of rows")
    rows = [_ints(row, f"{path}.basis[{i}]", r) for i, row in enumerate(basis)]
    return LatticeSubgroup.from_generators(rows, r)


def parse_coset(d, path, r=None) -> Coset:
    shift = _ints(_field(d, "shift", path), f"{path}.shift", r)
    H = parse_lattice(_field(d, "subgroup", path), f"{path}.subgroup", len(shift))
    if H.r != len(shift):
        raise InputError(f"{path}.subgroup.r", f"expected {len(shift)}")
    return Coset.make(shift, H)


def parse_setexpr(d, path, r=None) -> SetExpr:
    _obj(d, path)
    kind = d.get("kind", "union")
    if kind not in ("union", "complement"):
        raise InputError(f"{path}.kind", "expected \"union\" or \"complement\"")
    if "r" in d:
        r = _rank(d, path)
    pieces = d.get("pieces", [])
    if not isinstance(pieces, list):
        raise InputError(f"{path}.pieces", "expected a list of cosets")
    cosets = [parse_coset(c, f"{path}.pieces[{i}]", r) for i, c in enumerate(pieces)]
    if r is None:
        if not cosets:
            raise InputError(f"{path}.r", "needed for an empty union")
        r = cosets[0].r
    if r < 1:
        raise InputError(f"{path}.r", "sets live in Z^r with r >= 1")
    for i, c in enumerate(cosets):
        if c.r != r:
            raise InputError(f"{path}.pieces[{i}].shift", f"expected {r} entries")
    return SetExpr(kind, CosetUnion(cosets, r))


def parse_group(d, path) -> FiniteGroup:
    inv = _ints(_field(d, "invariants", path), f"{path}.invariants")
    for i, n in enumerate(inv):
        if n < 2:
            raise InputError(f"{path}.invariants[{i}]", "invariants must be >= 2")
    return FiniteGroup(tuple(inv))


def _element(G: FiniteGroup, v, path):
    a = _ints(v, path, len(G.invariants))
    for i, (x, n) in enumerate(zip(a, G.invariants)):
        if not 0 <= x < n:
            raise InputError(f"{path}[{i}]", f"must lie in [0, {n})")
    return tuple(a)


def parse_slicemap(d, path) -> DualSliceMap:
    G = parse_group(_field(d, "finiteDual", path), f"{path}.finiteDual")
    r = _rank(d, path)
    if r < 1:
        raise InputError(f"{path}.r", "expected r >= 1")
    items = _field(d, "slices", path)
    if not isinstance(items, list):
        raise InputError(f"{path}.slices", "expected a list")
    slices = {}
    for i, item in enumerate(items):
        p = f"{path}.slices[{i}]"
        b = _element(G, _field(item, "char", p), f"{p}.char")
        if b in slices:
            raise InputError(f"{p}.char", "character listed twice")
        slices[b] = parse_setexpr(_field(item, "set", p), f"{p}.set", r)
        if slices[b].r != r:
            raise InputError(f"{p}.set.r", f"expected {r}")
    return DualSliceMap(G, r, slices)


@dataclass(frozen=True)
class FiniteSet:
    group: FiniteGroup
    K: tuple

    def to_json(self) -> dict:
        return {"finiteDual": self.group.to_json(), "K": [list(b) for b in self.K]}


def parse_finite_set(d, path) -> FiniteSet:
    G = parse_group(_field(d, "finiteDual", path), f"{path}.finiteDual")
    K = _field(d, "K", path)
    if not isinstance(K, list):
        raise InputError(f"{path}.K", "expected a list of characters")
    elems = [_element(G, b, f"{path}.K[{i}]") for i, b in enumerate(K)]
    return FiniteSet(G, tuple(sorted(set(elems))))


def parse_trigpoly(d, path) -> TrigPoly:
    _obj(d, path)
    inv = _ints(d.get("invariants", []), f"{path}.invariants")
    r = _rank(d, path)
    terms = _field(d, "terms", path)
    if not isinstance(terms, list):
        raise InputError(f"{path}.terms", "expected a list")
    pts = []
    for i, t in enumerate(terms):
        p = f"{path}.terms[{i}]"
        _obj(t, p)
        finite = _ints(t.get("finite", []), f"{p}.finite", len(inv))
        phases = t.get("phases", [])
        if not isinstance(phases, list) or len(phases) != r:
            raise InputError(f"{p}.phases", f"expected {r} phases")
        phases = [_rational(q, f"{p}.phases[{j}]") for j, q in enumerate(phases)]
        if "coeff" in t:
            c = _obj(t["coeff"], f"{p}.coeff")
            L = _int(_field(c, "conductor", f"{p}.coeff"), f"{p}.coeff.conductor")
            if L < 1:
                raise InputError(f"{p}.coeff.conductor", "must be positive")
            raw = _field(c, "coeffs", f"{p}.coeff")
            if not isinstance(raw, list):
                raise InputError(f"{p}.coeff.coeffs", "expected a list")
            vals = [_rational(x, f"{p}.coeff.coeffs[{j}]") for j, x in enumerate(raw)]
            coeff = CycloNumber.from_exponents(L, dict(enumerate(vals)))
        else:
            coeff = CycloNumber.gaussian(_rational(t.get("re", 0), f"{p}.re"),
                                         _rational(t.get("im", 0), f"{p}.im"))
        pts.append((GroupPoint(tuple(finite), tuple(phases)), coeff))
    for i, n in enumerate(inv):
        if n < 1:
            raise InputError(f"{path}.invariants[{i}]", "must be positive")
    return TrigPoly(inv, r, pts)


def _detect(d, path="$"):
    _obj(d, path)
    if "slices" in d:
        return "product", parse_slicemap(d, path)
    if "K" in d:
        return "finite", parse_finite_set(d, path)
    if "kind" in d or "pieces" in d:
        return "torus", parse_setexpr(d, path)
    raise InputError(path, "expected a SetExpr, a slice map or a finite set {\"finiteDual\", \"K\"}")


# -- decisions -------------------------------------------------------------

def _torus_negative(S: SetExpr, witness: Coset, with_polynomial: bool = True) -> dict:
    cert = {"type": "torus", "claim": "not-ubiquitous", "set": S.to_json(), "coset": witness.to_json()}
    if with_polynomial:
        found = set_witness_polynomial(S)
        assert found is not None
        poly, m0 = found
        cert["polynomial"] = poly.to_json()
        cert["nonzeroAt"] = {"char": [], "m": list(m0)}
    return cert


def _finite_nonzero(G: FiniteGroup, poly: TrigPoly):
    return next(b for b in G.elements if not evaluate(poly, Character(b, ())).is_zero())


def _decide(req: Request, word_pos: str, word_neg: str) -> Response:
    kind, K = _detect(req.payload)
    body: dict = {"command": req.command, "parameters": req.parameters(), "input": kind}
    if kind == "torus":
        v = ubiquity_decide(K)
        if v.ubiquitous:
            body.update(verdict=word_pos, certificate={"type": "torus", "claim": "ubiquitous", "set": K.to_json()})
            return Response(body, EXIT_OK)
        body.update(verdict=word_neg, certificate=_torus_negative(K, v.witness))
        return Response(body, EXIT_NEGATIVE)
    if kind == "product":
        mv = decide_main(K)
        body["perSlice"] = [{"char": list(b), **sv.to_json()} for b, sv in mv.per_slice.items()]
        if mv.ubiquitous.ubiquitous:
            body.update(verdict=word_pos, certificate={"type": "product", "claim": "ubiquitous", "set": K.to_json()})
            return Response(body, EXIT_OK)
        b, m = mv.nonzero_at
        body.update(verdict=word_neg, certificate={
            "type": "product", "claim": "not-ubiquitous", "set": K.to_json(),
            "coset": mv.ubiquitous.witness.to_json(), "polynomial": mv.polynomial.to_json(),
            "nonzeroAt": {"char": list(b), "m": list(m)}})
        return Response(body, EXIT_NEGATIVE)
    G, members = K.group, K.K
    spd = spd_test_finite(G, members)
    ubi = ubiquity_bruteforce_finite(G, members)
    if spd.spd != ubi.ubiquitous:
        raise RuntimeError("rank test and coset enumeration disagree")
    body["rank"] = spd.rank
    if spd.spd:
        body.update(verdict=word_pos, certificate={"type": "finite", "claim": "ubiquitous", "set": K.to_json()})
        return Response(body, EXIT_OK)
    body.update(verdict=word_neg, certificate={
        "type": "finite", "claim": "not-ubiquitous", "set": K.to_json(),
        "coset": ubi.witness.to_json(), "polynomial": spd.polynomial.to_json(),
        "nonzeroAt": {"char": list(_finite_nonzero(G, spd.polynomial)), "m": []}})
    return Response(body, EXIT_NEGATIVE)


# -- certificate re-verification ------------------------------------------

def _slice_in_zero_set(S: SetExpr, p: TrigPoly) -> bool:
    Z = zero_set(p)
    if S.kind == "union":
        return all(coset_within_union(c, Z) for c in S.union.pieces)
    return covers_group(CosetUnion(list(S.union.pieces) + list(Z.pieces), S.r)) is None


def _check_polynomial(cert, path, kind, K, checks):
    poly = parse_trigpoly(cert["polynomial"], f"{path}.polynomial")
    where = _field(cert, "nonzeroAt", path)
    if kind == "torus":
        if poly.invariants or poly.r != K.r:
            raise InputError(f"{path}.polynomial", f"expected a polynomial on T^{K.r}")
        m = _ints(_field(where, "m", f"{path}.nonzeroAt"), f"{path}.nonzeroAt.m", K.r)
        checks["polynomialVanishesOnSet"] = _slice_in_zero_set(K, poly)
        checks["polynomialNonzero"] = not evaluate(poly, m).is_zero()
    elif kind == "product":
        if poly.invariants != K.invariants or poly.r != K.r:
            raise InputError(f"{path}.polynomial", "does not live on the group of the slice map")
        b = _element(K.group, _field(where, "char", f"{path}.nonzeroAt"), f"{path}.nonzeroAt.char")
        m = _ints(_field(where, "m", f"{path}.nonzeroAt"), f"{path}.nonzeroAt.m", K.r)
        checks["polynomialVanishesOnSet"] = all(
            _slice_in_zero_set(S, poly.restrict(c)) for c, S in K.slices.items())
        checks["polynomialNonzero"] = not evaluate(poly, Character(b, tuple(m))).is_zero()
    else:
        if poly.invariants != K.group.invariants or poly.r != 0:
            raise InputError(f"{path}.polynomial", "does not live on the finite group")
        b = _element(K.group, _field(where, "char", f"{path}.nonzeroAt"), f"{path}.nonzeroAt.char")
        checks["polynomialVanishesOnSet"] = all(
            evaluate(poly, Character(c, ())).is_zero() for c in K.K)
        checks["polynomialNonzero"] = not evaluate(poly, Character(b, ())).is_zero()


def _check_coset(cert, path, kind, K, checks):
    p = f"{path}.coset"
    if kind == "torus":
        C = parse_coset(cert["coset"], p, K.r)
        checks["cosetFiniteIndex"] = C.is_finite_index
        checks["cosetDisjoint"] = coset_disjoint_from(C, K)
    elif kind == "product":
        C = parse_coset(cert["coset"], p, len(K.invariants) + K.r)
        checks["cosetFiniteIndex"] = C.is_finite_index
        torsion = all(t in C.subgroup for t in K.lattice_torsion())
        checks["cosetContainsTorsion"] = torsion
        checks["cosetDisjoint"] = torsion and K.coset_disjoint(C)
    else:
        G = K.group
        d = _obj(cert["coset"], p)
        shift = _element(G, _field(d, "shift", p), f"{p}.shift")
        sub = _field(d, "subgroup", p)
        if not isinstance(sub, list):
            raise InputError(f"{p}.subgroup", "expected a list of elements")
        H = frozenset(_element(G, h, f"{p}.subgroup[{i}]") for i, h in enumerate(sub))
        checks["cosetIsSubgroupCoset"] = generated_subgroup(G, H) == H
        members = set(K.K)
        checks["cosetDisjoint"] = all(G.add(shift, h) not in members for h in H)


def verify_certificate(cert, path="$.certificate") -> dict:
    _obj(cert, path)
    kind = _field(cert, "type", path)
    claim = _field(cert, "claim", path)
    if kind not in ("torus", "product", "finite"):
        raise InputError(f"{path}.type", "expected torus, product or finite")
    if claim not in ("ubiquitous", "not-ubiquitous"):
        raise InputError(f"{path}.claim", "expected ubiquitous or not-ubiquitous")
    set_path = f"{path}.set"
    raw = _field(cert, "set", path)
    K = {"torus": parse_setexpr, "product": parse_slicemap, "finite": parse_finite_set}[kind](raw, set_path)
    checks: dict = {}
    if claim == "ubiquitous":
        if kind == "torus":
            checks["redecided"] = ubiquity_decide(K).ubiquitous
        elif kind == "product":
            checks["redecided"] = decide_main(K, with_polynomial=False).ubiquitous.ubiquitous
        else:
            checks["redecided"] = spd_test_finite(K.group, K.K).spd
        return checks
    if "coset" not in cert and "polynomial" not in cert:
        raise InputError(path, "a negative certificate needs a coset or a polynomial")
    if "coset" in cert:
        _check_coset(cert, path, kind, K, checks)
    if "polynomial" in cert:
        _check_polynomial(cert, path, kind, K, checks)
    return checks


def _witness(req: Request) -> Response:
    d = _obj(req.payload, "$")
    cert, path = (d["certificate"], "$.certificate") if "certificate" in d else (d, "$")
    checks = verify_certificate(cert, path)
    ok = all(checks.values())
    body = {"command": req.command, "parameters": req.parameters(), "checks": checks,
            "claim": cert["claim"], "verdict": "verified" if ok else "rejected"}
    return Response(body, EXIT_OK if ok else EXIT_NEGATIVE)


# -- other commands --------------------------------------------------------

def _zero_set(req: Request) -> Response:
    d = _obj(req.payload, "$")
    if "polynomial" in d:
        poly = parse_trigpoly(d["polynomial"], "$.polynomial")
        path = "$.polynomial"
    else:
        poly, path = parse_trigpoly(d, "$"), "$"
    if poly.r < 1:
        raise InputError(f"{path}.r", "zero sets are computed in Z^r with r >= 1")
    body: dict = {"command": req.command, "parameters": req.parameters()}
    if poly.invariants:
        G = FiniteGroup(poly.invariants)
        if "char" not in d:
            raise InputError("$.char", "needed to pick a slice of a polynomial with a finite part")
        b = _element(G, d["char"], "$.char")
        body["char"] = list(b)
        poly = poly.restrict(b)
    try:
        Z = zero_set(poly)
    except ValueError as exc:
        body.update(verdict="inconclusive", reason=str(exc))
        return Response(body, EXIT_INCONCLUSIVE)
    body.update(verdict="decided", period=poly.period(), zeroSet=SetExpr("union", Z).to_json())
    return Response(body, EXIT_OK)


def _predicate(d, path):
    name = _field(d, "predicate", path)
    if name == "staircase":
        return StaircaseSet(bool(d.get("swapped", False))), 2
    if name == "half-line":
        return HalfLine(_int(d.get("start", 0), f"{path}.start")), 1
    raise InputError(f"{path}.predicate", "expected \"staircase\" or \"half-line\"")


def _scan(req: Request) -> Response:
    d = _obj(req.payload, "$")
    body: dict = {"command": req.command, "parameters": req.parameters()}
    if "predicate" in d:
        K, r = _predicate(d, "$")
        res = ubiquity_scan(K, r, (), req.max_index, req.radius)
        body["input"] = "predicate"
    else:
        kind, K = _detect(d)
        if kind == "finite":
            raise InputError("$", "finite sets are decided exactly; use decide-ubiquity")
        inv = K.invariants if kind == "product" else ()
        res = ubiquity_scan(K, K.r, inv, req.max_index, req.radius)
        body["input"] = kind
    body.update(res.to_json())
    if res.refuted:
        body["certificate"] = {"type": body["input"], "claim": "not-ubiquitous",
                               "set": K.to_json(), "coset": res.witness.to_json()}
        return Response(body, EXIT_NEGATIVE)
    return Response(body, EXIT_INCONCLUSIVE)


def _random_points(rng: random.Random, invariants, r, n, den=12):
    seen, out = set(), []
    space = 1
    for q in invariants:
        space *= q
    space *= den ** r
    n = min(n, space)
    while len(out) < n:
        finite = tuple(rng.randrange(q) for q in invariants)
        phases = tuple(Fraction(rng.randrange(den), den) for _ in range(r))
        if (finite, phases) not in seen:
            seen.add((finite, phases))
            out.append(GroupPoint(finite, phases))
    return out


def _synth_verify(req: Request) -> Response:
    d = _obj(req.payload, "$")
    inv = _ints(d.get("invariants", []), "$.invariants")
    G = parse_group({"invariants": inv}, "$")
    r = _rank(d, "$")
    support = _field(d, "support", "$")
    if not isinstance(support, list) or not support:
        raise InputError("$.support", "expected a nonempty list of characters")
    chars = []
    for i, g in enumerate(support):
        p = f"$.support[{i}]"
        b = _element(G, _obj(g, p).get("finite", []), f"{p}.finite")
        m = _ints(_field(g, "m", p), f"{p}.m", r)
        chars.append(Character(b, tuple(m)))
    weights = _field(d, "weights", "$")
    if not isinstance(weights, list) or len(weights) != len(chars):
        raise InputError("$.weights", "expected one weight per character")
    w = []
    for i, x in enumerate(weights):
        if isinstance(x, float):
            val = x
        else:
            val = float(_rational(x, f"$.weights[{i}]"))
        if not val > 0:
            raise InputError(f"$.weights[{i}]", "weights must be positive")
        w.append(val)
    f = synth(chars, w, G.invariants, r)
    rng = random.Random(req.seed)
    if "points" in d:
        pts_raw = d["points"]
        if not isinstance(pts_raw, list):
            raise InputError("$.points", "expected a list")
        points = []
        for i, x in enumerate(pts_raw):
            p = f"$.points[{i}]"
            fin = _element(G, _obj(x, p).get("finite", []), f"{p}.finite")
            ph = x.get("phases", [])
            if not isinstance(ph, list) or len(ph) != r:
                raise InputError(f"{p}.phases", f"expected {r} phases")
            points.append(GroupPoint(fin, tuple(_rational(q, f"{p}.phases[{j}]") for j, q in enumerate(ph))))
    else:
        n = _int(d.get("n", 6), "$.n")
        points = _random_points(rng, G.invariants, r, n)
    if "coefficients" in d:
        raw = d["coefficients"]
        if not isinstance(raw, list) or len(raw) != len(points):
            raise InputError("$.coefficients", "expected one [re, im] pair per point")
        c = []
        for i, z in enumerate(raw):
            if not isinstance(z, list) or len(z) != 2 or not all(isinstance(t, (int, float)) for t in z):
                raise InputError(f"$.coefficients[{i}]", "expected [re, im]")
            c.append(complex(z[0], z[1]))
    else:
        c = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in points]
    try:
        M = gram_matrix(f, points)
    except ValueError as exc:
        raise InputError("$.points", str(exc)) from None
    report = psd_check(M)
    residual = identity_check(f, points, c)
    ok = report.min_eigenvalue >= -req.tolerance and residual < req.tolerance
    body = {"command": req.command, "parameters": req.parameters(), "n": len(points),
            "minEigenvalue": report.min_eigenvalue, "residual": residual,
            "verdict": "verified" if ok else "failed"}
    return Response(body, EXIT_OK if ok else EXIT_NEGATIVE)


def _staircase(req: Request) -> Response:
    N = req.truncation
    if isinstance(req.payload, dict) and "N" in req.payload:
        N = _int(req.payload["N"], "$.N")
    if N < 1:
        raise InputError("$.N", "truncation must be at least 1")
    rep = staircase_check(N, req.max_index, req.radius)
    body = {"command": req.command, "parameters": {**req.parameters(), "truncation": N}, **rep.to_json()}
    if rep.ok:
        body["verdict"] = "verified"
        return Response(body, EXIT_OK)
    if rep.scan.refuted or not rep.k1_empty:
        body["verdict"] = "failed"
        return Response(body, EXIT_NEGATIVE)
    body["verdict"] = "inconclusive"
    return Response(body, EXIT_INCONCLUSIVE)


def run(req: Request) -> Response:
    if req.command not in COMMANDS:
        return _error("$", f"unknown command {req.command!r}", req)
    if req.command != "staircase" and req.payload is None:
        return _error("$", "this command needs --input", req)
    try:
        if req.command in ("decide-ubiquity", "decide-spd"):
            words = ("ubiquitous", "not-ubiquitous") if req.command == "decide-ubiquity" else ("spd", "not-spd")
            return _decide(req, *words)
        handler = {"witness": _witness, "zero-set": _zero_set, "scan": _scan,
                   "synth-verify": _synth_verify, "staircase": _staircase}[req.command]
        return handler(req)
    except InputError as exc:
        return _error(exc.path, exc.message, req)
    except RuntimeError as exc:
        body = {"command": req.command, "parameters": req.parameters(),
                "verdict": "inconclusive", "reason": str(exc)}
        return Response(body, EXIT_INCONCLUSIVE)


def _error(path, message, req: Request) -> Response:
    return Response({"command": req.command, "verdict": "input-error",
                     "error": {"path": path, "message": message}}, EXIT_INPUT)


# -- entry point -----------------------------------------------------------

def render(body: dict, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(body, sort_keys=True, indent=2)
    lines = [f"verdict: {body.get('verdict')}"]

    def walk(prefix, v):
        if isinstance(v, dict):
            for k in sorted(v):
                walk(f"{prefix}.{k}" if prefix else k, v[k])
        elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
            for i, x in enumerate(v):
                walk(f"{prefix}[{i}]", x)
        else:
            lines.append(f"{prefix}: {json.dumps(v)}")

    walk("", {k: v for k, v in body.items() if k != "verdict"})
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not "inconclusive"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="spdcheck", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--input", metavar="FILE|-", help="JSON payload; '-' reads stdin")
    ap.add_argument("--max-index", type=int, default=12)
    ap.add_argument("--radius", type=int, default=1000)
    ap.add_argument("--tolerance", type=float, default=1e-9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--truncation", type=int, default=20, help="staircase truncation N")
    ap.add_argument("--format", choices=("json", "text"), default="json")
    return ap


def _load(source: str | None):
    if source is None:
        return None
    try:
        text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    except OSError as exc:
        raise InputError("$", f"cannot read input: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    req = Request(args.command, None, args.max_index, args.radius, args.tolerance, args.seed, args.truncation)
    if args.max_index < 1 or args.radius < 0:
        resp = _error("$", "--max-index must be >= 1 and --radius >= 0", req)
    else:
        try:
            req.payload = _load(args.input)
            resp = run(req)
        except InputError as exc:
            resp = _error(exc.path, exc.message, req)
    print(render(resp.body, args.format))
    return resp.exit_code


if __name__ == "__main__":
    sys.exit(main())

"""Exact arithmetic in cyclotomic fields Q(zeta_L).

A number is stored in the power basis ``1, z, ..., z^(phi(L)-1)`` reduced
modulo the L-th cyclotomic polynomial, with integer numerators over a
single positive denominator.  Since Q(zeta_L) is a field, a number is zero
exactly when every numerator is zero.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping


def lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // math.gcd(out, n)
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _exact_div(num, cyclotomic_poly(d))
    return tuple(num)


def _exact_div(a: list[int], b: tuple[int, ...]) -> list[int]:
    a = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] // b[-1]
        q[i - db] = c
        if c:
            for j in range(db + 1):
                a[i - db + j] -= c * b[j]
    assert not any(a[:db]), "non-exact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic_poly(n)) - 1


def _reduce(a: list[int], n: int) -> list[int]:
    """Reduce an integer polynomial modulo Phi_n (monic, so stays integral)."""
    phi = cyclotomic_poly(n)
    d = len(phi) - 1
    a = list(a)
    for i in range(len(a) - 1, d - 1, -1):
        c = a[i]
        if c:
            base = i - d
            for j in range(d):
                if phi[j]:
                    a[base + j] -= c * phi[j]
            a[i] = 0
    a = a[:d]
    if len(a) < d:
        a += [0] * (d - len(a))
    return a


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums, den = [-x for x in nums], -den
    g = den
    for x in nums:
        if g == 1:
            break
        g = math.gcd(g, x)
    if g > 1:
        nums = [x // g for x in nums]
        den //= g
    return tuple(nums), den


class CycloNumber:
    """Element of Q(zeta_L) with exact zero testing."""

    __slots__ = ("conductor", "nums", "den")

    def __init__(self, conductor: int, nums: Iterable[int], den: int = 1, _normalized=False):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        nums = list(nums)
        if not _normalized:
            nums = _reduce(nums, conductor)
            nums, den = _normalize(nums, den)
        self.conductor = conductor
        self.nums = tuple(nums)
        self.den = den

    # -- constructors -------------------------------------------------
    @classmethod
    def from_exponents(cls, conductor: int, terms: Mapping[int, Fraction | int]) -> CycloNumber:
        """Build ``sum c_k zeta_L^k`` from a map ``k -> c_k``."""
        den = 1
        for c in terms.values():
            den = lcm(den, Fraction(c).denominator)
        arr = [0] * conductor
        for k, c in terms.items():
            c = Fraction(c)
            arr[k % conductor] += c.numerator * (den // c.denominator)
        return cls(conductor, arr, den)

    @classmethod
    def rational(cls, x, conductor: int = 1) -> CycloNumber:
        x = Fraction(x)
        return cls(conductor, [x.numerator], x.denominator)

    @classmethod
    def gaussian(cls, re, im) -> CycloNumber:
        """``re + i*im`` with rational parts (i = zeta_4)."""
        return cls.from_exponents(4, {0: Fraction(re), 1: Fraction(im)})

    @classmethod
    def root_of_unity(cls, phase: Fraction, conductor: int | None = None) -> CycloNumber:
        """``exp(2 pi i * phase)`` for a rational phase."""
        phase = Fraction(phase)
        L = conductor or phase.denominator
        if L % phase.denominator:
            raise ValueError(f"conductor {L} cannot hold phase {phase}")
        return cls.from_exponents(L, {int(phase * L) % L: 1})

    @classmethod
    def zero(cls, conductor: int = 1) -> CycloNumber:
        return cls(conductor, [0] * totient(conductor), 1, _normalized=True)

    @classmethod
    def one(cls, conductor: int = 1) -> CycloNumber:
        return cls.rational(1, conductor)

    # -- structure ----------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(x, self.den) for x in self.nums)

    def is_zero(self) -> bool:
        return not any(self.nums)

    def __bool__(self) -> bool:
        return any(self.nums)

    def lift(self, conductor: int) -> CycloNumber:
        """Same number viewed inside Q(zeta_M) for a multiple M of the conductor."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"{conductor} is not a multiple of {self.conductor}")
        step = conductor // self.conductor
        arr = [0] * (step * (len(self.nums) - 1) + 1) if self.nums else [0]
        for k, x in enumerate(self.nums):
            arr[k * step] = x
        return CycloNumber(conductor, arr, self.den)

    def _common(self, other) -> tuple[CycloNumber, CycloNumber]:
        if not isinstance(other, CycloNumber):
            other = CycloNumber.rational(other, self.conductor)
        if other.conductor == self.conductor:
            return self, other
        L = lcm(self.conductor, other.conductor)
        return self.lift(L), other.lift(L)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other) -> CycloNumber:
        a, b = self._common(other)
        den = a.den * b.den // math.gcd(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        nums, den = _normalize([x * fa + y * fb for x, y in zip(a.nums, b.nums)], den)
        return CycloNumber(a.conductor, nums, den, _normalized=True)

    __radd__ = __add__

    def __neg__(self) -> CycloNumber:
        return CycloNumber(self.conductor, [-x for x in self.nums], self.den, _normalized=True)

    def __sub__(self, other) -> CycloNumber:
        a, b = self._common(other)
        return a + (-b)

    def __rsub__(self, other) -> CycloNumber:
        return (-self) + other

    def __mul__(self, other) -> CycloNumber:
        a, b = self._common(other)
        an, bn = a.nums, b.nums
        out = [0] * (len(an) + len(bn) - 1) if an and bn else [0]
        for i, x in enumerate(an):
            if x:
                for j, y in enumerate(bn):
                    if y:
                        out[i + j] += x * y
        return CycloNumber(a.conductor, out, a.den * b.den)

    __rmul__ = __mul__

    def conjugate(self) -> CycloNumber:
        L = self.conductor
        arr = [0] * L
        for k, x in enumerate(self.nums):
            arr[(-k) % L] += x
        return CycloNumber(L, arr, self.den)

    def inverse(self) -> CycloNumber:
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        L = self.conductor
        # a * s + Phi * t = 1 over Q[x]
        s = _poly_inverse_mod([Fraction(x, self.den) for x in self.nums],
                              [Fraction(c) for c in cyclotomic_poly(L)])
        return _from_fraction_poly(L, s)

    def __truediv__(self, other) -> CycloNumber:
        if not isinstance(other, CycloNumber):
            other = CycloNumber.rational(other, self.conductor)
        return self * other.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CycloNumber.rational(other)
        if not isinstance(other, CycloNumber):
            return NotImplemented
        a, b = self._common(other)
        return a.den == b.den and a.nums == b.nums

    __hash__ = None

    def to_complex(self) -> complex:
        L = self.conductor
        z = sum(float(Fraction(x, self.den)) * cmath.exp(2j * math.pi * k / L)
                for k, x in enumerate(self.nums) if x)
        return complex(z)

    def __complex__(self) -> complex:
        return self.to_complex()

    def __repr__(self) -> str:
        return f"CycloNumber({self.conductor}, {list(self.coeffs)})"

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> CycloNumber:
        L = int(data["conductor"])
        return cls.from_exponents(L, {k: Fraction(c) for k, c in enumerate(data["coeffs"])})


def _from_fraction_poly(L: int, coeffs: list[Fraction]) -> CycloNumber:
    den = 1
    for c in coeffs:
        den = lcm(den, c.denominator)
    return CycloNumber(L, [c.numerator * (den // c.denominator) for c in coeffs], den)


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a: list[Fraction], b: list[Fraction]):
    a = _poly_trim(list(a))
    b = _poly_trim(list(b))
    if len(a) < len(b):
        return [], a
    q = [Fraction(0)] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = c
        for j, y in enumerate(b):
            a[shift + j] -= c * y
        _poly_trim(a)
    return q, a


def _poly_sub_mul(a, q, b):
    # a - q*b
    out = list(a) + [Fraction(0)] * max(0, len(q) + len(b) - 1 - len(a))
    for i, x in enumerate(q):
        for j, y in enumerate(b):
            out[i + j] -= x * y
    return _poly_trim(out)


def _poly_inverse_mod(a: list[Fraction], m: list[Fraction]) -> list[Fraction]:
    """Inverse of ``a`` modulo the irreducible polynomial ``m``."""
    r0, r1 = _poly_trim(list(m)), _poly_trim(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, rem = _poly_divmod(r0, r1)
        r0, r1 = r1, rem
        s0, s1 = s1, _poly_sub_mul(s0, q, s1)
    if not r1:
        raise ZeroDivisionError("not invertible")
    c = r1[0]
    return [x / c for x in s1]

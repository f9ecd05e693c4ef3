"""Exact arithmetic in cyclotomic fields Q(zeta_M).

Elements are stored as coefficient vectors of length deg(Phi_M) in the power
basis 1, zeta, ..., zeta^(d-1), always reduced modulo the cyclotomic
polynomial.  The complex embedding sends zeta to exp(2*pi*i/M).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from numbers import Rational

import mpmath
from sympy import QQ, Symbol, cyclotomic_poly
from sympy.polys.euclidtools import dup_invert

from .errors import DivisionError


class CyclotomicField:
    """The field Q(zeta_M) with a fixed primitive root zeta = e^{2 pi i/M}."""

    def __init__(self, M: int):
        if M < 1:
            raise ValueError("cyclotomic order must be positive")
        self.M = M
        poly = cyclotomic_poly(M, Symbol("x"), polys=True)
        # monic, highest degree first
        self._phi = [int(c) for c in poly.all_coeffs()]
        self.degree = len(self._phi) - 1
        d = self.degree
        # zeta^(d + i) expressed in the power basis, for i < d - 1
        low = [Fraction(-c) for c in reversed(self._phi[1:])]
        self._overflow = []
        cur = low
        for _ in range(max(d - 1, 0)):
            self._overflow.append(tuple(cur))
            nxt = [Fraction(0)] + cur[:-1]
            top = cur[-1]
            if top:
                nxt = [a + top * b for a, b in zip(nxt, low)]
            cur = nxt
        self._powers = {}

    def __repr__(self):
        return f"CyclotomicField({self.M})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.M == self.M

    def __hash__(self):
        return hash(("CyclotomicField", self.M))

    def _reduce(self, raw):
        d = self.degree
        out = list(raw[:d]) + [Fraction(0)] * max(0, d - len(raw))
        for i, c in enumerate(raw[d:]):
            if c:
                for j, r in enumerate(self._overflow[i]):
                    if r:
                        out[j] += c * r
        return tuple(out)

    def element(self, coeffs) -> "CyclotomicValue":
        return CyclotomicValue(self, self._reduce([Fraction(c) for c in coeffs]))

    def zero(self) -> "CyclotomicValue":
        return CyclotomicValue(self, (Fraction(0),) * self.degree)

    def one(self) -> "CyclotomicValue":
        return self.rational(1)

    def rational(self, r) -> "CyclotomicValue":
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(r)
        return CyclotomicValue(self, tuple(coeffs))

    def zeta_power(self, j: int) -> "CyclotomicValue":
        """zeta^j for any integer j (reduced modulo M first)."""
        j %= self.M
        cached = self._powers.get(j)
        if cached is None:
            raw = [Fraction(0)] * (j + 1)
            raw[j] = Fraction(1)
            if j < 2 * self.degree - 1:
                cached = CyclotomicValue(self, self._reduce(raw))
            else:
                half = self.zeta_power(j // 2)
                cached = half * half
                if j % 2:
                    cached = cached * self.zeta_power(1)
            self._powers[j] = cached
        return cached

    def coerce(self, x) -> "CyclotomicValue":
        if isinstance(x, CyclotomicValue):
            if x.field != self:
                raise TypeError("mixing elements of different cyclotomic fields")
            return x
        if isinstance(x, (int, Rational)):
            return self.rational(x)
        raise TypeError(f"cannot coerce {type(x).__name__} into {self!r}")


@lru_cache(maxsize=None)
def cyclotomic_field(M: int) -> CyclotomicField:
    return CyclotomicField(M)


class CyclotomicValue:
    """An element of Q(zeta_M), immutable and hashable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: CyclotomicField, coeffs):
        self.field = field
        self.coeffs = tuple(coeffs)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            o = self.field.coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicValue(self.field, tuple(a + b for a, b in zip(self.coeffs, o.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        try:
            o = self.field.coerce(other)
        except TypeError:
            return NotImplemented
        return CyclotomicValue(self.field, tuple(a - b for a, b in zip(self.coeffs, o.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Rational)):
            r = Fraction(other)
            return CyclotomicValue(self.field, tuple(a * r for a in self.coeffs))
        if not isinstance(other, CyclotomicValue):
            return NotImplemented
        o = self.field.coerce(other)
        a, b = self.coeffs, o.coeffs
        raw = [Fraction(0)] * (2 * len(a) - 1 if a else 0)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        raw[i + j] += x * y
        return CyclotomicValue(self.field, self.field._reduce(raw))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicValue":
        if self.is_zero():
            raise DivisionError(f"division by zero in Q(zeta_{self.field.M})")
        f = [QQ(c.numerator, c.denominator) for c in reversed(self.coeffs)]
        while f and not f[0]:
            f.pop(0)
        g = [QQ(c) for c in self.field._phi]
        inv = dup_invert(f, g, QQ)
        coeffs = [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(inv)]
        return self.field.element(coeffs)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise DivisionError(f"division by zero in Q(zeta_{self.field.M})")
            return self * (1 / Fraction(other))
        if not isinstance(other, CyclotomicValue):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.field.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # comparison -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, CyclotomicValue):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Rational)):
            return self.coeffs == self.field.rational(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.field.M, self.coeffs))

    # conversions ----------------------------------------------------------
    def conjugate(self) -> "CyclotomicValue":
        """Complex conjugation, i.e. the Galois automorphism zeta -> zeta^-1."""
        out = self.field.zero()
        for j, c in enumerate(self.coeffs):
            if c:
                out = out + self.field.zeta_power(-j) * c
        return out

    def to_complex(self, dps: int = 30):
        with mpmath.workdps(dps + 5):
            z = mpmath.expjpi(mpmath.mpf(2) / self.field.M)
            acc = mpmath.mpc(0)
            zp = mpmath.mpc(1)
            for c in self.coeffs:
                if c:
                    acc += zp * mpmath.mpf(c.numerator) / c.denominator
                zp *= z
        return +acc

    def __complex__(self):
        return complex(self.to_complex(20))

    def as_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        parts = []
        for j, c in enumerate(self.coeffs):
            if c:
                parts.append(f"{c}" if j == 0 else f"({c})*z^{j}")
        body = " + ".join(parts) if parts else "0"
        return f"<{body} in Q(z_{self.field.M})>"

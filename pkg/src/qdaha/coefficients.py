"""Coefficient domains for the double affine Hecke algebra actions.

A domain fixes the values of q and t_o and knows how to produce their
fractional powers.  Three are provided:

* :class:`ExactDomain` works in the rational function field Q(u, v_o) with
  u = q^(1/(2p)) and v_o = t_o^(1/2), or in Q(u) alone when t_o = q_o^(k_o)
  is substituted for rational k_o;
* :class:`NumericDomain` works with mpmath complex numbers for a chosen
  branch of log q and complex k_o;
* :class:`CyclotomicDomain` works in Q(zeta_{4N}) with q = zeta_{4N}^e and
  integer k_o.

Every domain has a ``star()`` twin in which q and all t_o are inverted; for
exact domains the twin lives in the same field.
"""

from __future__ import annotations

import contextlib
from fractions import Fraction

import mpmath
from sympy import QQ
from sympy.polys.fields import field

from .cyclotomic import CyclotomicValue, cyclotomic_field
from .errors import DomainError
from .rootdata import MultiplicityFunction, RootSystemData, SpectralVector


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class CoefficientDomain:
    """Interface shared by the concrete domains."""

    R: RootSystemData
    exact: bool = True

    def coerce(self, x):
        raise NotImplementedError

    def qpow(self, r):
        raise NotImplementedError

    def tpow(self, orbit, r):
        """t_o^r."""
        raise NotImplementedError

    def star(self) -> "CoefficientDomain":
        raise NotImplementedError

    def conj(self, c):
        """The image of a coefficient under q -> q^-1, t -> t^-1."""
        raise NotImplementedError

    def is_zero(self, c) -> bool:
        return c == 0

    def to_complex(self, c, dps=30):
        raise NotImplementedError

    def fmt(self, c) -> str:
        return str(c)

    def working(self):
        """Context for arithmetic on coefficients (sets mpmath precision for numeric domains)."""
        return contextlib.nullcontext()

    # derived -----------------------------------------------------------
    @property
    def zero(self):
        return self.coerce(0)

    @property
    def one(self):
        return self.coerce(1)

    def t_half(self, orbit):
        return self.tpow(orbit, Fraction(1, 2))

    def t_half_root(self, alpha):
        return self.t_half(self.R.orbit_of(alpha))

    def spectral_power(self, a, z: SpectralVector):
        """X_a evaluated at q^z for a spectral vector z = base + sum k_o z_o.

        q^((a, z)) = q^((a, base)) * prod_o t_o^((a, z_o)/nu_o).
        """
        R = self.R
        out = self.qpow(R.inner(a, z.base))
        for o, v in z.parts:
            r = _frac(R.inner(a, v)) / R.orbit_nu(o)
            if r:
                out = out * self.tpow(o, r)
        return out


class ExactDomain(CoefficientDomain):
    """Q(u, v_o) with u = q^(1/(2p)), v_o = t_o^(1/2), or Q(u) with t_o = q_o^(k_o)."""

    exact = True

    def __init__(self, R: RootSystemData, k: MultiplicityFunction | None = None, *, _field=None, inverted=False):
        self.R = R
        self.k = k
        self.inverted = inverted
        self.scale = 2 * R.p  # exponent of u in q
        if _field is None:
            names = ["u"] + ([] if k is not None else [f"v{o}" for o in R.orbits])
            K, *gens = field(",".join(names), QQ)
            _field = (K, gens)
        self.field, gens = _field
        self.u = gens[0]
        self.v = {} if k is not None else dict(zip(R.orbits, gens[1:]))
        if k is not None:
            for o in R.orbits:
                e = Fraction(k[o]) * R.orbit_nu(o) * self.scale / 2
                if e.denominator != 1:
                    raise DomainError(f"t^(1/2) = q^({Fraction(k[o]) * R.orbit_nu(o) / 2}) is not a power of q^(1/{self.scale})")

    def __repr__(self):
        tag = "formal t" if self.k is None else f"k={self.k.as_dict()}"
        return f"ExactDomain({self.R!r}, {tag}{', inverted' if self.inverted else ''})"

    def coerce(self, x):
        if isinstance(x, Fraction):
            return self.field(QQ(x.numerator, x.denominator))
        return self.field(x)

    def _u_power(self, e: Fraction):
        e = e * self.scale
        if e.denominator != 1:
            raise DomainError(f"q-exponent {e / self.scale} is not a multiple of 1/{self.scale}")
        e = int(e)
        return self.u ** (-e if self.inverted else e)

    def qpow(self, r):
        return self._u_power(_frac(r))

    def tpow(self, orbit, r):
        r = _frac(r)
        if self.k is not None:
            return self._u_power(Fraction(self.k[orbit]) * self.R.orbit_nu(orbit) * r)
        e = 2 * r
        if e.denominator != 1:
            raise DomainError(f"t-exponent {r} is not a multiple of 1/2")
        e = int(e)
        return self.v[orbit] ** (-e if self.inverted else e)

    def star(self) -> "ExactDomain":
        return ExactDomain(self.R, self.k, _field=(self.field, [self.u, *self.v.values()]), inverted=not self.inverted)

    def conj(self, c):
        gens = [self.u, *self.v.values()]

        def flip(poly):
            acc = self.field.zero
            for mono, co in poly.terms():
                term = self.field(co)
                for g, e in zip(gens, mono):
                    if e:
                        term = term * g ** (-e)
                acc = acc + term
            return acc

        return flip(c.numer) / flip(c.denom)

    def to_complex(self, c, dps=30, q=None, t=None):
        """Numeric value for given q (and t_o per orbit when formal)."""
        if q is None:
            raise DomainError("numeric evaluation of an exact coefficient needs q")
        with mpmath.workdps(dps + 10):
            qv = mpmath.mpmathify(q)
            uval = qv ** (mpmath.mpf(1) / self.scale)
            vals = [uval]
            for o in self.v:
                vals.append(mpmath.sqrt(mpmath.mpmathify(t[o])))
            num = c.numer
            den = c.denom
            ev = lambda poly: sum(
                (mpmath.mpf(int(co.numerator)) / int(co.denominator)) * mpmath.fprod(x ** e for x, e in zip(vals, mono))
                for mono, co in poly.terms()
            )
            return ev(num) / ev(den)

    def fmt(self, c) -> str:
        return str(c)


class NumericDomain(CoefficientDomain):
    """Complex q = exp(log_q) and t_o = q_o^(k_o) = exp(nu_o k_o log_q)."""

    exact = False

    def __init__(self, R: RootSystemData, log_q, k: MultiplicityFunction, dps: int = 30):
        self.R = R
        self.dps = dps
        self.k = k
        with mpmath.workdps(dps + 10):
            self.log_q = mpmath.mpmathify(log_q)
            if abs(mpmath.exp(self.log_q) - 1) < mpmath.mpf(10) ** (-dps):
                raise DomainError("q = 1 is not allowed")
        self.tol = mpmath.mpf(10) ** (-(dps - 3))

    @classmethod
    def from_q(cls, R, q, k, dps=30):
        with mpmath.workdps(dps + 10):
            return cls(R, mpmath.log(mpmath.mpmathify(q)), k, dps)

    def __repr__(self):
        return f"NumericDomain({self.R!r}, q={mpmath.nstr(mpmath.exp(self.log_q), 8)}, k={self.k.as_dict()})"

    def working(self):
        return mpmath.workdps(self.dps + 10)

    @property
    def q(self):
        with mpmath.workdps(self.dps + 10):
            return mpmath.exp(self.log_q)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpmathify(x)

    def qpow(self, r):
        with mpmath.workdps(self.dps + 10):
            return mpmath.exp(self.coerce(r) * self.log_q)

    def tpow(self, orbit, r):
        with mpmath.workdps(self.dps + 10):
            return mpmath.exp(self.coerce(r) * self.R.orbit_nu(orbit) * self.coerce(self.k[orbit]) * self.log_q)

    def point_power(self, a, z):
        """X_a at q^z for a numeric vector z."""
        with mpmath.workdps(self.dps + 10):
            return mpmath.exp(self.R.inner(a, [self.coerce(x) for x in z]) * self.log_q)

    def star(self) -> "NumericDomain":
        with self.working():  # negation rounds to the ambient precision
            return NumericDomain(self.R, -self.log_q, self.k, self.dps)

    def conj(self, c):
        raise DomainError("numeric coefficients carry no formal q; recompute in the starred domain")

    def is_zero(self, c, scale=1) -> bool:
        return abs(c) <= self.tol * max(1, abs(scale))

    def to_complex(self, c, dps=30):
        return mpmath.mpmathify(c)

    def fmt(self, c) -> str:
        return mpmath.nstr(mpmath.mpmathify(c), self.dps)


class CyclotomicDomain(CoefficientDomain):
    """q = zeta_M^e inside Q(zeta_M), M = 4N, with integer multiplicities."""

    exact = True

    def __init__(self, R: RootSystemData, N: int, k: MultiplicityFunction, m: int = 1, doubled: bool = False, *, _sign=1):
        from .qseries import RootOfUnity

        self.R = R
        self.mode = RootOfUnity(N, m, doubled)
        self.N = N
        self.k = k
        for o in R.orbits:
            if Fraction(k[o]).denominator != 1:
                raise DomainError("cyclotomic domains need integer multiplicities")
        self.F = cyclotomic_field(self.mode.M)
        self._sign = _sign
        self.e = self.mode.q_exponent * _sign

    def __repr__(self):
        return f"CyclotomicDomain({self.R!r}, N={self.N}, k={self.k.as_dict()}, e={self.e})"

    def coerce(self, x):
        return self.F.coerce(x)

    def qpow(self, r):
        """q^r = zeta_M^(e r); needs e r to be an integer."""
        x = _frac(r) * self.e
        if x.denominator != 1:
            raise DomainError(f"q^{r} is not in Q(zeta_{self.F.M})")
        return self.F.zeta_power(int(x))

    def tpow(self, orbit, r):
        return self.qpow(_frac(r) * self.R.orbit_nu(orbit) * int(self.k[orbit]))

    def star(self) -> "CyclotomicDomain":
        return CyclotomicDomain(self.R, self.N, self.k, self.mode.m, self.mode.doubled, _sign=-self._sign)

    def conj(self, c: CyclotomicValue):
        return c.conjugate()

    def is_zero(self, c) -> bool:
        return c.is_zero()

    def to_complex(self, c, dps=30):
        return c.to_complex(dps)

    def fmt(self, c) -> str:
        return "[" + ",".join(c.as_strings()) + "]"

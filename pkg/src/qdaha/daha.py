"""Polynomial representation of the double affine Hecke algebra and what is built on it.

Conventions.  Weights are integer tuples in the basis of fundamental weights
and X_b is the monomial with exponent b.  For a coefficient domain D (see
:mod:`qdaha.coefficients`) the operators are

* s_j X_c = X_{s_j c} for j >= 1 and s_0 X_c = q^{(c, theta)} X_{s_theta c};
* T_j = t_j^{1/2} s_j + (t_j^{1/2} - t_j^{-1/2}) (X_{a_j} - 1)^{-1} (s_j - 1),
  with X_{a_0} = q X_{-theta};
* an affine element bw acts by X_c -> q^{-(wc, b)} X_{wc};
* Y_b = T_{t_b}, computed through the reduced word t_b = pi s_{i1} ... s_{il}.

With these, Y_a(e_b) = X_a(q^{-b#}) e_b where b# = b - w_b^{-1}(rho_k).
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Iterable, Sequence

import mpmath
import numpy as np

from .coefficients import CoefficientDomain, CyclotomicDomain, ExactDomain, NumericDomain
from .errors import DomainError, GridPoleError, InternalError, NormalFormError, ResonanceError
from .qseries import LaurentPolynomial, QSeries, flat_mu
from .rootdata import (
    AffineElement,
    MultiplicityFunction,
    RootSystemData,
    SpectralVector,
    b_sharp_parts,
    pi_b_decomposition,
    rho_parts,
)

Weight = tuple


# ---------------------------------------------------------------------------
# the polynomial representation


class PolynomialRepresentation:
    """The action of T_j, X_b, Pi and Y_b on Laurent polynomials over a domain."""

    def __init__(self, domain: CoefficientDomain):
        self.D = domain
        self.R = domain.R
        self.rank = domain.R.rank
        self._words: dict = {}

    # helpers -------------------------------------------------------------
    def poly(self, terms: dict) -> LaurentPolynomial:
        return LaurentPolynomial({b: self.D.coerce(c) for b, c in terms.items()}, rank=self.rank)

    def monomial(self, b) -> LaurentPolynomial:
        return LaurentPolynomial.monomial(tuple(b), self.D.one)

    def one(self) -> LaurentPolynomial:
        return self.monomial((0,) * self.rank)

    def _zero_check(self, c, scale) -> bool:
        if isinstance(self.D, NumericDomain):
            return self.D.is_zero(c, scale)
        return self.D.is_zero(c)

    # generators ------------------------------------------------------------
    def s(self, j: int, f: LaurentPolynomial) -> LaurentPolynomial:
        R = self.R
        out = {}
        if j == 0:
            theta = R.theta
            for c, v in f.items():
                d = R.reflect_by(theta, c)
                d = tuple(int(x) for x in d)
                out[d] = out.get(d, self.D.zero) + v * self.D.qpow(R.inner(c, theta))
        else:
            for c, v in f.items():
                d = R.reflect(j - 1, c)
                out[d] = out.get(d, self.D.zero) + v
        return LaurentPolynomial._raw(out, self.rank)

    def X(self, b, f: LaurentPolynomial) -> LaurentPolynomial:
        b = tuple(b)
        return f.map_exponents(lambda c: tuple(x + y for x, y in zip(b, c)))

    def affine(self, g: AffineElement, f: LaurentPolynomial) -> LaurentPolynomial:
        """bw(X_c) = q^{-(wc, b)} X_{wc}; on length-zero elements this is pi."""
        R = self.R
        out = {}
        for c, v in f.items():
            wc = tuple(int(x) for x in g.w.apply(c))
            out[wc] = out.get(wc, self.D.zero) + v * self.D.qpow(-R.inner(wc, g.b))
        return LaurentPolynomial._raw(out, self.rank)

    def _root_data(self, j):
        R = self.R
        if j == 0:
            a = tuple(-x for x in R.theta)
            return a, self.D.qpow(1), self.D.t_half_root(R.theta)
        a = R.simple_roots[j - 1]
        return a, self.D.one, self.D.t_half_root(a)

    def divide(self, g: LaurentPolynomial, j: int) -> LaurentPolynomial:
        """h with h * (kappa X_a - 1) = g, where kappa X_a is X_{a_j}.

        Monomials are grouped into classes c + Z a; inside each class the
        quotient follows from the recursion h_n = kappa h_{n-1} - g_n.
        InternalError if a remainder is left.
        """
        R = self.R
        a, kappa, _ = self._root_data(j)
        norm_a = R.norm2(a)
        classes: dict = {}
        for e, v in g.items():
            n = math.floor(Fraction(2 * R.inner(e, a)) / norm_a / 2)
            base = tuple(int(x - n * y) for x, y in zip(e, a))
            classes.setdefault(base, {})[n] = v
        scale = max((abs(self.D.to_complex(v)) for v in g._terms.values()), default=1) if isinstance(self.D, NumericDomain) else 1
        out = {}
        for base, series in classes.items():
            lo, hi = min(series), max(series)
            h = self.D.zero
            for n in range(lo, hi + 1):
                h = kappa * h - series.get(n, self.D.zero)
                if n < hi:
                    e = tuple(x + n * y for x, y in zip(base, a))
                    if not self._zero_check(h, 0):
                        out[e] = h
            # the would-be coefficient at n = hi must vanish
            if not self._zero_check(h, scale):
                raise InternalError(f"T_{j}: division by X_a - 1 left a remainder {self.D.fmt(h)}")
        return LaurentPolynomial._raw(out, self.rank)

    def T(self, j: int, f: LaurentPolynomial) -> LaurentPolynomial:
        with self.D.working():
            _, _, th = self._root_data(j)
            sf = self.s(j, f)
            quotient = self.divide(sf - f, j)
            return sf * th + quotient * (th - 1 / th)

    def T_inv(self, j: int, f: LaurentPolynomial) -> LaurentPolynomial:
        with self.D.working():
            _, _, th = self._root_data(j)
            return self.T(j, f) - f * (th - 1 / th)

    def T_element(self, g: AffineElement, f: LaurentPolynomial) -> LaurentPolynomial:
        """T_g for any element of the extended affine Weyl group."""
        pi, word = self._reduced(g)
        for j in reversed(word):
            f = self.T(j, f)
        return self.affine(pi, f)

    def _reduced(self, g: AffineElement):
        key = g.key
        if key not in self._words:
            self._words[key] = g.reduced_word()
        return self._words[key]

    def Y_fundamental(self, i: int, f: LaurentPolynomial, inverse: bool = False) -> LaurentPolynomial:
        g = self.R.translation(self.R.fundamental_weights[i])
        pi, word = self._reduced(g)
        if not inverse:
            for j in reversed(word):
                f = self.T(j, f)
            return self.affine(pi, f)
        f = self.affine(pi.inverse(), f)
        for j in word:
            f = self.T_inv(j, f)
        return f

    def Y(self, b, f: LaurentPolynomial) -> LaurentPolynomial:
        """Y_b = prod_i Y_{omega_i}^{b_i}."""
        for i, n in enumerate(b):
            for _ in range(abs(int(n))):
                f = self.Y_fundamental(i, f, inverse=n < 0)
        return f


def apply_T(rep: PolynomialRepresentation, j: int, f: LaurentPolynomial) -> LaurentPolynomial:
    return rep.T(j, f)


def apply_Y(rep: PolynomialRepresentation, b, f: LaurentPolynomial) -> LaurentPolynomial:
    return rep.Y(b, f)


# ---------------------------------------------------------------------------
# nonsymmetric Macdonald polynomials


def saturated_set(R: RootSystemData, b) -> list:
    """All weights c with c_+ below b_+ in dominance order (a saturated set)."""
    top, _ = R.dominant(tuple(b))
    seen = {tuple(top)}
    queue = [tuple(top)]
    while queue:
        mu = queue.pop()
        for alpha in R.positive_roots:
            m = R.pair_coroot(mu, alpha)
            m = int(m)
            step = 1 if m > 0 else -1
            for j in range(0, m + step, step) if m else ():
                nu = tuple(int(x - j * y) for x, y in zip(mu, alpha))
                if nu not in seen:
                    seen.add(nu)
                    queue.append(nu)
    return sorted(seen)


def monomial_order_key(R: RootSystemData, c) -> tuple:
    """Sort key: height of c_+, then length of the shortest u with u(c_+) = c."""
    top, u = R.dominant(tuple(c))
    return (R.height(top), R.weyl_length(u), tuple(c))


def spectrum(R: RootSystemData, b) -> SpectralVector:
    """b# as a spectral vector (linear in k)."""
    return b_sharp_parts(R, tuple(b))


@dataclass
class MacdonaldRecord:
    b: Weight
    e: LaurentPolynomial
    b_sharp: SpectralVector
    eigenvalues: tuple
    eval_at_rho: object
    epsilon: LaurentPolynomial | None
    domain: CoefficientDomain = dc_field(repr=False)
    norm: object = None

    def eigenvalue(self, a):
        """X_a(q^{-b#})."""
        return self.domain.spectral_power(a, -self.b_sharp)


class MacdonaldSolver:
    """Caches the Y-matrices on saturated monomial spans."""

    def __init__(self, domain: CoefficientDomain):
        self.D = domain
        self.R = domain.R
        self.rep = PolynomialRepresentation(domain)
        self._images: dict = {}

    def _image(self, i, c):
        key = (i, c)
        if key not in self._images:
            self._images[key] = self.rep.Y_fundamental(i, self.rep.monomial(c))
        return self._images[key]

    def solve(self, b) -> MacdonaldRecord:
        R, D = self.R, self.D
        b = tuple(int(x) for x in b)
        span = saturated_set(R, b)
        key = {c: monomial_order_key(R, c) for c in span}
        kb = key[b]
        below = sorted((c for c in span if key[c] < kb), key=key.get, reverse=True)
        n = R.rank
        sharp = spectrum(R, b)
        target = [D.spectral_power(R.fundamental_weights[i], -sharp) for i in range(n)]
        coeffs = {b: D.one}
        # check triangularity and the predicted diagonal, then back-substitute
        for c in [b] + below:
            for i in range(n):
                img = self._image(i, c)
                for d, v in img.items():
                    if d not in key or key[d] > key[c]:
                        raise InternalError(f"Y_{i + 1} X_{c} leaves the triangular span at X_{d}")
                diag = img.coefficient(c, D.zero)
                predicted = D.spectral_power(R.fundamental_weights[i], -spectrum(R, c))
                if not self.rep._zero_check(diag - predicted, predicted):
                    raise InternalError(f"diagonal of Y_{i + 1} at X_{c} is not X(q^(-c#))")
        for d in below:
            value = None
            for i in range(n):
                gap = self._image(i, d).coefficient(d, D.zero) - target[i]
                if self.rep._zero_check(gap, target[i]):
                    continue
                acc = D.zero
                for c, x in coeffs.items():
                    if key[c] > key[d]:
                        acc = acc + self._image(i, c).coefficient(d, D.zero) * x
                value = -acc / gap
                break
            if value is None:
                raise ResonanceError(f"X_{d} and X_{b} share all Y-eigenvalues; e_{b} is not determined")
            if not self.rep._zero_check(value, 1):
                coeffs[d] = value
        e = LaurentPolynomial._raw(coeffs, n)
        for i in range(n):
            res = self.rep.Y_fundamental(i, e) - e * target[i]
            scale = max((abs(D.to_complex(v)) for v in e._terms.values()), default=1) if not D.exact else 1
            for v in res._terms.values():
                if not self.rep._zero_check(v, scale):
                    raise InternalError(f"e_{b} fails the Y_{i + 1} eigen-equation")
        rho = rho_parts(R)
        at_rho = e.evaluate(lambda a: D.spectral_power(a, -rho), D.zero)
        eps = None if D.is_zero(at_rho) else e * (1 / at_rho)
        return MacdonaldRecord(b, e, sharp, tuple(target), at_rho, eps, D)


@lru_cache(maxsize=64)
def _solver(domain) -> MacdonaldSolver:
    return MacdonaldSolver(domain)


def macdonald_e(b, domain: CoefficientDomain) -> MacdonaldRecord:
    """The monic joint eigenvector e_b = X_b + lower terms of all Y_a."""
    with domain.working():
        return _solver(domain).solve(b)


def star_poly(f: LaurentPolynomial, domain: CoefficientDomain) -> LaurentPolynomial:
    """f* : X_b -> X_{-b}, q -> q^-1, t -> t^-1 on coefficients."""
    return f.map_coefficients(domain.conj).reflect()


def macdonald_star(record: MacdonaldRecord, epsilon: bool = False) -> LaurentPolynomial:
    """e_b* (or eps_b*), computed in the starred domain so that numeric domains work too."""
    D = record.domain
    if D.exact:
        src = record.epsilon if epsilon else record.e
        return star_poly(src, D)
    twin = macdonald_e(record.b, D.star())
    src = twin.epsilon if epsilon else twin.e
    return src.reflect()


def evaluate_at_spectrum(f: LaurentPolynomial, z: SpectralVector, domain: CoefficientDomain):
    return f.evaluate(lambda a: domain.spectral_power(a, z), domain.zero)


def duality_check(b, c, domain: CoefficientDomain):
    """(passed, residual) for eps_b(q^{c#}) = eps_c(q^{b#})."""
    with domain.working():
        return _duality(b, c, domain)


def _duality(b, c, domain):
    R = domain.R
    eb, ec = macdonald_e(b, domain), macdonald_e(c, domain)
    if eb.epsilon is None or ec.epsilon is None:
        raise ResonanceError("e_b(q^(-rho_k)) vanishes; eps_b undefined")
    lhs = evaluate_at_spectrum(eb.epsilon, spectrum(R, c), domain)
    rhs = evaluate_at_spectrum(ec.epsilon, spectrum(R, b), domain)
    diff = lhs - rhs
    if domain.exact:
        return domain.is_zero(diff), diff
    return abs(diff) <= domain.tol * max(1, abs(lhs)), abs(diff)


# ---------------------------------------------------------------------------
# exact series for constant terms


class _UVSeries:
    """Truncated series in u with Laurent-polynomial coefficients in the v_o.

    Stored as {u_exp: {v_exp_tuple: Fraction}}; exponents below ``order`` are exact.
    """

    __slots__ = ("c", "order", "nv")

    def __init__(self, c: dict, order: int, nv: int):
        self.c = {e: p for e, p in c.items() if e < order and p}
        self.order = order
        self.nv = nv

    @staticmethod
    def _vmul(p, r):
        out = {}
        for a, x in p.items():
            for b, y in r.items():
                k = tuple(i + j for i, j in zip(a, b))
                out[k] = out.get(k, 0) + x * y
        return {k: v for k, v in out.items() if v}

    @staticmethod
    def _vadd(p, r, sign=1):
        out = dict(p)
        for k, v in r.items():
            out[k] = out.get(k, 0) + sign * v
        return {k: v for k, v in out.items() if v}

    def low(self):
        return min(self.c, default=self.order)

    def __add__(self, other):
        order = min(self.order, other.order)
        out = dict(self.c)
        for e, p in other.c.items():
            out[e] = self._vadd(out.get(e, {}), p)
        return _UVSeries(out, order, self.nv)

    def __mul__(self, other):
        order = min(self.order + other.low(), other.order + self.low())
        out: dict = {}
        for e, p in self.c.items():
            for f, r in other.c.items():
                if e + f < order:
                    out[e + f] = self._vadd(out.get(e + f, {}), self._vmul(p, r))
        return _UVSeries(out, order, self.nv)

    def inverse(self):
        s = self.low()
        if s >= self.order:
            raise DomainError("cannot invert a series that vanishes to its order")
        lead = self.c[s]
        if len(lead) != 1:
            raise DomainError("leading u-coefficient is not a monomial in t^(1/2); expand differently")
        (ve, co), = lead.items()
        inv_lead = {tuple(-x for x in ve): 1 / Fraction(co)}
        span = self.order - s
        coeffs = [inv_lead]
        for n in range(1, span):
            acc = {}
            for i in range(1, n + 1):
                d = self.c.get(s + i)
                if d:
                    acc = self._vadd(acc, self._vmul(d, coeffs[n - i]))
            coeffs.append(self._vmul({k: -v for k, v in acc.items()}, inv_lead))
        return _UVSeries({n - s: p for n, p in enumerate(coeffs)}, span - s, self.nv)

    @classmethod
    def from_poly(cls, poly, order, nv):
        out: dict = {}
        for mono, co in poly.terms():
            e, ve = mono[0], tuple(mono[1:])
            out.setdefault(e, {})[ve] = Fraction(int(co.numerator), int(co.denominator))
        return cls(out, order, nv)

    @classmethod
    def from_field(cls, c, order, nv, domain: ExactDomain):
        if domain.inverted:
            raise DomainError("series expansion expects the un-starred domain")
        den = cls.from_poly(c.denom, order + 64, nv)
        s = den.low()
        num_low = min((m[0] for m, _ in c.numer.terms()), default=0)
        need = order - num_low + s
        den = cls.from_poly(c.denom, need, nv)
        num = cls.from_poly(c.numer, order, nv)
        return num * den.inverse()

    def to_qseries(self, scale: int) -> QSeries:
        coeffs = {
            Fraction(e, scale): LaurentPolynomial({ve: v for ve, v in p.items()}, rank=self.nv)
            for e, p in self.c.items()
        }
        return QSeries(coeffs, Fraction(self.order, scale), self.nv)


def _mu_by_monomial(R: RootSystemData, domain: ExactDomain, M: int, height_bound) -> dict:
    flat = flat_mu(R, M, height_bound, domain.k)
    scale = domain.scale
    nv = len(domain.v)
    out: dict = {}
    for (qe, te, xe), c in flat.items():
        ue = int(Fraction(qe) * scale)
        ve = tuple(2 * x for x in te)
        d = out.setdefault(xe, {}).setdefault(ue, {})
        d[ve] = d.get(ve, 0) + c
    return {xe: _UVSeries(d, M * scale, nv) for xe, d in out.items()}


def constant_term_pairing(f: LaurentPolynomial, g: LaurentPolynomial | None, M: int, domain: CoefficientDomain, *,
                          g_star: LaurentPolynomial | None = None, normalized: bool = True, grid: int | None = None):
    """<mu_0 f g*>: a truncated q-series (exact domains) or a number (numeric domains).

    In exact mode the result is a :class:`QSeries` whose coefficients are
    Laurent polynomials in t_o^(1/2) (none when t is substituted), correct to
    q-order ``M`` unless negative powers of q in f g* lower the order (the
    returned ``order`` says how far it is exact).  g* is computed from g unless
    given directly.
    """
    R = domain.R
    if g_star is None:
        g_star = star_poly(g, domain) if g is not None else LaurentPolynomial.constant(domain.one, R.rank)
    F = f * g_star
    if isinstance(domain, NumericDomain):
        return torus_constant_term(F, domain, normalized=normalized, grid=grid)
    if not isinstance(domain, ExactDomain):
        raise DomainError("constant terms need an exact rational-function domain or a numeric one")
    scale = domain.scale
    nv = len(domain.v)
    hb = max((R.height(tuple(-x for x in c)) for c in F.support()), default=0)
    hb = max(hb, 0)
    mu = _mu_by_monomial(R, domain, M, hb)
    total = _UVSeries({}, M * scale, nv)
    for c, coef in F.items():
        m = mu.get(tuple(-x for x in c))
        if m is None:
            continue
        total = total + _UVSeries.from_field(coef, M * scale, nv, domain) * m
    if normalized:
        total = total * mu[(0,) * R.rank].inverse()
    return total.to_qseries(scale)


def mu_at(points: np.ndarray, R: RootSystemData, log_q: complex, k: MultiplicityFunction, depth: int, inverse_t=False,
          reciprocal=False) -> np.ndarray:
    """Double-precision mu at X = exp(points) (points[..., i] = log X_{omega_i}).

    ``inverse_t`` evaluates at t^-1, ``reciprocal`` returns 1/mu.
    """
    out = np.ones(points.shape[:-1], dtype=complex)
    for alpha in R.positive_roots:
        nu = R.nu(alpha)
        lx = points @ np.array(alpha, dtype=float)
        lt = nu * complex(k.of_root(R, alpha)) * log_q * (-1 if inverse_t else 1)
        for i in range(depth):
            a = np.exp(lx + nu * i * log_q)
            b = np.exp(-lx + nu * (i + 1) * log_q)
            num = (1 - a) * (1 - b)
            den = (1 - np.exp(lt) * a) * (1 - np.exp(lt) * b)
            out *= den / num if reciprocal else num / den
    return out


def _numeric_depth(log_q, digits=17):
    rate = -float(np.real(log_q))
    if rate <= 0:
        raise DomainError("numeric measures need |q| < 1")
    return int(math.ceil(digits * math.log(10) / rate)) + 2


def torus_constant_term(F: LaurentPolynomial, domain: NumericDomain, *, normalized=True, extra=None, grid=None):
    """<mu F> (optionally divided by <mu>) by the trapezoidal rule on the torus.

    ``extra`` is an optional function of the grid logarithms multiplied into
    the integrand (used for the Gaussian).  Requires |q| < 1 and |t_o| < 1.
    """
    R = domain.R
    log_q = complex(domain.log_q)
    for o in R.orbits:
        if abs(np.exp(R.orbit_nu(o) * complex(domain.k[o]) * log_q)) >= 1:
            raise DomainError("the torus integral needs |t| < 1")
    rate = min(-np.real(log_q), min(-R.orbit_nu(o) * np.real(complex(domain.k[o]) * log_q) for o in R.orbits))
    deg = max((max(abs(x) for x in c) for c in F.support()), default=0)
    if grid is None:
        reach = max(max(abs(x) for x in a) for a in R.positive_roots)
        grid = 2 * deg + int(math.ceil(reach * 19 * math.log(10) / rate)) + 8
    n = R.rank
    axes = [np.arange(grid) * (2j * np.pi / grid)] * n
    mesh = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    mu = mu_at(mesh, R, log_q, domain.k, _numeric_depth(log_q))
    vals = np.zeros(mesh.shape[:-1], dtype=complex)
    for c, v in F.items():
        vals += complex(v) * np.exp(mesh @ np.array(c, dtype=float))
    weight = mu if extra is None else mu * extra(mesh)
    value = np.mean(vals * weight)
    if normalized:
        value /= np.mean(mu)
    return complex(value)


# ---------------------------------------------------------------------------
# the Gaussian master formula


def gaussian_on_grid(R: RootSystemData, log_q: complex, digits=18) -> Callable:
    """The theta function sum_b q^{(b,b)/2} X_b as a function of grid logarithms."""
    rate = -np.real(log_q)
    gram = np.array([[float(R.form[i][j]) for j in range(R.rank)] for i in range(R.rank)])
    lam = float(np.linalg.eigvalsh(gram).min())
    cap = digits * math.log(10) / rate
    bound = int(math.sqrt(2 * cap / lam)) + 2
    lattice = [b for b in iproduct(range(-bound, bound + 1), repeat=R.rank) if float(R.inner(b, b)) / 2 <= cap]
    B = np.array(lattice, dtype=float)
    weights = np.exp(np.array([float(R.inner(b, b)) / 2 for b in lattice]) * log_q)

    def theta(mesh):
        flat = mesh.reshape(-1, R.rank)
        out = np.exp(flat @ B.T) @ weights
        return out.reshape(mesh.shape[:-1])

    return theta


def _mp_inner(R, a, b):
    return sum(mpmath.mpmathify(a[i]) * (mpmath.mpf(R.form[i][j].numerator) / R.form[i][j].denominator) * mpmath.mpmathify(b[j])
               for i in range(R.rank) for j in range(R.rank) if R.form[i][j])


def _mp_vec(v):
    return [mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpmathify(x) for x in v]


def master_formula(b, c, domain: NumericDomain, grid: int | None = None):
    """Both sides of the Gaussian master identity for eps_b, eps_c at numeric (q, t).

    lhs = <eps_b eps_c* theta mu> with theta = sum_b q^{(b,b)/2} X_b;
    rhs = q^{(b#,b#)/2 + (c#,c#)/2 - (rho_k,rho_k)} eps_c*(q^{b#})
          prod_{alpha>0} prod_{j>=1} (1 - q_alpha^{(rho_k,alpha^v)+j}) / (1 - t_alpha q_alpha^{(rho_k,alpha^v)+j}).
    """
    R = domain.R
    if not isinstance(domain, NumericDomain):
        raise DomainError("master_formula is evaluated numerically")
    eb = macdonald_e(b, domain)
    ec = macdonald_e(c, domain)
    eps_c_star = macdonald_star(ec, epsilon=True)
    F = eb.epsilon * eps_c_star
    log_q = complex(domain.log_q)
    lhs = torus_constant_term(F, domain, normalized=False, extra=gaussian_on_grid(R, log_q), grid=grid)
    k = domain.k
    with mpmath.workdps(domain.dps + 10):
        bs = _mp_vec(spectrum(R, b).evaluate(k))
        cs = _mp_vec(spectrum(R, c).evaluate(k))
        rho = _mp_vec(rho_parts(R).evaluate(k))
        expo = _mp_inner(R, bs, bs) / 2 + _mp_inner(R, cs, cs) / 2 - _mp_inner(R, rho, rho)
        pref = mpmath.exp(expo * domain.log_q)
        value = eps_c_star.evaluate(lambda a: domain.point_power(a, bs), mpmath.mpf(0))
        prod = _gauss_product(R, domain, rho)
        rhs = pref * value * prod
    return complex(lhs), complex(rhs)


def _gauss_product(R, domain, rho):
    out = mpmath.mpf(1)
    for alpha in R.positive_roots:
        nu = R.nu(alpha)
        r = 2 * _mp_inner(R, rho, _mp_vec(alpha)) / R.norm2(alpha)
        kt = domain.coerce(domain.k.of_root(R, alpha))
        depth = _numeric_depth(complex(domain.log_q) * nu, domain.dps + 5)
        for j in range(1, depth + 1):
            out *= (1 - mpmath.exp(nu * (r + j) * domain.log_q)) / (1 - mpmath.exp(nu * (kt + r + j) * domain.log_q))
    return out


# ---------------------------------------------------------------------------
# Jackson sums


@dataclass
class JacksonContext:
    """A shifted lattice grid: points w(xi) + b for w in W and b in B within a radius."""

    domain: NumericDomain
    xi: tuple
    radius: float | None = None
    lattice: str = "P"

    def __post_init__(self):
        if self.lattice not in ("P", "Q"):
            raise DomainError("the lattice B must be 'P' or 'Q'")
        self.xi = tuple(mpmath.mpmathify(x) if not isinstance(x, Fraction) else mpmath.mpf(x.numerator) / x.denominator
                        for x in self.xi)

    def _radius(self):
        if self.radius is not None:
            return float(self.radius)
        rate = -float(mpmath.re(self.domain.log_q))
        target = (self.domain.dps + 5) * math.log(10) / rate
        ks = sum(abs(complex(v)) for _, v in self.domain.k.values)
        shift = math.sqrt(sum(abs(complex(x)) ** 2 for x in self.xi))
        return math.sqrt(2 * target) + 2 * (1 + ks) * math.sqrt(self.domain.R.rank) + shift + 2

    def lattice_points(self) -> list:
        R = self.domain.R
        rad = self._radius()
        gram = np.array([[float(R.form[i][j]) for j in range(R.rank)] for i in range(R.rank)])
        lam = float(np.linalg.eigvalsh(gram).min())
        bound = int(rad / math.sqrt(lam)) + 1
        pts = []
        for b in iproduct(range(-bound, bound + 1), repeat=R.rank):
            if float(R.inner(b, b)) <= rad * rad and (self.lattice == "P" or R.in_root_lattice(b)):
                pts.append(b)
        return pts

    def grid(self) -> list:
        """(w, b, point) triples."""
        R = self.domain.R
        out = []
        with mpmath.workdps(self.domain.dps + 10):
            for w in R.weyl_group:
                wxi = w.apply(self.xi)
                for b in self.lattice_points():
                    out.append((w, b, tuple(x + y for x, y in zip(wxi, b))))
        return out


def jackson_pairing(f: Callable, jctx: JacksonContext):
    """|W|^{-1} sum over w in W, b in B of f(z) at z = w(xi) + b."""
    R = jctx.domain.R
    with mpmath.workdps(jctx.domain.dps + 10):
        acc = mpmath.mpc(0)
        for _, _, z in jctx.grid():
            acc += f(z)
        return acc / len(R.weyl_group)


def gamma_at(z, domain: NumericDomain):
    """q^{(z,z)/2}."""
    with domain.working():
        return mpmath.exp(_mp_inner(domain.R, z, z) / 2 * domain.log_q)


def mu_circ_at(z, domain: NumericDomain, depth=None):
    """mu(X, t^-1)^{-1} at X = q^z; GridPoleError where a denominator vanishes."""
    R = domain.R
    lq = domain.log_q
    out = mpmath.mpf(1)
    tol = mpmath.mpf(10) ** (-(domain.dps - 2))
    for alpha in R.positive_roots:
        nu = R.nu(alpha)
        x = _mp_inner(R, _mp_vec(alpha), z)
        kt = domain.coerce(domain.k.of_root(R, alpha))
        J = depth or _numeric_depth(complex(lq) * nu, domain.dps + 5) + int(abs(float(mpmath.re(x)))) + 2
        for i in range(J):
            a = mpmath.exp((x + nu * i) * lq)
            b = mpmath.exp((-x + nu * (i + 1)) * lq)
            den = (1 - a) * (1 - b)
            if abs(den) < tol:
                raise GridPoleError(f"mu-circ has a pole at z={z}", points=[tuple(z)])
            out *= (1 - a * mpmath.exp(-nu * kt * lq)) * (1 - b * mpmath.exp(-nu * kt * lq)) / den
    return out


def _integer_k(domain):
    return all(abs(complex(v) - round(complex(v).real)) < 1e-12 and round(complex(v).real) > 0 for _, v in domain.k.values)


def mu_circ_polynomial(domain: NumericDomain, xi) -> tuple:
    """For k in Z_+: (scalar, finite mu) with mu-circ = scalar * mu, the scalar fixed at X = q^xi."""
    R = domain.R
    lq = domain.log_q
    kint = {o: int(round(complex(domain.k[o]).real)) for o in R.orbits}

    def finite_mu(z):
        out = mpmath.mpf(1)
        for alpha in R.positive_roots:
            nu = R.nu(alpha)
            x = _mp_inner(R, _mp_vec(alpha), z)
            for i in range(kint[R.orbit_of(alpha)]):
                out *= (1 - mpmath.exp((x + nu * i) * lq)) * (1 - mpmath.exp((-x + nu * (i + 1)) * lq))
        return out

    scalar = mu_circ_at(xi, domain) / finite_mu(xi)
    return scalar, finite_mu


def jackson_product(domain: NumericDomain, rho, limit_direction="uniform"):
    """prod_alpha prod_{j>=0} (1 - t_alpha^{-1} q_alpha^{-r+j}) / (1 - q_alpha^{-r+j}), r = (rho_k, alpha^v).

    At k in Z_+ both a numerator and a denominator factor vanish; the value
    is then the limit along k_o -> k_o + eps (all orbits together), which
    leaves the finite product
    (1 + r')/r' * prod_{j<K} (1 - q_alpha^{-K-r+j}), r' = (rho_1, alpha^v).
    """
    R = domain.R
    lq = domain.log_q
    out = mpmath.mpf(1)
    integral = _integer_k(domain)
    rho1 = _mp_vec(rho_parts(R).evaluate(MultiplicityFunction.uniform(R, 1)))
    for alpha in R.positive_roots:
        nu = R.nu(alpha)
        r = 2 * _mp_inner(R, rho, _mp_vec(alpha)) / R.norm2(alpha)
        kt = domain.coerce(domain.k.of_root(R, alpha))
        if integral:
            K = int(round(complex(kt).real))
            rp = 2 * _mp_inner(R, rho1, _mp_vec(alpha)) / R.norm2(alpha)
            val = (1 + rp) / rp
            for j in range(K):
                val *= 1 - mpmath.exp(nu * (-K - r + j) * lq)
            out *= val
            continue
        depth = _numeric_depth(complex(lq) * nu, domain.dps + 5) + int(abs(float(mpmath.re(r)))) + 2
        for j in range(depth):
            out *= (1 - mpmath.exp(nu * (-kt - r + j) * lq)) / (1 - mpmath.exp(nu * (-r + j) * lq))
    return out


def jackson_master(b, c, jctx: JacksonContext):
    """Both sides of the Jackson master identity.

    lhs = <eps_b eps_c* gamma mu-circ>_xi;
    rhs = q^{-(b#,b#)/2 - (c#,c#)/2 + (rho_k,rho_k)} eps_c(q^{b#})
          |W|^{-1} <gamma>_xi * jackson_product.
    """
    D = jctx.domain
    R = D.R
    eb, ec = macdonald_e(b, D), macdonald_e(c, D)
    ecs = macdonald_star(ec, epsilon=True)
    with mpmath.workdps(D.dps + 10):
        if _integer_k(D):
            scalar, fmu = mu_circ_polynomial(D, jctx.xi)
            weight = lambda z: scalar * fmu(z)
        else:
            weight = lambda z: mu_circ_at(z, D)

        def integrand(z):
            ev = lambda a: D.point_power(a, z)
            return eb.epsilon.evaluate(ev, mpmath.mpf(0)) * ecs.evaluate(ev, mpmath.mpf(0)) * gamma_at(z, D) * weight(z)

        lhs = _jackson_sum(integrand, jctx)
        g = jackson_pairing(lambda z: gamma_at(z, D), jctx)
        k = D.k
        bs = _mp_vec(spectrum(R, b).evaluate(k))
        cs = _mp_vec(spectrum(R, c).evaluate(k))
        rho = _mp_vec(rho_parts(R).evaluate(k))
        expo = -_mp_inner(R, bs, bs) / 2 - _mp_inner(R, cs, cs) / 2 + _mp_inner(R, rho, rho)
        value = ec.epsilon.evaluate(lambda a: D.point_power(a, bs), mpmath.mpf(0))
        rhs = mpmath.exp(expo * D.log_q) * value * g / len(R.weyl_group) * jackson_product(D, rho)
    return lhs, rhs


def _jackson_sum(fn, jctx):
    bad = []
    R = jctx.domain.R
    acc = mpmath.mpc(0)
    for _, _, z in jctx.grid():
        try:
            acc += fn(z)
        except GridPoleError as exc:
            bad.extend(exc.points)
    if bad:
        raise GridPoleError(f"{len(bad)} grid points hit poles", points=bad)
    return acc / len(R.weyl_group)


def theta_at(z, domain: NumericDomain, digits=None):
    """sum_b q^{(b,b)/2} X_b at X = q^z (mpmath)."""
    R = domain.R
    digits = digits or domain.dps + 5
    rate = -float(mpmath.re(domain.log_q))
    cap = digits * math.log(10) / rate
    gram = np.array([[float(R.form[i][j]) for j in range(R.rank)] for i in range(R.rank)])
    lam = float(np.linalg.eigvalsh(gram).min())
    shift = math.sqrt(sum(abs(complex(x)) ** 2 for x in z))
    bound = int(math.sqrt(2 * cap / lam) + 2 * shift) + 2
    with domain.working():
        acc = mpmath.mpc(0)
        for b in iproduct(range(-bound, bound + 1), repeat=R.rank):
            acc += mpmath.exp((R.inner(b, b) / 2 + _mp_inner(R, b, z)) * domain.log_q)
    return acc


# ---------------------------------------------------------------------------
# the functional representation on the grid w(xi) + b


class FunctionalRepresentation:
    """Functions g on the extended affine Weyl group; bw sits at the point b + w(xi)."""

    def __init__(self, jctx: JacksonContext):
        self.j = jctx
        self.D = jctx.domain
        self.R = self.D.R

    def point(self, g: AffineElement):
        return tuple(x + y for x, y in zip(g.w.apply(self.j.xi), g.b))

    def X_value(self, a, g: AffineElement, affine_shift=0):
        """q^{(a, point) + affine_shift}."""
        z = self.point(g)
        return mpmath.exp((_mp_inner(self.R, _mp_vec(a), z) + affine_shift) * self.D.log_q)

    def evaluate(self, f: LaurentPolynomial) -> Callable:
        """The evaluation map f -> (g -> f(q^{b + w(xi)}))."""
        return lambda g: f.evaluate(lambda a: self.D.point_power(a, self.point(g)), mpmath.mpf(0))

    def T(self, i: int, fn: Callable) -> Callable:
        R = self.R
        th = self.D.t_half_root(R.theta if i == 0 else R.simple_roots[i - 1])
        si = R.s(i)
        tol = mpmath.mpf(10) ** (-(self.D.dps - 2))

        def out(g):
            if i == 0:
                X = self.X_value(tuple(-x for x in R.theta), g, 1)
            else:
                X = self.X_value(R.simple_roots[i - 1], g)
            if abs(X - 1) < tol:
                raise GridPoleError(f"X_a - 1 vanishes at {g}", points=[self.point(g)])
            return (th * X - 1 / th) / (X - 1) * fn(si * g) - (th - 1 / th) / (X - 1) * fn(g)

        return out

    def X(self, a, fn: Callable) -> Callable:
        return lambda g: self.X_value(a, g) * fn(g)

    def affine(self, h: AffineElement, fn: Callable) -> Callable:
        inv = h.inverse()
        return lambda g: fn(inv * g)


def functional_rep_action(op: str, index, f: LaurentPolynomial, jctx: JacksonContext, samples: Sequence[AffineElement]):
    """Compare eval(op f) with op(eval f) on sampled elements; returns the max difference.

    ``op`` is 'T' (index j), 'X' (index a weight) or 'pi' (index an element of length zero).
    """
    with jctx.domain.working():
        return _functional_compare(op, index, f, jctx, samples)


def _functional_compare(op, index, f, jctx, samples):
    F = FunctionalRepresentation(jctx)
    rep = PolynomialRepresentation(jctx.domain)
    if op == "T":
        left, right = rep.T(index, f), F.T(index, F.evaluate(f))
    elif op == "X":
        left, right = rep.X(index, f), F.X(index, F.evaluate(f))
    elif op == "pi":
        left, right = rep.affine(index, f), F.affine(index, F.evaluate(f))
    else:
        raise DomainError(f"unknown operator {op!r}")
    ev = F.evaluate(left)
    return max(abs(ev(g) - right(g)) for g in samples)


def sample_affine(R: RootSystemData, count: int, seed: int = 0, max_coord: int = 3) -> list:
    rng = random.Random(seed)
    W = R.weyl_group
    out = []
    for _ in range(count):
        b = tuple(rng.randint(-max_coord, max_coord) for _ in range(R.rank))
        out.append(R.affine(b, rng.choice(W)))
    return out


# ---------------------------------------------------------------------------
# A_1: exact normal forms in the double affine Hecke algebra


class A1Algebra:
    """Normal forms sum c X^a T^eps Y^c over Q(q^{1/4}, t^{1/2}).

    The reduction uses pi = Y T^{-1} with pi^2 = 1, pi X^a = q^{a/2} X^{-a} pi,
    T X^a = X^{-a} T + g (X^{-a} - X^a)/(X^2 - 1) and T^2 = g T + 1 with
    g = t^{1/2} - t^{-1/2}.
    """

    def __init__(self, domain: ExactDomain | None = None):
        from .rootdata import build_root_system

        self.domain = domain or ExactDomain(build_root_system("A", 1))
        if self.domain.R.rank != 1:
            raise DomainError("A1Algebra needs an A_1 domain")
        D = self.domain
        self.q4 = D.qpow(Fraction(1, 4))
        self.th = D.t_half(2)
        self.g = self.th - 1 / self.th
        self.max_terms = 100_000

    def element(self, terms: dict) -> "A1Element":
        return A1Element(self, {k: self.domain.coerce(v) if not hasattr(v, "numer") else v for k, v in terms.items()})

    def scalar(self, c) -> "A1Element":
        return self.element({(0, 0, 0): c})

    @property
    def X(self):
        return self.element({(1, 0, 0): 1})

    @property
    def Xi(self):
        return self.element({(-1, 0, 0): 1})

    @property
    def T(self):
        return self.element({(0, 1, 0): 1})

    @property
    def Ti(self):
        return self.T - self.scalar(self.g)

    @property
    def Y(self):
        return self.element({(0, 0, 1): 1})

    @property
    def Yi(self):
        return self.element({(0, 0, -1): 1})

    def generator(self, name: str) -> "A1Element":
        return {"X": self.X, "X-": self.Xi, "T": self.T, "T-": self.Ti, "Y": self.Y, "Y-": self.Yi}[name]

    # left multiplication by generators on normal forms -----------------------
    def _t_times_x(self, a: int) -> dict:
        """T X^a as {(x_exp, t_exp): coeff}."""
        out = {(-a, 1): self.domain.one}
        # g (X^{-a} - X^a)/(X^2 - 1) = -g (X^{-a} + X^{-a+2} + ... + X^{a-2}) for a > 0
        # and g (X^{a} + X^{a+2} + ... + X^{-a-2}) for a < 0
        lo, sign = (-a, -1) if a > 0 else (a, 1)
        for j in range(lo, -lo - 1, 2):
            out[(j, 0)] = out.get((j, 0), 0) + sign * self.g
        return out

    def left_T(self, elem: dict) -> dict:
        out: dict = {}
        for (a, e, c), v in elem.items():
            for (x, te), w in self._t_times_x(a).items():
                total = te + e
                if total == 2:
                    # T^2 = g T + 1
                    _acc(out, (x, 1, c), v * w * self.g)
                    _acc(out, (x, 0, c), v * w)
                else:
                    _acc(out, (x, total, c), v * w)
        return out

    def left_pi(self, elem: dict) -> dict:
        out: dict = {}
        for (a, e, c), v in elem.items():
            coef = v * self.domain.qpow(Fraction(a, 2))
            if e == 1:
                _acc(out, (-a, 0, c + 1), coef)  # pi T Y^c = Y^{c+1}
            else:
                # pi Y^c = T Y^{c-1}
                _acc(out, (-a, 1, c - 1), coef)
        return out

    def left(self, name: str, elem: dict) -> dict:
        if name == "X":
            return {(a + 1, e, c): v for (a, e, c), v in elem.items()}
        if name == "X-":
            return {(a - 1, e, c): v for (a, e, c), v in elem.items()}
        if name == "T":
            return self.left_T(elem)
        if name == "T-":
            out = self.left_T(elem)
            for k, v in elem.items():
                _acc(out, k, -v * self.g)
            return out
        if name == "Y":  # Y = pi T
            return self.left_pi(self.left_T(elem))
        if name == "Y-":  # Y^{-1} = T^{-1} pi
            return self.left("T-", self.left_pi(elem))
        raise NormalFormError(f"unknown generator {name}")

    def multiply(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for (a, e, c), v in A.items():
            cur = dict(B)
            step = "Y" if c > 0 else "Y-"
            for _ in range(abs(c)):
                cur = self.left(step, cur)
            if e:
                cur = self.left("T", cur)
            step = "X" if a > 0 else "X-"
            for _ in range(abs(a)):
                cur = self.left(step, cur)
            for k, w in cur.items():
                _acc(out, k, v * w)
            if len(out) > self.max_terms:
                raise NormalFormError("normal form grew beyond the term bound")
        return {k: v for k, v in out.items() if v != 0}

    def word(self, letters: Iterable[str]) -> "A1Element":
        out = self.scalar(1)
        for name in letters:
            out = out * self.generator(name)
        return out


def _acc(d, k, v):
    nv = d.get(k, 0) + v
    if nv == 0:
        d.pop(k, None)
    else:
        d[k] = nv


class A1Element:
    __slots__ = ("alg", "terms")

    def __init__(self, alg: A1Algebra, terms: dict):
        self.alg = alg
        self.terms = {k: v for k, v in terms.items() if v != 0}

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            _acc(out, k, v)
        return A1Element(self.alg, out)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __neg__(self):
        return A1Element(self.alg, {k: -v for k, v in self.terms.items()})

    def _lift(self, other):
        if isinstance(other, A1Element):
            return other
        return self.alg.scalar(other)

    def __mul__(self, other):
        if not isinstance(other, A1Element):
            return A1Element(self.alg, {k: v * other for k, v in self.terms.items()})
        return A1Element(self.alg, self.alg.multiply(self.terms, other.terms))

    def __rmul__(self, other):
        return A1Element(self.alg, {k: other * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return not (self - self._lift(other)).terms

    def __hash__(self):  # pragma: no cover - elements are not meant as keys
        raise TypeError("A1Element is unhashable")

    def is_scalar(self):
        return set(self.terms) <= {(0, 0, 0)}

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({v})*X^{a}T^{e}Y^{c}" for (a, e, c), v in sorted(self.terms.items()))


def a1_normal_form(letters: Iterable[str], alg: A1Algebra | None = None) -> A1Element:
    """Normal form of a word in X, X-, T, T-, Y, Y- (the '-' marks inverses)."""
    alg = alg or A1Algebra()
    return alg.word(letters)


@dataclass
class A1Map:
    """An (anti-)homomorphism given by images of X, T, Y and their inverses."""

    alg: A1Algebra
    images: dict
    anti: bool = False

    def __call__(self, elem: A1Element) -> A1Element:
        out = self.alg.scalar(0)
        for (a, e, c), v in elem.terms.items():
            factors = [self.power("X", a), self.power("T", e), self.power("Y", c)]
            if self.anti:
                factors.reverse()
            term = self.alg.scalar(v)
            for f in factors:
                term = term * f
            out = out + term
        return out

    def power(self, name, n):
        out = self.alg.scalar(1)
        gen = self.images[name if n >= 0 else name + "-"]
        for _ in range(abs(n)):
            out = out * gen
        return out

    def on_word(self, letters) -> A1Element:
        seq = [self.images[x] for x in letters]
        if self.anti:
            seq.reverse()
        out = self.alg.scalar(1)
        for f in seq:
            out = out * f
        return out


def a1_automorphism(which: str, alg: A1Algebra | None = None) -> A1Map:
    """tau_+, tau_-, phi and the inverses tau_+^-1, tau_-^-1 as maps on generators."""
    alg = alg or A1Algebra()
    X, Xi, T, Ti, Y, Yi = alg.X, alg.Xi, alg.T, alg.Ti, alg.Y, alg.Yi
    q4 = alg.q4
    if which == "tau+":
        return A1Map(alg, {"X": X, "X-": Xi, "T": T, "T-": Ti, "Y": X * Y * (1 / q4), "Y-": Yi * Xi * q4})
    if which == "tau+^-1":
        return A1Map(alg, {"X": X, "X-": Xi, "T": T, "T-": Ti, "Y": Xi * Y * q4, "Y-": Yi * X * (1 / q4)})
    if which == "tau-":
        return A1Map(alg, {"X": Y * X * q4, "X-": Xi * Yi * (1 / q4), "T": T, "T-": Ti, "Y": Y, "Y-": Yi})
    if which == "tau-^-1":
        return A1Map(alg, {"X": Yi * X * (1 / q4), "X-": Xi * Y * q4, "T": T, "T-": Ti, "Y": Y, "Y-": Yi})
    if which == "phi":
        return A1Map(alg, {"X": Yi, "X-": Y, "T": T, "T-": Ti, "Y": Xi, "Y-": X}, anti=True)
    raise DomainError(f"unknown automorphism {which!r}")


A1_RELATIONS = {
    "TXT=X^-1": (["T", "X", "T"], ["X-"]),
    "T^-1YT^-1=Y^-1": (["T-", "Y", "T-"], ["Y-"]),
    "Y^-1X^-1YXT^2=q^-1/2": (["Y-", "X-", "Y", "X", "T", "T"], None),
}


def _relation_residuals(alg: A1Algebra, images: Callable) -> dict:
    """Residuals of the defining relations after substituting generator images."""
    out = {}
    g = alg.g
    for name, (lhs, rhs) in A1_RELATIONS.items():
        left = images(lhs)
        right = images(rhs) if rhs is not None else alg.scalar(alg.domain.qpow(Fraction(-1, 2)))
        out[name] = left - right
    t = images(["T"])
    th = alg.th
    out["quadratic"] = (t - alg.scalar(th)) * (t + alg.scalar(1 / th))
    for name in ("X", "T", "Y"):
        out[f"{name}{name}^-1=1"] = images([name, name + "-"]) - alg.scalar(1)
    return out


def automorphism_check(which: str, alg: A1Algebra | None = None) -> dict:
    """Verify that the images of X, T, Y satisfy all A_1 relations.

    Returns {relation name: bool}.  For 'projectivity' the entry compares the
    two triple products tau_+^-1 tau_- tau_+^-1 and tau_- tau_+^-1 tau_- on
    each generator.
    """
    alg = alg or A1Algebra()
    if which == "projectivity":
        a = [a1_automorphism(n, alg) for n in ("tau+^-1", "tau-", "tau+^-1")]
        b = [a1_automorphism(n, alg) for n in ("tau-", "tau+^-1", "tau-")]
        report = {}
        for gen in ("X", "T", "Y"):
            x = alg.generator(gen)
            left = a[0](a[1](a[2](x)))
            right = b[0](b[1](b[2](x)))
            report[gen] = left == right
        return report
    m = a1_automorphism(which, alg)
    images = m.on_word
    return {name: not res.terms for name, res in _relation_residuals(alg, images).items()}


# ---------------------------------------------------------------------------
# exports


def eigen_residual(record: MacdonaldRecord):
    """max over i and monomials of |Y_i e_b - X_{omega_i}(q^{-b#}) e_b|; exact domains give 0 or raise."""
    D = record.domain
    rep = PolynomialRepresentation(D)
    worst = 0
    with D.working():
        for i, lam in enumerate(record.eigenvalues):
            res = rep.Y_fundamental(i, record.e) - record.e * lam
            for v in res._terms.values():
                if D.exact:
                    if not D.is_zero(v):
                        raise InternalError(f"e_{record.b} is not an exact eigenvector")
                else:
                    worst = max(worst, abs(complex(v)))
    return worst


def macdonald_table(R: RootSystemData, weights: Iterable, domain: CoefficientDomain) -> dict:
    recs = [macdonald_e(b, domain) for b in weights]
    rows = []
    for r in recs:
        res = eigen_residual(r)
        rows.append({
            "eigen_residual": "0" if res == 0 else f"{res:.3e}",
            "b": list(r.b),
            "coefficients": [{"exponent": list(c), "value": domain.fmt(v)} for c, v in r.e.items()],
            "b_sharp": r.b_sharp.to_strings(),
            "eigenvalues": [domain.fmt(v) for v in r.eigenvalues],
            "eval_at_rho": domain.fmt(r.eval_at_rho),
        })
    k = None if getattr(domain, "k", None) is None else {str(o): str(v) for o, v in domain.k.values}
    duality = []
    for r in recs:
        row = []
        for s in recs:
            ok, _ = duality_check(r.b, s.b, domain)
            row.append(bool(ok))
        duality.append(row)
    return {
        "rootSystem": json.loads(R.to_json()),
        "k": k if k is not None else "formal",
        "records": rows,
        "duality": duality,
    }


def export_macdonald_json(R, weights, domain) -> str:
    return json.dumps(macdonald_table(R, weights, domain), indent=2, sort_keys=True)

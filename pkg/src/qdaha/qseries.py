"""q-contexts, truncated q-products, Laurent polynomials and q-series.

The product evaluators all reduce to :func:`truncated_qproduct`, which
multiplies factors ``(1 - q^(offset + step*j))^power`` for ``j < J`` and
reports an a-posteriori bound on the neglected tail.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

import mpmath
import numpy as np

from .errors import DomainError, PoleError

# ---------------------------------------------------------------------------
# how q is given


@dataclass(frozen=True)
class ExpInvA:
    """q = exp(-1/a) with a > 0."""

    a: object

    def __post_init__(self):
        if not mpmath.mpf(self.a) > 0:
            raise DomainError("ExpInvA requires a > 0")


@dataclass(frozen=True)
class GenericQ:
    """An arbitrary complex q with |q| < 1 (q = 0 is allowed as a limit)."""

    q: object

    def __post_init__(self):
        if not abs(mpmath.mpmathify(self.q)) < 1:
            raise DomainError("GenericQ requires |q| < 1")


@dataclass(frozen=True)
class RootOfUnity:
    """q a primitive N-th root of unity, fractional powers through zeta_{4N}.

    By default q = exp(2 pi i m/N) and q^(1/4) = exp(2 pi i m/(4N)).  With
    ``doubled=True`` one takes q = exp(4 pi i m/N) instead, which is what the
    Gaussian needs when N is odd and the root system is B_n or C_n with
    n = 2 mod 4 (use :meth:`check_gaussian`).
    """

    N: int
    m: int = 1
    doubled: bool = False

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("RootOfUnity requires N >= 1")
        if math.gcd(self.m, self.N) != 1:
            raise DomainError(f"m={self.m} is not coprime to N={self.N}")
        if self.doubled and not (self.N % 2 == 1 and 0 < 2 * self.m < self.N):
            raise DomainError("doubled roots need odd N and 0 < 2m < N")

    @property
    def M(self) -> int:
        """Order of the generating root zeta_{4N}."""
        return 4 * self.N

    @property
    def q_exponent(self) -> int:
        """q = zeta_{4N}^e; this returns e."""
        return (8 if self.doubled else 4) * self.m

    def needs_doubled_root(self, type_letter: str, rank: int) -> bool:
        return self.N % 2 == 1 and (
            type_letter == "B" or (type_letter == "C" and rank % 4 == 2)
        )

    def check_gaussian(self, type_letter: str, rank: int) -> None:
        """Raise :class:`DomainError` if q^((b,b)/2) = 1 on P cap NQ^v can fail."""
        if self.needs_doubled_root(type_letter, rank) and not self.doubled:
            raise DomainError(
                f"odd N={self.N} with type {type_letter}{rank} needs q = exp(4 pi i m/N)"
            )


@dataclass(frozen=True)
class QContext:
    """Mode for q, working precision, product depth and series order."""

    mode: object
    digits: int = 30
    product_depth: int | None = None
    series_order: int = 40

    def __post_init__(self):
        if not isinstance(self.mode, (ExpInvA, GenericQ, RootOfUnity)):
            raise DomainError(f"unknown q-mode {self.mode!r}")
        if self.digits < 5:
            raise DomainError("digits must be at least 5")

    @classmethod
    def exp_inv_a(cls, a, **kw) -> "QContext":
        return cls(ExpInvA(a), **kw)

    @classmethod
    def generic(cls, q, **kw) -> "QContext":
        return cls(GenericQ(q), **kw)

    @classmethod
    def root_of_unity(cls, N, m=1, **kw) -> "QContext":
        return cls(RootOfUnity(N, m), **kw)

    @property
    def is_root_of_unity(self) -> bool:
        return isinstance(self.mode, RootOfUnity)

    @contextmanager
    def working(self, extra: int = 10):
        with mpmath.workdps(self.digits + extra):
            yield

    @property
    def is_zero_q(self) -> bool:
        return isinstance(self.mode, GenericQ) and mpmath.mpmathify(self.mode.q) == 0

    @property
    def log_q(self):
        """The logarithm of q that fixes every fractional power q^z = exp(z log q)."""
        mode = self.mode
        if isinstance(mode, ExpInvA):
            return -1 / mpmath.mpf(mode.a)
        if isinstance(mode, GenericQ):
            if self.is_zero_q:
                return mpmath.ninf
            return mpmath.log(mpmath.mpmathify(mode.q))
        return 2j * mpmath.pi * mode.q_exponent / mode.M

    @property
    def q(self):
        if self.is_zero_q:
            return mpmath.mpf(0)
        return mpmath.exp(self.log_q)

    @property
    def abs_q(self):
        if self.is_root_of_unity:
            return mpmath.mpf(1)
        return abs(self.q)

    def qpow(self, z):
        """q^z on the branch fixed by :attr:`log_q`."""
        if self.is_zero_q:
            z = mpmath.mpmathify(z)
            if z == 0:
                return mpmath.mpf(1)
            if mpmath.re(z) > 0:
                return mpmath.mpf(0)
            raise DomainError("q^z undefined at q = 0 for Re z <= 0, z != 0")
        return mpmath.exp(z * self.log_q)

    def depth(self, offset_re=0, step=1) -> int:
        """Number of factors J with |q|^(offset + step*J) < 10^-(digits+5)."""
        if self.product_depth is not None:
            return int(self.product_depth)
        if self.is_zero_q:
            return 1
        if self.is_root_of_unity:
            raise DomainError("infinite q-products diverge at roots of unity")
        rate = -float(mpmath.log(self.abs_q))
        target = (self.digits + 5) * math.log(10)
        J = math.ceil((target / rate - float(offset_re)) / float(step)) + 1
        return max(J, 1)

    def with_digits(self, digits: int) -> "QContext":
        return QContext(self.mode, digits, self.product_depth, self.series_order)

    def with_depth(self, depth: int | None) -> "QContext":
        return QContext(self.mode, self.digits, depth, self.series_order)


# ---------------------------------------------------------------------------
# products


class QFactor(NamedTuple):
    """The factor family (1 - q^(offset + step*j))^power, j = 0, 1, 2, ..."""

    offset: object
    step: object = 1
    power: int = 1


class QValue(NamedTuple):
    """A numeric value together with an estimate of its relative error."""

    value: object
    error: object

    def __complex__(self):
        return complex(self.value)


def truncated_qproduct(factors: Sequence[QFactor], ctx: QContext, depth: int | None = None) -> QValue:
    r"""Evaluate :math:`\prod_f \prod_{j<J} (1-q^{c_f+s_f j})^{p_f}`.

    ``J`` defaults to the context depth computed separately for every factor
    family.  The returned error is a bound on the relative size of the
    discarded tail.
    """
    if not ctx.is_zero_q and ctx.abs_q >= 1:
        raise DomainError("truncated q-products need |q| < 1")
    with ctx.working():
        tol = mpmath.mpf(10) ** (-(ctx.digits + 2))
        value = mpmath.mpf(1)
        err = mpmath.mpf(0)
        log_abs = None if ctx.is_zero_q else mpmath.log(ctx.abs_q)
        for fi, f in enumerate(factors):
            step = mpmath.mpf(f.step) if not isinstance(f.step, Fraction) else mpmath.mpf(f.step.numerator) / f.step.denominator
            if not step > 0:
                raise DomainError("q-product factors need a positive step")
            offset = _mp(f.offset)
            J = depth if depth is not None else ctx.depth(mpmath.re(offset), step)
            for j in range(J):
                e = offset + step * j
                term = 1 - ctx.qpow(e)
                if f.power < 0 and abs(term) < tol:
                    raise PoleError(f"factor {fi} vanishes at j={j}", location=(j, fi))
                value *= term ** f.power
            if log_abs is not None:
                lead = mpmath.exp((mpmath.re(offset) + step * J) * log_abs)
                ratio = mpmath.exp(step * log_abs)
                err += 2 * abs(f.power) * lead / (1 - ratio)
        return QValue(+value, +err)


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpmathify(x)


def delta_k(x, k, ctx: QContext) -> QValue:
    """The truncated theta kernel with exponent pairs j+2x, j-2x over j+k+-2x."""
    x, k = _mp(x), _mp(k)
    factors = [
        QFactor(2 * x), QFactor(-2 * x),
        QFactor(k + 2 * x, 1, -1), QFactor(k - 2 * x, 1, -1),
    ]
    return _kernel(factors, ctx, "delta_k")


def mu_k(x, k, ctx: QContext) -> QValue:
    """The shifted kernel with exponent pairs j+2x, j+1-2x over j+k+2x, j+k+1-2x."""
    x, k = _mp(x), _mp(k)
    factors = [
        QFactor(2 * x), QFactor(1 - 2 * x),
        QFactor(k + 2 * x, 1, -1), QFactor(k + 1 - 2 * x, 1, -1),
    ]
    return _kernel(factors, ctx, "mu_k")


def _kernel(factors, ctx, name):
    try:
        return truncated_qproduct(factors, ctx)
    except PoleError as exc:
        j, fi = exc.location
        sign = "+" if fi == 2 else "-"
        raise PoleError(f"{name}: denominator vanishes at j={j} ({sign}2x branch)", location=(j, sign)) from None


def mu_k_array(x: np.ndarray, k, log_q: float, depth: int) -> np.ndarray:
    """Vectorized double-precision mu_k on an array of complex points."""
    qj = np.exp(log_q * np.arange(depth))[:, None]
    x = np.asarray(x, dtype=complex)[None, :]
    e = lambda z: np.exp(log_q * z)
    num = (1 - qj * e(2 * x)) * (1 - qj * e(1 - 2 * x))
    den = (1 - qj * e(k + 2 * x)) * (1 - qj * e(k + 1 - 2 * x))
    return np.prod(num / den, axis=0)


# ---------------------------------------------------------------------------
# Laurent polynomials


def _is_zero(c) -> bool:
    try:
        return c == 0
    except TypeError:  # pragma: no cover - exotic coefficient types
        return False


class LaurentPolynomial:
    """Sparse Laurent polynomial sum c_b X_b over integer exponent tuples b.

    Coefficients can be any ring elements supporting ``+``, ``*`` and a
    comparison with ``0``: Fractions, mpmath numbers, sympy field elements,
    cyclotomic values or nested Laurent polynomials.
    """

    __slots__ = ("_terms", "rank")

    def __init__(self, terms: Mapping | None = None, rank: int | None = None):
        clean = {}
        for b, c in (terms or {}).items():
            b = tuple(int(x) for x in b)
            if not _is_zero(c):
                clean[b] = c
        if rank is None:
            if not clean:
                raise ValueError("rank needed for the zero polynomial")
            rank = len(next(iter(clean)))
        for b in clean:
            if len(b) != rank:
                raise ValueError("inconsistent exponent lengths")
        self._terms = dict(sorted(clean.items()))
        self.rank = rank

    @classmethod
    def _raw(cls, terms: dict, rank: int) -> "LaurentPolynomial":
        obj = cls.__new__(cls)
        obj._terms = dict(sorted((b, c) for b, c in terms.items() if not _is_zero(c)))
        obj.rank = rank
        return obj

    @classmethod
    def monomial(cls, b, coeff=1) -> "LaurentPolynomial":
        b = tuple(b)
        return cls({b: coeff}, rank=len(b))

    @classmethod
    def constant(cls, c, rank: int) -> "LaurentPolynomial":
        return cls({(0,) * rank: c}, rank=rank)

    @classmethod
    def zero(cls, rank: int) -> "LaurentPolynomial":
        return cls({}, rank=rank)

    # container protocol ------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def support(self) -> list:
        return list(self._terms)

    def coefficient(self, b, default=0):
        return self._terms.get(tuple(b), default)

    def constant_term(self, default=0):
        return self._terms.get((0,) * self.rank, default)

    def __len__(self):
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    # arithmetic --------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.rank != self.rank:
                raise ValueError("rank mismatch")
            return other
        return LaurentPolynomial.constant(other, self.rank)

    def __add__(self, other):
        o = self._coerce(other)
        out = dict(self._terms)
        for b, c in o._terms.items():
            out[b] = out[b] + c if b in out else c
        return LaurentPolynomial._raw(out, self.rank)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw({b: -c for b, c in self._terms.items()}, self.rank)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            return LaurentPolynomial._raw({b: c * other for b, c in self._terms.items()}, self.rank)
        o = self._coerce(other)
        out: dict = {}
        for b, c in self._terms.items():
            for d, e in o._terms.items():
                key = tuple(x + y for x, y in zip(b, d))
                v = c * e
                out[key] = out[key] + v if key in out else v
        return LaurentPolynomial._raw(out, self.rank)

    def __rmul__(self, other):
        return LaurentPolynomial._raw({b: other * c for b, c in self._terms.items()}, self.rank)

    def __pow__(self, n: int):
        if n < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (b, c), = self._terms.items()
            return LaurentPolynomial({tuple(-x * (-n) for x in b): (1 / c) ** (-n)}, self.rank)
        result = LaurentPolynomial.constant(1, self.rank)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, LaurentPolynomial):
            if other.rank != self.rank:
                return False
            return (self - other).is_zero()
        if _is_zero(other):
            return self.is_zero()
        return (self - other).is_zero()

    def __hash__(self):
        return hash((self.rank, tuple(self._terms.items())))

    # transformations ---------------------------------------------------
    def map_coefficients(self, fn: Callable) -> "LaurentPolynomial":
        return LaurentPolynomial._raw({b: fn(c) for b, c in self._terms.items()}, self.rank)

    def map_exponents(self, fn: Callable) -> "LaurentPolynomial":
        out: dict = {}
        for b, c in self._terms.items():
            key = tuple(fn(b))
            out[key] = out[key] + c if key in out else c
        return LaurentPolynomial._raw(out, self.rank)

    def reflect(self) -> "LaurentPolynomial":
        """X_b -> X_{-b}, coefficients untouched."""
        return self.map_exponents(lambda b: tuple(-x for x in b))

    def evaluate(self, monomial_value: Callable, zero=0):
        """sum_b c_b * monomial_value(b)."""
        acc = zero
        for b, c in self._terms.items():
            acc = acc + c * monomial_value(b)
        return acc

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for b, c in self._terms.items():
            mono = "X" + "".join(f"[{x}]" for x in b) if any(b) else "1"
            parts.append(f"({c})*{mono}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# q-series


class QSeries:
    """Truncated series sum_e q^e * C_e with Laurent polynomial coefficients.

    Exponents are exact Fractions; only exponents strictly below ``order``
    are stored.
    """

    __slots__ = ("_coeffs", "order", "rank")

    def __init__(self, coefficients: Mapping, order, rank: int):
        self.order = Fraction(order)
        self.rank = rank
        clean = {}
        for e, poly in coefficients.items():
            e = Fraction(e)
            if e < self.order and not poly.is_zero():
                clean[e] = poly
        self._coeffs = dict(sorted(clean.items()))

    def exponents(self) -> list:
        return list(self._coeffs)

    def coefficient(self, e) -> LaurentPolynomial:
        return self._coeffs.get(Fraction(e), LaurentPolynomial.zero(self.rank))

    def items(self):
        return self._coeffs.items()

    def __add__(self, other: "QSeries") -> "QSeries":
        order = min(self.order, other.order)
        out = dict(self._coeffs)
        for e, p in other._coeffs.items():
            out[e] = out[e] + p if e in out else p
        return QSeries(out, order, self.rank)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return QSeries({e: p * other for e, p in self._coeffs.items()}, self.order, self.rank)
        low_a = min(self._coeffs, default=Fraction(0))
        low_b = min(other._coeffs, default=Fraction(0))
        order = min(self.order + low_b, other.order + low_a)
        out: dict = {}
        for e, p in self._coeffs.items():
            for f, r in other._coeffs.items():
                if e + f < order:
                    out[e + f] = out[e + f] + p * r if e + f in out else p * r
        return QSeries(out, order, self.rank)

    def x_coefficient(self, b) -> dict:
        """The series in q multiplying X_b, as {exponent: coefficient}."""
        b = tuple(b)
        out = {}
        for e, p in self._coeffs.items():
            c = p.coefficient(b, None)
            if c is not None:
                out[e] = c
        return out

    def evaluate(self, qpow: Callable, monomial_value: Callable, coeff_value: Callable = lambda c: c):
        acc = 0
        for e, p in self._coeffs.items():
            inner = 0
            for b, c in p.items():
                inner = inner + coeff_value(c) * monomial_value(b)
            acc = acc + qpow(e) * inner
        return acc

    def __repr__(self):
        return f"QSeries(order={self.order}, terms={sum(len(p) for p in self._coeffs.values())})"


def flat_mu(R, q_order: int, height_bound, k=None) -> dict:
    """Expansion of the measure as {(q_exp, t_exps, x_exps): integer}.

    With ``k=None`` the t_o stay formal (one exponent per root-length orbit,
    ordered as ``R.orbits``) and q-exponents are integers below ``q_order``.
    With a nonnegative rational multiplicity function ``k`` the substitution
    t_o = q_o^(k_o) is made, ``t_exps`` is empty and q-exponents are
    Fractions.  Only monomials X_c with (c, rho^v) <= height_bound are
    returned, and these are exact.

    The computation runs on a dense integer array indexed by
    (t-exponents, q-exponent, simple-root coordinates of c).  Factors in the
    X^{-1} direction are multiplied first: each of them costs a power of q,
    which bounds how negative the coordinates get.  Factors in the X direction
    only raise the height, so cutting at ``height_bound`` afterwards loses
    nothing.
    """
    orbits = list(R.orbits)
    rank = R.rank
    pos = list(R.positive_roots)
    hb = Fraction(height_bound)
    formal = k is None
    nus = {o: R.orbit_nu(o) for o in orbits}
    if formal:
        D = 1
    else:
        kv = {o: Fraction(k[o]) for o in orbits}
        if any(v < 0 for v in kv.values()):
            raise DomainError("substituted multiplicities must be nonnegative")
        D = math.lcm(*[(nus[o] * kv[o]).denominator for o in orbits])
    Q = q_order * D
    simple = [[int(x) for x in R.simple_coords(a)] for a in pos]
    h_max = max(sum(s) for s in simple)
    m_lo = -(q_order - 1) * h_max
    m_hi = int(hb) + max(rank - 1, 0) * (q_order - 1) * h_max
    n_orb = len(orbits) if formal else 0
    T = q_order + int(hb) + q_order * h_max + 1
    shape = (T,) * n_orb + (Q,) + (m_hi - m_lo + 1,) * rank
    A = np.zeros(shape, dtype=np.int64)
    A[(0,) * n_orb + (0,) + (-m_lo,) * rank] = 1

    # heights over the simple-root axes, for the cut at hb
    grids = np.meshgrid(*[np.arange(m_lo, m_hi + 1)] * rank, indexing="ij")
    over = sum(grids) > hb

    def shifted(arr, offsets):
        out = np.zeros_like(arr)
        src, dst = [], []
        for d, L in zip(offsets, arr.shape):
            if abs(d) >= L:
                return out
            src.append(slice(max(0, -d), L - max(0, d)))
            dst.append(slice(max(0, d), L - max(0, -d)))
        out[tuple(dst)] = arr[tuple(src)]
        return out

    def factor(A, alpha_simple, orbit, q_shift, sign, cut):
        # multiply by (1 - y)/(1 - t y) with y = X_{sign*alpha} q^(q_shift)
        dm = [sign * c for c in alpha_simple]
        dq_y = q_shift * D
        ty = [0] * n_orb
        if formal:
            ty[orbits.index(orbit)] = 1
            dq_ty = dq_y
        else:
            dq_ty = dq_y + int(nus[orbit] * kv[orbit] * D)
        g = A - shifted(A, [0] * n_orb + [dq_y] + dm)
        h = g.copy()
        term = g
        step = ty + [dq_ty] + dm
        while True:
            term = shifted(term, step)
            if cut:
                term[..., over] = 0
            if not term.any():
                break
            h = h + term
        if cut:
            h[..., over] = 0
        if h.dtype != object and np.abs(h).max() > 2 ** 40:
            h = h.astype(object)
        return h

    for alpha, sc in zip(pos, simple):
        nu = R.nu(alpha)
        o = R.orbit_of(alpha)
        i = 0
        while nu * (i + 1) < q_order:
            A = factor(A, sc, o, nu * (i + 1), -1, False)
            i += 1
    A[..., over] = 0
    for alpha, sc in zip(pos, simple):
        nu = R.nu(alpha)
        o = R.orbit_of(alpha)
        i = 0
        while nu * i < q_order:
            A = factor(A, sc, o, nu * i, 1, True)
            i += 1

    simple_roots = [tuple(R.cartan[i]) for i in range(rank)]
    out = {}
    for idx in zip(*np.nonzero(A)):
        c = int(A[idx])
        te = tuple(int(x) for x in idx[:n_orb])
        qi = int(idx[n_orb])
        m = [int(x) + m_lo for x in idx[n_orb + 1:]]
        xe = tuple(sum(m[j] * simple_roots[j][i] for j in range(rank)) for i in range(rank))
        qe = qi if formal else Fraction(qi, D)
        out[(qe, te, xe)] = c
    return out


def mu_series(R, k=None, M: int = 10, height_bound=None) -> QSeries:
    """The measure as a q-series to order ``M``.

    With ``k=None`` the coefficients are Laurent polynomials in the formal
    variables t_o (one per root-length orbit, ordered as ``R.orbits``).  If a
    multiplicity function with rational values is given, t_o = q_o^(k_o) is
    substituted and the coefficients are Fractions.  X-monomials X_c are
    kept for (c, rho^v) <= height_bound (default ``M``).
    """
    hb = M if height_bound is None else height_bound
    flat = flat_mu(R, M, hb)
    rank = R.rank
    n_orb = len(R.orbits)
    grouped: dict = {}
    if k is None:
        for (qe, te, xe), c in flat.items():
            grouped.setdefault(Fraction(qe), {}).setdefault(xe, {})
            inner = grouped[Fraction(qe)][xe]
            inner[te] = inner.get(te, 0) + c
        coeffs = {
            e: LaurentPolynomial({xe: LaurentPolynomial(tp, rank=n_orb) for xe, tp in d.items()}, rank=rank)
            for e, d in grouped.items()
        }
        return QSeries(coeffs, M, rank)
    kvals = [Fraction(k[o]) for o in R.orbits]
    nus = [R.orbit_nu(o) for o in R.orbits]
    for (qe, te, xe), c in flat.items():
        e = Fraction(qe) + sum(n * nu * kv for n, nu, kv in zip(te, nus, kvals))
        d = grouped.setdefault(e, {})
        d[xe] = d.get(xe, 0) + Fraction(c)
    coeffs = {e: LaurentPolynomial(d, rank=rank) for e, d in grouped.items()}
    # terms pushed below M by negative k would be incomplete; drop nothing
    # but cap the order at M (exponents with k >= 0 only grow)
    return QSeries(coeffs, M, rank)


def gaussian_series(R, M) -> QSeries:
    """sum over b in P with (b,b)/2 < M of q^((b,b)/2) X_b."""
    M = Fraction(M)
    rank = R.rank
    gram = np.array([[float(R.form[i][j]) for j in range(rank)] for i in range(rank)])
    lam = float(np.linalg.eigvalsh(gram).min())
    bound = int(math.floor(math.sqrt(2 * float(M) / lam))) + 1
    groups: dict = {}
    for b in _box(rank, bound):
        e = R.inner(b, b) / 2
        if e < M:
            groups.setdefault(e, {})[b] = Fraction(1)
    coeffs = {e: LaurentPolynomial(d, rank=rank) for e, d in groups.items()}
    return QSeries(coeffs, M, rank)


def _box(rank: int, bound: int) -> Iterable[tuple]:
    if rank == 0:
        yield ()
        return
    for head in range(-bound, bound + 1):
        for tail in _box(rank - 1, bound):
            yield (head,) + tail

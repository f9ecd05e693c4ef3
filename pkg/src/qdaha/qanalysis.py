"""Contour integrals, Jackson sums, classical references and zero tracking (rank one).

The q-integrals run along vertical lines ``x = c + iy`` in double precision.
The integrands decay like ``exp(-y^2/a)`` and are analytic in a strip
around the line, so the trapezoid rule converges geometrically.  The step
is halved until two successive values agree to the requested tolerance.
The Jackson sums and the product forms are evaluated with mpmath at the
context precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import mpmath
import numpy as np

from .errors import ConvergenceError, DomainError, PoleError
from .qseries import ExpInvA, QContext

# ---------------------------------------------------------------------------
# contour descriptions and results


@dataclass(frozen=True)
class VerticalLine:
    real_part: Fraction = Fraction(0)
    half_height: float | None = None


@dataclass(frozen=True)
class SharpPath:
    """Comes in from +infinity along Im x = eps, goes down the imaginary axis, leaves along Im x = -eps."""

    epsilon: float | None = None
    tail_length: float | None = None


@dataclass(frozen=True)
class ContourSpec:
    kind: VerticalLine | SharpPath
    tolerance: float = 1e-12
    max_halvings: int = 12


@dataclass
class ZeroRecord:
    location: complex
    a: float | None
    residual: float
    classical_partner: complex | None = None
    distance: float | None = None


@dataclass
class IntegralValue:
    value: complex
    error: float
    nodes: int = 0

    def __complex__(self):
        return complex(self.value)


def _a_of(ctx: QContext) -> float:
    if not isinstance(ctx.mode, ExpInvA):
        raise DomainError("contour integrals need q = exp(-1/a)")
    return float(ctx.mode.a)


def _mpc(z):
    return mpmath.mpmathify(z)


# ---------------------------------------------------------------------------
# classical references


def classical_gauss_integral(k, digits: int = 30, quadrature: bool = False):
    """Gamma(k + 1/2), or 2 int_0^oo exp(-x^2) x^(2k) dx with ``quadrature=True``."""
    with mpmath.workdps(digits + 5):
        k = _mpc(k)
        if quadrature:
            if not mpmath.re(k) > -0.5:
                raise DomainError("the Gaussian moment integral needs Re k > -1/2")
            return +(2 * mpmath.quad(lambda x: mpmath.exp(-x * x) * x ** (2 * k), [0, 1, mpmath.inf]))
        return +mpmath.gamma(k + mpmath.mpf(1) / 2)


def classical_Z(k, digits: int = 30, quadrature: bool = False):
    """(1 - 2^(1/2-k)) Gamma(k+1/2) zeta(k+1/2); the quadrature mode integrates |x|^(2k)/(e^(x^2)+1)."""
    with mpmath.workdps(digits + 5):
        k = _mpc(k)
        s = k + mpmath.mpf(1) / 2
        if mpmath.im(s) == 0 and mpmath.re(s) <= 0 and mpmath.re(s) == int(mpmath.re(s)):
            raise PoleError(f"Gamma(k+1/2) has a pole at k={k}", location=k)
        if quadrature:
            if not mpmath.re(k) > -0.5:
                raise DomainError("the integral form of Z needs Re k > -1/2")
            f = lambda x: x ** (2 * k) / (mpmath.exp(x * x) + 1)
            return +(2 * mpmath.quad(f, [0, 1, 3, mpmath.inf]))
        if s == 1:
            return +mpmath.log(2)  # removable: (1 - 2^(1-s)) zeta(s) -> ln 2
        return +((1 - mpmath.power(2, 1 - s)) * mpmath.gamma(s) * mpmath.zeta(s))


def classical_gauss_sum(N: int, digits: int = 30, exact: bool = False):
    """sum_{m=0}^{2N-1} exp(pi i m^2/(2N)); with ``exact=True`` an element of Q(zeta_{4N})."""
    if N < 1:
        raise DomainError("N must be positive")
    if exact:
        from .rootsofunity import gauss_sum

        return gauss_sum(N)
    with mpmath.workdps(digits + 10):
        tot = mpmath.fsum(mpmath.expjpi(mpmath.mpf(m * m) / (2 * N)) for m in range(2 * N))
        return +tot


# ---------------------------------------------------------------------------
# vectorized kernels on arrays of complex points


def _depth(a: float, extra=0.0) -> int:
    # q^J < 1e-18 with q = exp(-1/a)
    return int(math.ceil(a * 18 * math.log(10) + extra)) + 1


def _pochhammer_ratio(x: np.ndarray, a: float, num, den, J: int) -> np.ndarray:
    """prod_{j<J} prod_num (1 - q^(j + c(x))) / prod_den (1 - q^(j + c(x))), c given as callables."""
    lq = -1.0 / a
    x = np.asarray(x, dtype=complex)
    out = np.ones_like(x)
    block, chunk = 256, 4096
    for i0 in range(0, x.shape[0], chunk):
        xs = x[i0 : i0 + chunk]
        num_base = [np.exp(lq * f(xs)) for f in num]
        den_base = [np.exp(lq * f(xs)) for f in den]
        for j0 in range(0, J, block):
            qj = np.exp(lq * np.arange(j0, min(J, j0 + block)))[:, None]
            acc = np.ones((qj.shape[0], xs.shape[0]), dtype=complex)
            for b in num_base:
                acc *= 1 - qj * b[None, :]
            for b in den_base:
                acc /= 1 - qj * b[None, :]
            out[i0 : i0 + chunk] *= np.prod(acc, axis=0)
    return out


def delta_array(x: np.ndarray, k: complex, a: float) -> np.ndarray:
    return _pochhammer_ratio(
        x, a,
        [lambda z: 2 * z, lambda z: -2 * z],
        [lambda z: k + 2 * z, lambda z: k - 2 * z],
        _depth(a, abs(k.real)),
    )


def mu_array(x: np.ndarray, k: complex, a: float) -> np.ndarray:
    return _pochhammer_ratio(
        x, a,
        [lambda z: 2 * z, lambda z: 1 - 2 * z],
        [lambda z: k + 2 * z, lambda z: k + 1 - 2 * z],
        _depth(a, abs(k.real)),
    )


def _vertical_integral(f: Callable, a: float, c: float, strip: float, spec: ContourSpec) -> IntegralValue:
    """(-i) int_{c-i oo}^{c+i oo} f(x) dx = int f(c+iy) dy by the trapezoid rule with step halving.

    ``strip`` is the distance from the line to the nearest singularity.
    """
    line = spec.kind if isinstance(spec.kind, VerticalLine) else VerticalLine()
    Y = line.half_height or math.sqrt(a * (math.log(10) * 20 + c * c / a + 1)) + 2
    h = min(0.5, strip / 2, Y / 8)
    prev = None
    for _ in range(spec.max_halvings):
        n = int(math.ceil(Y / h))
        y = h * np.arange(-n, n + 1)
        vals = f(c + 1j * y)
        val = complex(h * np.sum(vals))
        # cancellation floor: rounding error of the sum itself
        floor = 64 * np.finfo(float).eps * h * float(np.sum(np.abs(vals)))
        if prev is not None:
            err = abs(val - prev)
            if err <= max(spec.tolerance * abs(val), floor):
                return IntegralValue(val, max(err, floor), len(y))
            last = err
        prev = val
        h /= 2
    raise ConvergenceError(f"trapezoid rule did not settle (last change {last:.3e})")


def _check_k(k, lower, what):
    k = complex(k)
    if not k.real > lower:
        raise DomainError(f"{what} needs Re k > {lower}, got k={k}")
    return k


# ---------------------------------------------------------------------------
# q-integrals


def q_gauss_delta(k, ctx: QContext, spec: ContourSpec | None = None):
    """(lhs, rhs): (-i) int over the imaginary axis of q^(-x^2) delta_k, and 2 sqrt(a pi) prod_{j>=0} (1-q^(j+k))/(1-q^(j+2k))."""
    a = _a_of(ctx)
    k = _check_k(k, 0, "the delta_k Gaussian integral")
    spec = spec or ContourSpec(VerticalLine(Fraction(0)), tolerance=1e-13)
    f = lambda x: np.exp(x * x / a) * delta_array(x, k, a)
    lhs = _vertical_integral(f, a, 0.0, k.real / 2, spec)
    with ctx.working():
        rhs = 2 * mpmath.sqrt(a * mpmath.pi) * _qratio(ctx, k, [(0, 1)], [(0, 2)])
    return lhs, rhs


def q_gauss_mu(k, ctx: QContext, spec: ContourSpec | None = None):
    """(lhs, rhs): (-i) int along Re x = 1/4 of q^(-x^2) mu_k, and sqrt(a pi) prod_{j>=1} (1-q^(j+k))/(1-q^(j+2k))."""
    a = _a_of(ctx)
    k = _check_k(k, -0.5, "the mu_k Gaussian integral")
    spec = spec or ContourSpec(VerticalLine(Fraction(1, 4)), tolerance=1e-13)
    f = lambda x: np.exp(x * x / a) * mu_array(x, k, a)
    lhs = _vertical_integral(f, a, 0.25, 0.25 + k.real / 2, spec)
    with ctx.working():
        rhs = mpmath.sqrt(a * mpmath.pi) * _qratio(ctx, k, [(1, 1)], [(1, 2)])
    return lhs, rhs


def q_zeta(k, ctx: QContext, spec: ContourSpec | None = None) -> IntegralValue:
    """(-i) int along Re x = 1/4 of mu_k/(q^(x^2) + 1), defined for Re k > -1/2."""
    a = _a_of(ctx)
    k = _check_k(k, -0.5, "the q-zeta integral (continuation is not implemented)")
    spec = spec or ContourSpec(VerticalLine(Fraction(1, 4)), tolerance=1e-12)
    f = lambda x: mu_array(x, k, a) / (np.exp(-x * x / a) + 1)
    strip = min(0.25 + k.real / 2, math.sqrt(math.pi * a / 2) - 0.25)
    return _vertical_integral(f, a, 0.25, strip, spec)


def _qratio(ctx: QContext, k, num, den):
    """prod_j prod (1 - q^(j + s + m k)) over numerator pairs (s, m) divided by the denominator ones."""
    k = _mpc(k)
    q = ctx.q
    J = ctx.depth(min(0, mpmath.re(k)) * 2) + int(2 * abs(mpmath.re(k)))
    out = mpmath.mpf(1)
    for j in range(J):
        for s, m in num:
            out *= 1 - ctx.qpow(j + s + m * k)
        for s, m in den:
            d = 1 - ctx.qpow(j + s + m * k)
            if abs(d) < mpmath.mpf(10) ** (-(ctx.digits + 2)):
                raise PoleError(f"factor 1-q^({j}+{s}+{m}k) vanishes", location=(j, s, m))
            out /= d
    return out


# ---------------------------------------------------------------------------
# Jackson sums


def _jackson_terms(k, ctx: QContext, weight: Callable):
    """sum_j weight(j) (1-q^(j+k))/(1-q^k) prod_{l=1}^j (1-q^(l+2k-1))/(1-q^l)."""
    one = mpmath.mpf(1)
    den = one - ctx.qpow(k)
    if abs(den) < mpmath.mpf(10) ** (-(ctx.digits + 2)):
        raise PoleError("1 - q^k vanishes in the Jackson sum; use the product form", location=k)
    tol = mpmath.mpf(10) ** (-(ctx.digits + 5))
    total = mpmath.mpf(0)
    prod = one
    small = 0
    j = 0
    while True:
        if j:
            prod *= (one - ctx.qpow(j + 2 * k - 1)) / (one - ctx.qpow(j))
        term = weight(j) * (one - ctx.qpow(j + k)) / den * prod
        total += term
        if abs(term) <= tol * max(abs(total), tol):
            small += 1
            if small >= 3:
                return total
        else:
            small = 0
        j += 1
        if j > 100000:
            raise ConvergenceError("Jackson sum did not converge")


def jackson_prefactor(k, ctx: QContext):
    """-(a pi/2) prod_{j>=0} (1-q^(j+k))(1-q^(j-k)) / ((1-q^(j+2k))(1-q^(j+1)))."""
    a = _a_of(ctx)
    with ctx.working():
        return -(a * mpmath.pi / 2) * _qratio(ctx, k, [(0, 1), (0, -1)], [(0, 2), (1, 0)])


def jackson_gauss_product(k, ctx: QContext):
    """q^(k^2/4) prod_{j>=1} (1-q^(j/2))(1-q^(j+k))(1+q^(j/2-1/4+k/2))(1+q^(j/2-1/4-k/2))/(1-q^j)."""
    with ctx.working():
        k = _mpc(k)
        out = ctx.qpow(k * k / 4)
        J = 2 * ctx.depth(0) + int(2 * abs(mpmath.re(k))) + 4
        for j in range(1, J + 1):
            h = mpmath.mpf(j) / 2
            out *= (1 - ctx.qpow(h)) * (1 - ctx.qpow(j + k)) * (1 + ctx.qpow(h - 0.25 + k / 2)) * (1 + ctx.qpow(h - 0.25 - k / 2))
            out /= 1 - ctx.qpow(j)
        return +out


@dataclass
class JacksonGauss:
    sum_form: object
    product_form: object
    integral_form: object | None = None
    integral_target: object | None = None


def jackson_gauss(k, ctx: QContext, with_integral: bool = False, spec: ContourSpec | None = None) -> JacksonGauss:
    """The Jackson sum g(k), its product form, and optionally (1/2i) int_sharp q^(x^2) delta_k dx with its predicted value."""
    with ctx.working():
        k = _mpc(k)
        s = _jackson_terms(k, ctx, lambda j: ctx.qpow((k - j) ** 2 / 4))
        p = jackson_gauss_product(k, ctx)
    out = JacksonGauss(s, p)
    if with_integral:
        a = _a_of(ctx)
        kc = complex(k)
        out.integral_form = sharp_integral(lambda x: np.exp(-x * x / a) * delta_array(x, kc, a), kc, ctx, spec)
        out.integral_target = jackson_prefactor(k, ctx) * s
    return out


def jackson_zeta(k, ctx: QContext):
    """-(a pi/2) prod(...) times sum_j q^(-kj) (q^(-(k+j)^2/4)+1)^(-1) (1-q^(j+k))/(1-q^k) prod_l (...)."""
    with ctx.working():
        k = _mpc(k)
        pre = jackson_prefactor(k, ctx)
        if pre == 0:
            return mpmath.mpf(0)
        z = _jackson_terms(k, ctx, lambda j: ctx.qpow(-k * j) / (ctx.qpow(-(k + j) ** 2 / 4) + 1))
        return +(pre * z)


def sharp_integral(f: Callable, k, ctx: QContext, spec: ContourSpec | None = None, order: int = 24) -> IntegralValue:
    """(1/2i) int over the sharp path of the vectorized integrand f.

    The path runs from +oo + i eps to i eps, down the imaginary axis to
    -i eps, and back to +oo - i eps.  eps defaults to max(2|Im k|, 0.05) and
    the tails stop where exp(-x^2/a) is negligible.  Composite Gauss-Legendre
    panels of width about eps are used and halved until the value settles.
    """
    a = _a_of(ctx)
    spec = spec or ContourSpec(SharpPath(), tolerance=1e-10)
    path = spec.kind if isinstance(spec.kind, SharpPath) else SharpPath()
    k = complex(k)
    eps = path.epsilon if path.epsilon is not None else max(2 * abs(k.imag), 0.05)
    if not eps > abs(k.imag) / 2:
        raise DomainError("the sharp path needs eps > |Im k|/2")
    L = path.tail_length or math.sqrt(a * 20 * math.log(10)) + 1
    t, w = np.polynomial.legendre.leggauss(order)

    def panels(lo, hi, n):
        edges = np.linspace(lo, hi, n + 1)
        mid = (edges[1:] + edges[:-1]) / 2
        half = (edges[1:] - edges[:-1]) / 2
        return (mid[:, None] + half[:, None] * t[None, :]).ravel(), (half[:, None] * w[None, :]).ravel()

    prev = None
    n = max(4, int(math.ceil(L / eps)))
    for _ in range(spec.max_halvings):
        x, wx = panels(0.0, L, n)
        y, wy = panels(-eps, eps, 2)
        top = np.sum(wx * f(x + 1j * eps))  # traversed right to left
        bottom = np.sum(wx * f(x - 1j * eps))
        down = -1j * np.sum(wy * f(-1j * y))  # x = -iy runs from i eps to -i eps
        val = complex((-top + down + bottom) / 2j)
        if prev is not None and abs(val - prev) <= spec.tolerance * max(abs(val), 1e-300):
            return IntegralValue(val, abs(val - prev), 2 * len(x) + len(y))
        prev = val
        n *= 2
    raise ConvergenceError("sharp-path quadrature did not settle")


# ---------------------------------------------------------------------------
# zeros


def classical_zeros(im_lo: float, im_hi: float, digits: int = 30) -> list:
    """Zeros of Z(k) with im_lo <= Im k <= im_hi: k = i gamma from zeta and k = 1/2 + 2 pi i n/ln 2."""
    out = []
    with mpmath.workdps(digits + 5):
        n = 1
        while True:
            z = mpmath.zetazero(n)
            g = mpmath.im(z)
            if g > im_hi:
                break
            if g >= im_lo:
                out.append(complex(z - mpmath.mpf(1) / 2))
            n += 1
        negs = []
        n = 1
        while True:
            g = -mpmath.im(mpmath.zetazero(n))
            if g < im_lo:
                break
            if g <= im_hi:
                negs.append(complex(0, float(g)))
            n += 1
        out += negs
        step = 2 * mpmath.pi / mpmath.log(2)
        n_lo = int(mpmath.ceil(im_lo / step))
        n_hi = int(mpmath.floor(im_hi / step))
        out += [complex(0.5, float(n * step)) for n in range(n_lo, n_hi + 1) if n != 0]
    return sorted(out, key=lambda z: (z.imag, z.real))


def zero_function(name: str, ctx: QContext | None = None, digits: int = 25) -> Callable:
    """A complex function of k for ``classical_Z``, ``q_zeta`` or ``jackson_zeta``."""
    if name == "classical_Z":
        return lambda k: complex(classical_Z(k, digits))
    if ctx is None:
        raise DomainError(f"{name} needs a q-context")
    if name == "q_zeta":
        return lambda k: q_zeta(k, ctx).value
    if name == "jackson_zeta":
        return lambda k: complex(jackson_zeta(k, ctx))
    raise DomainError(f"unknown zero function {name!r}")


def winding_number(f: Callable, region, samples: int = 400) -> int:
    """Zeros minus poles of f inside the rectangle (re_lo, re_hi, im_lo, im_hi) by the argument principle."""
    re_lo, re_hi, im_lo, im_hi = region
    corners = [complex(re_lo, im_lo), complex(re_hi, im_lo), complex(re_hi, im_hi), complex(re_lo, im_hi)]
    total = 0.0
    prev = None
    for i in range(4):
        z0, z1 = corners[i], corners[(i + 1) % 4]
        for t in np.linspace(0, 1, samples, endpoint=False):
            v = f(z0 + (z1 - z0) * t)
            if prev is not None:
                total += np.angle(v / prev)
            prev = v
    total += np.angle(f(corners[0]) / prev)
    return int(round(total / (2 * math.pi)))


def _newton(f, z0, tol, max_iter=60, box=None):
    z = complex(z0)
    h = 1e-6
    for _ in range(max_iter):
        if box is not None and not (box[0] <= z.real <= box[1] and box[2] <= z.imag <= box[3]):
            raise ConvergenceError(f"Newton refinement from {z0} left the search box")
        fz = f(z)
        d = (f(z + h) - f(z - h)) / (2 * h)
        if d == 0:
            break
        step = fz / d
        z -= step
        if abs(step) < tol:
            return z, abs(f(z))
    raise ConvergenceError(f"Newton refinement from {z0} did not converge")


def find_zeros(
    f: Callable,
    region,
    a: float | None = None,
    tol: float = 1e-9,
    spacing: float = 0.25,
    residual_tol: float | None = None,
    partners: list | None = None,
) -> list:
    """Zeros of f in the rectangle (re_lo, re_hi, im_lo, im_hi), Re k > -1/2.

    |f| is sampled on a grid; every interior local minimum seeds a complex
    Newton iteration.  Converged points inside the region are deduplicated
    and paired with the nearest classical zero within min(1, gap/2).
    """
    re_lo, re_hi, im_lo, im_hi = region
    if re_lo <= -0.5:
        raise DomainError("zero search must stay in Re k > -1/2")
    xs = np.arange(re_lo, re_hi + spacing / 2, spacing)
    ys = np.arange(im_lo, im_hi + spacing / 2, spacing)

    def size(z):
        try:
            return abs(f(z))
        except ConvergenceError:
            return np.inf

    vals = np.array([[size(complex(x, y)) for x in xs] for y in ys])
    pad = 4 * spacing
    box = (max(re_lo - pad, -0.5 + 1e-9), re_hi + pad, im_lo - pad, im_hi + pad)
    seeds = []
    for i in range(len(ys)):
        for j in range(len(xs)):
            v = vals[i, j]
            nb = vals[max(i - 1, 0) : i + 2, max(j - 1, 0) : j + 2]
            if v <= nb.min():
                seeds.append(complex(xs[j], ys[i]))
    found = []
    for s in seeds:
        try:
            z, res = _newton(f, s, tol, box=box)
        except (ConvergenceError, DomainError):  # diverged or left the strip
            continue
        if not (re_lo <= z.real <= re_hi and im_lo <= z.imag <= im_hi):
            continue
        if residual_tol is not None and res > residual_tol:
            continue
        if any(abs(z - w.location) < 1e3 * tol for w in found):
            continue
        found.append(ZeroRecord(z, a, res))
    if partners is None:
        partners = classical_zeros(im_lo - 2, im_hi + 2)
    for r in found:
        pair_zero(r, partners)
    return sorted(found, key=lambda r: (r.location.imag, r.location.real))


def pair_zero(record: ZeroRecord, partners: list) -> None:
    if not partners:
        return
    best = min(partners, key=lambda p: abs(p - record.location))
    others = sorted(abs(best - p) for p in partners if p != best)
    radius = min(1.0, others[0] / 2) if others else 1.0
    d = abs(best - record.location)
    if d <= radius:
        record.classical_partner = best
        record.distance = d

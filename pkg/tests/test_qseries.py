from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdaha.errors import DomainError, PoleError
from qdaha.qseries import (
    LaurentPolynomial,
    QContext,
    QFactor,
    delta_k,
    gaussian_series,
    mu_k,
    mu_series,
    truncated_qproduct,
)
from qdaha.rootdata import MultiplicityFunction, build_root_system

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)

small = st.floats(min_value=-0.45, max_value=0.45, allow_nan=False)
qs = st.floats(min_value=0.05, max_value=0.7)


def close(a, b, tol):
    return abs(a - b) <= tol * max(1, abs(b))


# --- truncated products -------------------------------------------------


def test_empty_product_is_one():
    v = truncated_qproduct([], QContext.generic(0.5))
    assert v.value == 1 and v.error == 0


def test_zero_q_limit():
    v = truncated_qproduct([QFactor(1)], QContext.generic(0))
    assert v.value == 1


def test_depth_doubling_euler_product():
    ctx = QContext.generic(0.5, digits=30)
    J = ctx.depth(1)
    a = truncated_qproduct([QFactor(1)], ctx, depth=J).value
    b = truncated_qproduct([QFactor(1)], ctx, depth=2 * J).value
    assert abs(a - b) < mpmath.mpf(10) ** -30
    # against mpmath's q-Pochhammer
    with mpmath.workdps(40):
        assert abs(a - mpmath.qp(mpmath.mpf("0.5"))) < mpmath.mpf(10) ** -30


def test_error_estimate_bounds_tail():
    ctx = QContext.generic(0.3, digits=20)
    short = truncated_qproduct([QFactor(1)], ctx, depth=10)
    full = truncated_qproduct([QFactor(1)], ctx, depth=200)
    assert abs(short.value - full.value) / abs(full.value) <= short.error


def test_unit_circle_is_rejected():
    with pytest.raises(DomainError):
        QContext.generic(1.0)
    with pytest.raises(DomainError):
        truncated_qproduct([QFactor(1)], QContext.root_of_unity(5))


def test_vanishing_denominator():
    with pytest.raises(PoleError):
        truncated_qproduct([QFactor(-2, 1, -1)], QContext.generic(0.5))


# --- kernels --------------------------------------------------------------


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0.01, 0.45), y=small, q=qs)
def test_delta_at_k0_is_one(x, y, q):
    # x = 0 is a removable 0/0 that the evaluator reports as a pole
    ctx = QContext.generic(q, digits=20)
    v = delta_k(complex(x, y), 0, ctx).value
    assert close(v, 1, 1e-18)
    assert close(mu_k(complex(x, y), 0, ctx).value, 1, 1e-18)


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0.05, 0.45), y=small, q=qs)
def test_k1_telescopes(x, y, q):
    ctx = QContext.generic(q, digits=20)
    z = mpmath.mpc(x, y)
    qp = ctx.qpow
    with mpmath.workdps(30):
        assert close(delta_k(z, 1, ctx).value, (1 - qp(2 * z)) * (1 - qp(-2 * z)), 1e-17)
        assert close(mu_k(z, 1, ctx).value, (1 - qp(2 * z)) * (1 - qp(1 - 2 * z)), 1e-17)


@settings(max_examples=30, deadline=None)
@given(x=st.floats(0.02, 0.48), y=small, kr=st.floats(-0.4, 2.5), ki=small, q=qs)
def test_mu_symmetry(x, y, kr, ki, q):
    ctx = QContext.generic(q, digits=20)
    z = mpmath.mpc(x, y)
    k = mpmath.mpc(kr, ki)
    with mpmath.workdps(30):
        a = mu_k(z, k, ctx).value
        b = mu_k(mpmath.mpf(1) / 2 - z, k, ctx).value
        assert close(a, b, 1e-18)


def test_delta_depth_doubling():
    ctx = QContext.generic(0.3, digits=30)
    k, x = mpmath.mpc(0.7, 0.2), mpmath.mpc(0, 0.1)
    a = delta_k(x, k, ctx).value
    b = delta_k(x, k, ctx.with_depth(2 * ctx.depth(0))).value
    assert abs(a - b) < mpmath.mpf(10) ** -30


def test_delta_pole_is_reported():
    with pytest.raises(PoleError) as info:
        delta_k(-0.25, 0.5, QContext.generic(0.4))
    assert info.value.location == (0, "+")


# --- Laurent polynomials ---------------------------------------------------

polys = st.dictionaries(
    st.tuples(st.integers(-3, 3), st.integers(-3, 3)),
    st.fractions(min_value=-4, max_value=4, max_denominator=5),
    max_size=5,
).map(lambda d: LaurentPolynomial(d, rank=2))


@settings(max_examples=40, deadline=None)
@given(f=polys, g=polys, h=polys)
def test_laurent_ring_axioms(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == 0
    assert (f + 1) - 1 == f


@settings(max_examples=40, deadline=None)
@given(f=polys, g=polys)
def test_laurent_reflect_is_multiplicative(f, g):
    assert (f * g).reflect() == f.reflect() * g.reflect()


def test_laurent_inverse_monomial():
    m = LaurentPolynomial.monomial((2, -1), Fraction(3))
    assert m * m ** -1 == 1
    with pytest.raises(ValueError):
        (m + 1) ** -1


# --- mu and the Gaussian as series -----------------------------------------


def test_mu_series_order0_geometric():
    s = mu_series(A1, None, M=4)
    c0 = s.coefficient(0)
    # (1 - X_a)/(1 - t X_a) = 1 + sum_n (t^n - t^{n-1}) X_a^n, X_a = X^2
    expected = {(0,): LaurentPolynomial({(0,): 1}, rank=1)}
    for n in range(1, 5):
        expected[(2 * n,)] = LaurentPolynomial({(n,): 1, (n - 1,): -1}, rank=1)
    assert c0 == LaurentPolynomial(expected, rank=1)


@pytest.mark.parametrize("k,M,tol", [(1, 20, 1e-35), (Fraction(1, 2), 30, 1e-16), (Fraction(3, 2), 40, 1e-22)])
def test_mu_series_specializes_to_kernel(k, M, tol):
    s = mu_series(A1, MultiplicityFunction.uniform(A1, k), M=M)
    q, x = mpmath.mpf("0.2"), mpmath.mpf("0.15")
    with mpmath.workdps(40):
        val = s.evaluate(lambda e: q ** (mpmath.mpf(e.numerator) / e.denominator), lambda b: q ** (x * b[0]))
        ref = mu_k(x, mpmath.mpf(k.numerator) / k.denominator if isinstance(k, Fraction) else k,
                   QContext.generic(q, digits=35)).value
        assert abs(val - ref) / abs(ref) < tol


def test_mu_series_is_one_at_t_equal_one():
    s = mu_series(A2, MultiplicityFunction.uniform(A2, 0), M=6)
    assert s.exponents() == [0]
    assert s.coefficient(0) == 1


def test_gaussian_series_a1():
    g = gaussian_series(A1, 5)
    expected = {}
    for n in range(-5, 6):
        e = Fraction(n * n, 4)
        if e < 5:
            expected.setdefault(e, {})[(n,)] = 1
    assert sorted(g.exponents()) == sorted(expected)
    for e, terms in expected.items():
        assert g.coefficient(e) == LaurentPolynomial(terms, rank=1)


@pytest.mark.parametrize("letter,rank", [("A", 2), ("B", 2), ("G", 2)])
def test_gaussian_series_invariance(letter, rank):
    R = build_root_system(letter, rank)
    g = gaussian_series(R, 4)
    assert g.coefficient(0) == 1
    for e, poly in g.items():
        for b in poly.support():
            for w in R.weyl_group:
                assert poly.coefficient(tuple(int(x) for x in w.apply(b))) == 1

import math

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdaha.errors import DomainError, PoleError
from qdaha.qanalysis import (
    ContourSpec,
    VerticalLine,
    _newton,
    classical_gauss_integral,
    classical_gauss_sum,
    classical_Z,
    classical_zeros,
    find_zeros,
    jackson_gauss,
    jackson_zeta,
    q_gauss_delta,
    q_gauss_mu,
    q_zeta,
    zero_function,
)
from qdaha.qseries import QContext


def rel(a, b):
    return abs(complex(a) - complex(b)) / abs(complex(b))


# --- classical references --------------------------------------------------------


def test_classical_gauss_integral():
    with mpmath.workdps(30):
        assert abs(classical_gauss_integral(0) - mpmath.sqrt(mpmath.pi)) < 1e-28
        assert abs(classical_gauss_integral(0.5) - 1) < 1e-28
        quad = classical_gauss_integral(1, quadrature=True)
        assert abs(quad - mpmath.gamma(1.5)) < 1e-27
    with pytest.raises(DomainError):
        classical_gauss_integral(-0.6, quadrature=True)


def test_classical_Z_values():
    with mpmath.workdps(30):
        assert abs(classical_Z(0.5) - mpmath.log(2)) < 1e-28
        assert abs(classical_Z(1.5) - mpmath.pi ** 2 / 12) < 1e-28
        assert abs(classical_Z(1, quadrature=True) - classical_Z(1)) < 1e-27
    with pytest.raises(PoleError):
        classical_Z(-1.5)


@pytest.mark.parametrize("N,expected", [(1, 1 + 1j), (2, (1 + 1j) * math.sqrt(2)), (25, 5 + 5j)])
def test_classical_gauss_sum(N, expected):
    assert abs(complex(classical_gauss_sum(N)) - expected) < 1e-14
    with mpmath.workdps(40):
        assert abs(classical_gauss_sum(N) - (1 + 1j) * mpmath.sqrt(N)) < mpmath.mpf(10) ** -28


# --- q-Gaussian integrals. The quadrature is double precision, so 1e-8 is the target. ---


@pytest.mark.parametrize("a,k", [(1, 1), (2, 0.5), (1, 0.5), (2, 1)])
def test_delta_integral_identity(a, k):
    lhs, rhs = q_gauss_delta(k, QContext.exp_inv_a(a))
    assert rel(lhs.value, rhs) < 1e-8


@pytest.mark.parametrize("a,k", [(1, -0.3), (1, 1), (2, 0.5), (2, -0.3)])
def test_mu_integral_identity(a, k):
    lhs, rhs = q_gauss_mu(k, QContext.exp_inv_a(a))
    assert rel(lhs.value, rhs) < 1e-8


def test_product_sides_tend_to_constants():
    ctx = QContext.exp_inv_a(1)
    _, rhs5 = q_gauss_delta(200, ctx)
    _, rhs6 = q_gauss_mu(200, ctx)
    assert rel(rhs5, 2 * mpmath.sqrt(mpmath.pi)) < 1e-12
    assert rel(rhs6, mpmath.sqrt(mpmath.pi)) < 1e-12


def test_integrals_reject_the_wrong_half_plane():
    ctx = QContext.exp_inv_a(1)
    with pytest.raises(DomainError):
        q_gauss_delta(-0.1, ctx)
    with pytest.raises(DomainError):
        q_gauss_mu(-0.6, ctx)
    with pytest.raises(DomainError):
        q_zeta(-0.7, ctx)


@settings(max_examples=20, deadline=None)
@given(a=st.floats(0.5, 4), kr=st.floats(0.15, 2.5), ki=st.floats(-1, 1))
def test_identity_suite_random(a, kr, ki):
    ctx = QContext.exp_inv_a(a)
    k = complex(kr, ki)
    lhs, rhs = q_gauss_delta(k, ctx)
    assert rel(lhs.value, rhs) < 1e-8
    lhs, rhs = q_gauss_mu(k - 0.5, ctx)
    assert rel(lhs.value, rhs) < 1e-8
    j = jackson_gauss(k, QContext.exp_inv_a(a))
    assert rel(j.sum_form, j.product_form) < 1e-20


def test_quadrature_refinement_is_stable():
    ctx = QContext.exp_inv_a(1)
    coarse = q_zeta(1, ctx, ContourSpec(VerticalLine(), tolerance=1e-9)).value
    fine = q_zeta(1, ctx, ContourSpec(VerticalLine(), tolerance=1e-14)).value
    assert abs(coarse - fine) < 1e-8 * abs(fine)


def test_q_zeta_is_periodic():
    a = 1.5
    ctx = QContext.exp_inv_a(a)
    k = complex(0.8, 0.3)
    z1 = q_zeta(k, ctx).value
    z2 = q_zeta(k + 2j * math.pi * a, ctx).value
    assert abs(z1 - z2) < 1e-9 * abs(z1)


def test_limits_carry_a_factor_two():
    # mu_k ~ (2y/a)^{2k} on Re x = 1/4, so (a/4)^{k-1/2} times the integral over
    # the whole vertical line tends to 2 Gamma(k+1/2) and 2 Z(k)
    lhs, _ = q_gauss_mu(1, QContext.exp_inv_a(800))
    assert abs((800 / 4) ** 0.5 * lhs.value / (2 * float(mpmath.gamma(1.5))) - 1) < 0.01
    z = q_zeta(1.5, QContext.exp_inv_a(400)).value
    assert abs((400 / 4) * z / (2 * math.pi ** 2 / 12) - 1) < 0.02


# --- Jackson sums -------------------------------------------------------------------


def test_jackson_sum_equals_product():
    for q, k in [(0.5, 1), (0.5, -0.3), (0.2, 2.3), (0.37, complex(0.4, 0.6))]:
        ctx = QContext.generic(q, digits=40)
        j = jackson_gauss(k, ctx)
        assert rel(j.sum_form, j.product_form) < 1e-37


def test_jackson_sum_pole():
    with pytest.raises(PoleError):
        jackson_gauss(0, QContext.generic(0.5))


def test_sharp_integral_matches():
    # at k = 1 the prefactor vanishes and both sides are zero
    j = jackson_gauss(1, QContext.exp_inv_a(1), with_integral=True)
    assert j.integral_target == 0 and abs(j.integral_form.value) < 1e-6
    j = jackson_gauss(complex(0.7, 0.02), QContext.exp_inv_a(1), with_integral=True)
    assert rel(j.integral_form.value, j.integral_target) < 1e-6


def test_jackson_zeta_vanishes_at_positive_integers():
    assert jackson_zeta(1, QContext.exp_inv_a(2)) == 0
    assert jackson_zeta(2, QContext.exp_inv_a(2)) == 0


def test_jackson_zeta_depth_stability():
    ctx = QContext.exp_inv_a(2, digits=30)
    a = jackson_zeta(0.7, ctx)
    b = jackson_zeta(0.7, ctx.with_digits(45))
    assert abs(a - b) < 1e-8 * abs(b)


def test_jackson_zeta_limit():
    a = 100
    z = jackson_zeta(1.5, QContext.exp_inv_a(a))
    target = math.sin(1.5 * math.pi) * math.pi ** 2 / 12
    assert abs((a / 4) * complex(z).real / target - 1) < 0.03


# --- zeros ------------------------------------------------------------------------


def test_classical_zero_list():
    zs = classical_zeros(0, 20)
    assert any(abs(z - 14.134725141734695j) < 1e-12 for z in zs)
    assert any(abs(z - complex(0.5, 2 * math.pi / math.log(2))) < 1e-12 for z in zs)


def test_find_first_classical_zero():
    f = zero_function("classical_Z")
    found = find_zeros(f, (-0.3, 0.3, 13.5, 14.6), spacing=0.2, tol=1e-12)
    assert len(found) == 1
    z = found[0]
    assert abs(z.location - 14.134725141734695j) < 1e-6
    assert z.residual < 1e-9
    assert z.classical_partner is not None and z.distance < 1e-6


def test_find_eta_factor_zero():
    f = zero_function("classical_Z")
    found = find_zeros(f, (0.2, 0.8, 8.6, 9.6), spacing=0.2, tol=1e-12)
    assert len(found) == 1
    assert abs(found[0].location - complex(0.5, 2 * math.pi / math.log(2))) < 1e-9


def test_refinement_is_start_independent():
    f = zero_function("classical_Z", digits=30)
    zs = [_newton(f, complex(dx, 14.1347 + dy), 1e-14)[0] for dx, dy in [(0.1, 0), (-0.1, 0.05), (0, -0.1)]]
    assert max(abs(z - zs[0]) for z in zs) < 1e-12


def test_zero_search_rejects_left_of_strip():
    with pytest.raises(DomainError):
        find_zeros(zero_function("classical_Z"), (-0.6, 0, 1, 2))

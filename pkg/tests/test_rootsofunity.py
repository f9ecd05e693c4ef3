import json
import random
from fractions import Fraction

import mpmath
import pytest

from qdaha.coefficients import CyclotomicDomain
from qdaha.daha import PolynomialRepresentation
from qdaha.errors import DomainError, EmptyModule
from qdaha.qanalysis import classical_gauss_sum
from qdaha.qseries import LaurentPolynomial
from qdaha.rootdata import MultiplicityFunction, build_root_system
from qdaha.rootsofunity import (
    bowtie,
    build_Vk,
    discrete_master,
    discrete_pairing_N,
    gauss_selberg,
    gauss_selberg_csv,
    gauss_selberg_scale,
    gauss_sum,
    is_irreducible,
    pairing_radical_rank,
    psl2z_action,
    verlinde_algebra,
    verlinde_product,
)

A1 = build_root_system("A", 1)
ADMISSIBLE = [(N, k) for N in range(2, 13) for k in range(1, N // 2 + 1)]


# --- the index set -------------------------------------------------------------------


def test_bowtie_examples():
    assert bowtie(5, 1) == [-3, -2, -1, 2, 3, 4]
    assert bowtie(5, 2) == [-2, 3]


def test_bowtie_sizes():
    for N in range(2, 13):
        for k in range(1, (N + 1) // 2):
            if 2 * k < N:
                assert len(bowtie(N, k)) == 2 * (N - 2 * k)


def test_bowtie_degenerate_and_invalid():
    with pytest.raises(EmptyModule):
        bowtie(6, 3)
    with pytest.raises(DomainError):
        bowtie(5, 3)


# --- V_k ------------------------------------------------------------------------------


@pytest.mark.parametrize("N,k", [(5, 1), (7, 1), (7, 2), (8, 2), (9, 3)])
def test_vk_relations_and_dimensions(N, k):
    V = build_Vk(N, k)
    assert V.dim == 2 * (N - 2 * k)
    assert len(V.plus) == N - 2 * k + 1
    assert len(V.minus) == N - 2 * k - 1
    assert all(V.relations().values())


@pytest.mark.parametrize("N,k", [(5, 1), (7, 2)])
def test_evaluation_map_intertwines(N, k):
    V = build_Vk(N, k)
    D = CyclotomicDomain(A1, N, MultiplicityFunction.uniform(A1, k))
    rep = PolynomialRepresentation(D)
    F = D.F
    rng = random.Random(N * 100 + k)
    for _ in range(10):
        terms = {(rng.randint(-4, 4),): F.rational(Fraction(rng.randint(-5, 5), rng.randint(1, 3))) for _ in range(4)}
        f = LaurentPolynomial(terms, rank=1)
        vf = V.evaluate(f)
        assert V.evaluate(rep.T(1, f)) == V.T.apply(vf)
        assert V.evaluate(rep.X((1,), f)) == V.X.apply(vf)
        assert V.evaluate(rep.Y((1,), f)) == V.Y.apply(vf)


# --- the projective action -----------------------------------------------------------


def test_tau_plus_is_gaussian_diagonal():
    N, k = 7, 1
    V = build_Vk(N, k)
    G = psl2z_action(V).tau_plus
    z = V.F.zeta_power
    for i, m in enumerate(V.labels):
        for j in range(V.dim):
            assert G.rows[i][j] == (z(m * m) if i == j else V.F.zero())


@pytest.mark.parametrize("N,k", [(5, 1), (7, 1), (7, 2), (8, 2)])
def test_projectivity(N, k):
    rep = psl2z_action(build_Vk(N, k))
    assert rep.scalar is not None
    assert all(rep.relations.values()), rep.relations


@pytest.mark.parametrize("N,k", [(5, 1), (7, 2), (8, 3), (11, 4)])
def test_vk_is_irreducible(N, k):
    assert is_irreducible(build_Vk(N, k))


def test_minus_part_matches_next_plus_part():
    for N, k in [(7, 1), (9, 2), (10, 1)]:
        assert len(build_Vk(N, k).minus) == len(build_Vk(N, k + 1).plus) == N - 2 * k - 1


# --- Verlinde algebras ---------------------------------------------------------------


def _as_rational(c):
    s = c.as_strings()
    assert all(x == "0" for x in s[1:]), s
    return Fraction(s[0])


@pytest.mark.parametrize("N,k", [(5, 1), (5, 2), (7, 2), (8, 2)])
def test_verlinde_unit_commutative_associative(N, k):
    V = verlinde_algebra(N, k)
    n = len(V.basis)
    one, zero = V.values.F.one(), V.values.F.zero()
    for i in range(n):
        assert verlinde_product(V, 0, i) == [one if j == i else zero for j in range(n)]
        for j in range(n):
            assert V.product(i, j) == V.product(j, i)
    for a in range(n):
        for b in range(n):
            for c in range(n):
                left = [sum((V.product(a, b)[m] * V.product(m, c)[r] for m in range(n)), zero) for r in range(n)]
                right = [sum((V.product(b, c)[m] * V.product(a, m)[r] for m in range(n)), zero) for r in range(n)]
                assert left == right


@pytest.mark.parametrize("N", range(3, 10))
def test_verlinde_level_one_constants_are_nonnegative_integers(N):
    V = verlinde_algebra(N, 1)
    for row in V.constants.values():
        for c in row:
            x = _as_rational(c)
            assert x.denominator == 1 and x >= 0


def test_verlinde_n5_fusion_table():
    V = verlinde_algebra(5, 1)
    # P_1 P_1 = P_0 + P_2 and P_1 P_3 = P_2 on this grid
    assert [_as_rational(c) for c in V.product(1, 1)] == [1, 0, 1, 0]
    assert [_as_rational(c) for c in V.product(1, 3)] == [0, 0, 1, 0]
    data = json.loads(V.to_json())
    assert data["N"] == 5 and len(data["basis"]) == 4


# --- Gauss-Selberg sums and the discrete pairing ---------------------------------------


@pytest.mark.parametrize("N,k", ADMISSIBLE)
def test_gauss_selberg_exact(N, k):
    r = gauss_selberg(N, k)
    assert r.equal
    assert r.residual(30) < 1e-25


def test_gauss_selberg_n8_k2_cross_check():
    r = gauss_selberg(8, 2)
    with mpmath.workdps(35):
        q = mpmath.expjpi(mpmath.mpf(2) / 8)
        expected = classical_gauss_sum(8, digits=35) / ((1 - q) * (1 - q ** 2))
        assert abs(r.lhs.to_complex(35) - expected) < mpmath.mpf(10) ** -25


def test_gauss_selberg_top_k_is_the_gauss_sum():
    for N in range(2, 12):
        r = gauss_selberg(N, N // 2)
        den = gauss_sum(N).field.one()
        for j in range(1, N // 2 + 1):
            den = den * (1 - r.lhs.field.zeta_power(4 * j))
        assert r.lhs * den == gauss_sum(N)


def test_gauss_selberg_csv_is_stable():
    text = gauss_selberg_csv([(5, 1), (8, 2)])
    assert text.splitlines()[0] == "N,k,exact_equal,numeric_residual"
    assert text == gauss_selberg_csv([(5, 1), (8, 2)])
    assert "true" in text.splitlines()[1]


def test_pairing_of_one():
    for N in (3, 5, 8):
        one = LaurentPolynomial({(0,): gauss_sum(N).field.one()}, rank=1)
        assert discrete_pairing_N(one, N) == gauss_sum(N).field.rational(2 * N)


@pytest.mark.parametrize("N,k", [(5, 1), (7, 2), (8, 2), (9, 1)])
def test_discrete_master_at_zero_is_gauss_selberg(N, k):
    lhs, rhs = discrete_master(0, 0, N, k)
    gs = gauss_selberg(N, k)
    scale = gauss_selberg_scale(N, k)
    assert lhs == rhs
    assert lhs == scale * gs.lhs


@pytest.mark.parametrize("N,k,b,c", [(7, 1, 1, 0), (7, 1, -1, 1), (9, 2, 1, -1), (8, 1, 2, 1)])
def test_discrete_master_general(N, k, b, c):
    lhs, rhs = discrete_master(b, c, N, k)
    assert lhs == rhs


@pytest.mark.parametrize("N,k", [(5, 1), (6, 2), (7, 2)])
def test_radical_rank(N, k):
    rank, nonzero = pairing_radical_rank(N, k)
    assert rank == nonzero

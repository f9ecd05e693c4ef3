import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdaha.cyclotomic import cyclotomic_field
from qdaha.errors import DivisionError

ORDERS = [4, 12, 20, 28, 36]


def elements(F):
    coeffs = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4),
                      min_size=F.degree, max_size=F.degree)
    return coeffs.map(F.element)


def embed(x, dps=30):
    return complex(x.to_complex(dps))


@pytest.mark.parametrize("M", ORDERS)
def test_zeta_has_exact_order(M):
    F = cyclotomic_field(M)
    z = F.zeta_power(1)
    acc = F.one()
    for j in range(1, M + 1):
        acc = acc * z
        assert (acc == F.one()) == (j == M)
    assert F.zeta_power(-1) * z == F.one()


@pytest.mark.parametrize("M", [12, 20])
def test_field_axioms(M):
    F = cyclotomic_field(M)

    @settings(max_examples=25, deadline=None)
    @given(a=elements(F), b=elements(F), c=elements(F))
    def check(a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        if not a.is_zero():
            assert a * a.inverse() == F.one()
        assert abs(embed(a * b) - embed(a) * embed(b)) < 1e-12 * (1 + abs(embed(a)) * abs(embed(b)))
        assert abs(embed(a.conjugate()) - embed(a).conjugate()) < 1e-12 * (1 + abs(embed(a)))

    check()


def test_embedding_at_high_precision():
    F = cyclotomic_field(20)
    with mpmath.workdps(60):
        z = F.zeta_power(3).to_complex(50)
        assert abs(z - mpmath.expjpi(mpmath.mpf(6) / 20)) < mpmath.mpf(10) ** -45


def test_zero_has_no_inverse():
    with pytest.raises(DivisionError):
        cyclotomic_field(12).zero().inverse()

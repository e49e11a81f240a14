from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from qhankel.exact.bigfloat import BigFloat, evaluate_poly
from qhankel.exact.poly import MultiPoly

from conftest import small_fraction

exps = st.tuples(*(st.integers(0, 4) for _ in range(4)))
polys = st.dictionaries(exps, small_fraction, max_size=6).map(MultiPoly.from_terms)


@given(small_fraction, small_fraction, st.integers(8, 80))
def test_arithmetic_encloses_exact(a, b, prec):
    x, y = BigFloat.from_fraction(a, prec), BigFloat.from_fraction(b, prec)
    assert x.contains(a) and y.contains(b)
    assert (x + y).contains(a + b)
    assert (x - y).contains(a - b)
    assert (x * y).contains(a * b)
    if y.certified_nonzero():
        assert (x / y).contains(a / b)
    assert (x ** 3).contains(a ** 3)


@given(polys, small_fraction, small_fraction, small_fraction, small_fraction, st.integers(16, 64))
def test_evaluate_poly_encloses_exact(p, q, a, l, m, prec):
    point = {"q": q, "alpha": a, "lambda": l, "mu": m}
    approx = evaluate_poly(p, {k: BigFloat.from_fraction(v, prec) for k, v in point.items()}, prec)
    assert approx.contains(p.evaluate(point))


def _frac(x):
    man, exp = x.man_exp
    return Fraction(int(man)) * Fraction(2) ** int(exp)


@pytest.mark.parametrize("prec", [32, 100, 300])
def test_constants_enclose_mpmath(prec):
    with mpmath.workprec(prec + 60):
        pi = _frac(+mpmath.pi)
        r3 = _frac(mpmath.sqrt(3))
    assert abs(BigFloat.pi(prec).midpoint() - pi) <= BigFloat.pi(prec).err + Fraction(1, 1 << (prec + 50))
    assert abs(BigFloat.sqrt_int(3, prec).midpoint() - r3) <= BigFloat.sqrt_int(3, prec).err + Fraction(1, 1 << (prec + 50))


def test_division_needs_certified_nonzero():
    tiny = BigFloat(0, 0, Fraction(1, 10))
    with pytest.raises(ZeroDivisionError):
        BigFloat.exact(1) / tiny


def test_sign_certificates():
    x = BigFloat.from_fraction(Fraction(-1, 3), 64)
    assert x.certified_negative() and x.certified_nonzero() and not x.certified_positive()
    assert not BigFloat(1, 0, Fraction(2)).certified_nonzero()


def test_log2_abs_bound():
    x = BigFloat.from_fraction(Fraction(3, 1 << 200), 64)
    value, err = x.log2_abs()
    assert abs(value - (mpmath.log(3, 2) - 200)) <= err

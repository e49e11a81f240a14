from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qhankel.exact.poly import ALPHA, LAMBDA, MU, ONE, Q, ZERO, MultiPoly, NotDivisible

from conftest import small_fraction

exps = st.tuples(*(st.integers(0, 3) for _ in range(4)))
polys = st.dictionaries(exps, small_fraction, max_size=5).map(MultiPoly.from_terms)


@given(polys, polys, polys)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == ZERO
    assert a * ONE == a


@given(polys)
def test_record_round_trip(p):
    assert MultiPoly.from_record(p.to_record()) == p
    assert MultiPoly.from_json(p.to_json()) == p


@given(polys, polys)
def test_exact_division_recovers_factor(a, b):
    if b.is_zero():
        return
    assert (a * b).exact_div(b) == a


def test_inexact_division_raises():
    with pytest.raises(NotDivisible):
        (Q + 1).exact_div(Q - 1)


@given(polys, small_fraction, small_fraction, small_fraction, small_fraction)
def test_evaluate_is_a_ring_map(p, q, a, l, m):
    point = {"q": q, "alpha": a, "lambda": l, "mu": m}
    r = p * p + p
    assert r.evaluate(point) == p.evaluate(point) ** 2 + p.evaluate(point)


def test_q_queries():
    p = Q ** 3 * ALPHA - 2 * Q ** 5 * MU + Q ** 3 * LAMBDA
    assert p.q_order() == 3
    assert p.q_degree() == 5
    assert p.q_coeff(3) == ALPHA + LAMBDA
    assert p.shift_q(-3).q_order() == 0
    assert p.degree("mu") == 1
    assert p.subs({"alpha": Fraction(1, 2)}).q_coeff(3) == LAMBDA + Fraction(1, 2)


def test_zero_has_no_q_order():
    with pytest.raises(ValueError):
        ZERO.q_order()

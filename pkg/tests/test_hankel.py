import random
from fractions import Fraction

import pytest

from qhankel.errors import VerificationFailure
from qhankel.exact.cyclotomic import cyclotomic, divide_exact_q, multiplicity
from qhankel.exact.poly import ALPHA, LAMBDA, MU, ONE, Q, MultiPoly
from qhankel.hankel.det import (bareiss_det, bareiss_leading_minors, cofactor_det, hankel_det,
                                hankel_dets, hankel_matrix)
from qhankel.hankel.exponents import (check_degree_bounds, degree_bounds, e0_formula, e1_floor,
                                      e2_floor, e_l_compact, e_l_formula, e_l_sum)
from qhankel.hankel.factor import (K_det, K_rec, conjecture_lambda1, expected_delta_degree_lambda1,
                                   factorize, generic_point, point_context, to_q_power_basis,
                                   verify_leading)
from qhankel.qseq import SeqContext


def test_bareiss_matches_cofactor_on_symbolic_hankel():
    ctx = SeqContext()
    for n in range(1, 5):
        M = hankel_matrix([ctx.v(k) for k in range(2 * n - 1)], n)
        assert bareiss_det(M) == cofactor_det(M)


def test_bareiss_pivots_past_zero():
    M = [[Fraction(0), Fraction(1)], [Fraction(1), Fraction(0)]]
    assert bareiss_det(M) == -1
    # the zero leading minor is reported, then elimination stops
    assert bareiss_leading_minors(M) == [0]


def test_leading_minors_match_individual_dets():
    rng = random.Random(3)
    vals = [Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(11)]
    minors = bareiss_leading_minors(hankel_matrix(vals, 6))
    assert len(minors) == 6
    for n, m in enumerate(minors, start=1):
        assert m == bareiss_det(hankel_matrix(vals, n))
        if n <= 4:
            assert m == cofactor_det(hankel_matrix(vals, n))


def test_small_determinants():
    ctx = SeqContext()
    assert hankel_det(ctx, 0) == ONE
    assert hankel_det(ctx, 1) == MU - 1
    V2 = hankel_det(SeqContext(lam=0), 2)
    assert V2.q_coeff(0) == -ALPHA ** 2 * MU
    assert hankel_dets(ctx, 3)[3] == hankel_det(ctx, 3)


def test_exponent_examples():
    assert e0_formula(4, False) == 4
    assert e0_formula(4, True) == 6 and e0_formula(5, True) == 15
    assert e_l_formula(1, 4) == 3 and e_l_sum(1, 4) == 3
    assert e_l_formula(2, 6) == 2
    assert degree_bounds(2).q == 3 and degree_bounds(3).q == 13


def test_e_l_grid_and_floors():
    for l in range(1, 21):
        for n in range(201):
            assert e_l_sum(l, n) == e_l_compact(l, n)
    for n in range(1, 201):
        assert e_l_compact(1, n) == e1_floor(n)
        assert e_l_compact(2, n) == e2_floor(n) or n < 2


def test_degree_bounds_symbolic_v3():
    V3 = hankel_det(SeqContext(), 3)
    checks = check_degree_bounds(V3, 3)
    assert all(ok for _, _, ok in checks.values())
    assert V3.degree("mu") <= 3


def test_q_order_spec_example():
    assert hankel_det(SeqContext(), 3).q_order() == 1


@pytest.mark.parametrize("n", range(1, 6))
def test_leading_coefficient_symbolic(n):
    for ctx in (SeqContext(), SeqContext(lam=0)):
        rep = verify_leading(ctx, n)
        assert rep.coefficient_ok and rep.q_order >= rep.e0


def test_leading_examples():
    V2 = hankel_det(SeqContext(), 2)
    assert V2.q_coeff(0) == ALPHA * (LAMBDA - (LAMBDA + ALPHA) * MU)
    V3 = hankel_det(SeqContext(lam=0), 3)
    assert e0_formula(3, True) == 2 and V3.q_order() == 2
    assert V3.q_coeff(2) == ALPHA ** 4 * ((MU - 1) ** 2 + ALPHA * MU)


def test_divisibility_example():
    ctx = SeqContext(alpha=Fraction(1, 3), lam=2, x=Fraction(5, 7))
    V4 = hankel_det(ctx, 4)
    assert divide_exact_q(V4, cyclotomic(1) ** 3) is not None
    assert divide_exact_q(Q ** 2 + 1, cyclotomic(1)) is None


def test_factorize_reassembles():
    ctx = SeqContext(alpha=Fraction(1, 3), lam=2, x=Fraction(5, 7))
    for n in (4, 6):
        fd = factorize(ctx, n)
        assert fd.reassemble() == hankel_det(ctx, n)
    fd6 = factorize(ctx, 6)
    assert fd6.cyclo_exponents[2] >= 2
    assert factorize(ctx, 4).cyclo_exponents[1] >= 3


def test_factorize_zero_rejected():
    with pytest.raises(ValueError):
        factorize(SeqContext(alpha=1, lam=0, x=1), 1)


def test_generic_point_is_seeded():
    a = generic_point(random.Random(5), 5)
    b = generic_point(random.Random(5), 5)
    assert a == b and a["lambda"] != 1
    assert verify_leading(point_context(a), 3).coefficient_ok


def test_K_examples_and_recurrence():
    assert K_det(0) == MU - 1 and K_rec(0) == MU - 1
    assert K_rec(1) == (MU - 1) ** 2 + ALPHA * MU
    for n in range(8):
        assert K_det(n) == K_rec(n)


def test_q_power_basis():
    # (q^2 - 1)^2 = Phi_1^2 Phi_2^2
    assert to_q_power_basis({1: 2, 2: 2}) == {1: 0, 2: 2}
    assert expected_delta_degree_lambda1(5) == 20


@pytest.mark.parametrize("n", [2, 4, 5])
def test_conjecture_examples(n):
    rep = conjecture_lambda1(n)
    assert rep.agreed
    expected = {l: 2 * max(0, n - 2 * l) for l in rep.expected_exponents}
    assert rep.expected_exponents == expected


def test_verification_failure_record():
    exc = VerificationFailure("a = b", "1", "2", {"n": 3})
    rec = exc.to_record()
    assert rec["identity"] == "a = b" and rec["lhs"] == "1" and rec["context"] == {"n": 3}


def test_multipoly_determinant_is_polynomial_in_q_only_for_numeric_point():
    ctx = SeqContext(alpha=2, lam=3, x=5)
    assert isinstance(hankel_det(ctx, 3), MultiPoly)
    assert hankel_det(ctx, 3).variables == ("q",)
    assert multiplicity(hankel_det(ctx, 3), cyclotomic(1))[0] >= e_l_formula(1, 3)

import cmath
from fractions import Fraction

import pytest

from qhankel.exact.bigfloat import BigFloat, evaluate_poly
from qhankel.exact.cyclotomic import cyclotomic, multiplicity
from qhankel.exact.poly import ALPHA, LAMBDA, MU, ONE, Q, ZERO
from qhankel.qseq import (B_closed, NumericSeq, SeqContext, apply_D, apply_Dtilde, apply_FG,
                          F_eval, gauss_binomial, difference_expansion, mu_numeric, v_closed_form,
                          v_symbolic, v_tail_numeric)


def pascal(m, k):
    """q-Pascal oracle: [m k] = [m-1 k-1] + q^k [m-1 k]."""
    if k < 0 or k > m:
        return ZERO
    if k == 0 or k == m:
        return ONE
    return pascal(m - 1, k - 1) + Q ** k * pascal(m - 1, k)


def test_gauss_binomial_examples():
    assert gauss_binomial(7, 0) == ONE
    assert gauss_binomial(3, -1) == ZERO
    assert gauss_binomial(4, 2) == 1 + Q + 2 * Q ** 2 + Q ** 3 + Q ** 4


@pytest.mark.parametrize("m", range(9))
def test_gauss_binomial_matches_pascal(m):
    for k in range(-1, m + 2):
        assert gauss_binomial(m, k) == pascal(m, k)


def test_gauss_binomial_negative_top_rejected():
    with pytest.raises(ValueError):
        gauss_binomial(-2, 1)


def test_first_terms():
    ctx = SeqContext()
    assert v_symbolic(ctx, 0) == MU - 1
    assert v_symbolic(ctx, 1) == (Q - LAMBDA) * (MU - 1) - ALPHA
    b1, b2 = Q - LAMBDA, Q ** 2 - LAMBDA
    assert v_closed_form(ctx, 2) == MU * b1 * b2 - b1 * b2 - ALPHA * b2 - ALPHA ** 2


def test_closed_form_matches_recurrence():
    ctx = SeqContext()
    for n in range(13):
        assert v_closed_form(ctx, n) == v_symbolic(ctx, n)


def test_negative_indices_at_lambda_zero():
    ctx = SeqContext(alpha=1, lam=0)
    for n in range(1, 7):
        assert ctx.v(-n).q_order() == n - 1


def test_negative_indices_satisfy_the_recurrence():
    a = Fraction(3, 2)
    ctx = SeqContext(alpha=a, lam=0)
    for n in range(1, 4):
        assert ctx.v(n) == Q ** n * ctx.v(n - 1) - a ** n
    for k in range(6):
        assert ctx.v(-k - 1) == Q ** k * (ctx.v(-k) + a ** (-k))


def test_index_minus_one_for_nonzero_lambda():
    ctx = SeqContext()
    e = ctx.v_ext(-1)
    # v_0 = (1 - lambda) v_{-1} - 1
    assert (e * (1 - LAMBDA)).to_poly() - 1 == ctx.v(0)


def test_apply_D_trivial_and_expansion():
    ctx = SeqContext()
    assert apply_D(ctx, 0, 5).to_poly() == ctx.v(5)
    for l in range(5):
        for n in range(max(0, 2 * l - 1), 11):
            assert apply_D(ctx, l, n) == difference_expansion(ctx, l, n)


def test_expansion_negative_control():
    """Dropping one term of the right-hand side must break the identity."""
    ctx = SeqContext()
    l, n = 2, 5
    wrong = difference_expansion(ctx, l, n) - ctx.v_ext(n - l) * Q ** (l * (n - l))
    assert apply_D(ctx, l, n) != wrong


def test_apply_Dtilde_small():
    ctx = SeqContext()
    assert apply_Dtilde(ctx, 0, 4).to_poly() == ctx.v(4)
    e = apply_Dtilde(ctx, 1, 1)
    assert e.shift_q(1).to_poly() == Q * ctx.v(1) - ALPHA * ctx.v(0)


@pytest.mark.parametrize("l", range(1, 9))
@pytest.mark.parametrize("lam", [Fraction(3), Fraction(-2, 5), Fraction(1, 3)])
def test_B_closed_matches_root_product(l, lam):
    prod = 1
    for k in range(l):
        prod *= cmath.exp(2j * cmath.pi * k / l) - float(lam)
    assert abs(prod - float(B_closed(lam, l))) < 1e-9
    assert B_closed(Fraction(3), 1) == -2


def test_apply_FG_divisibility_examples():
    ctx = SeqContext(alpha=1, lam=Fraction(1, 2))
    for n in range(2, 6):
        r = apply_FG(ctx, 1, 1, n)
        assert multiplicity(r.w, cyclotomic(1), limit=1)[0] == 1
    ctx = SeqContext(alpha=2, lam=Fraction(1, 3))
    r = apply_FG(ctx, 2, 2, 10)
    assert multiplicity(r.w, cyclotomic(2), limit=2)[0] == 2


def test_apply_FG_rejects_short_range():
    ctx = SeqContext(alpha=1, lam=Fraction(1, 2))
    with pytest.raises(ValueError, match="not guaranteed"):
        apply_FG(ctx, 2, 2, 9)
    assert not apply_FG(ctx, 2, 2, 9, force=True).guaranteed


def test_numeric_tail_alpha_zero():
    ns = NumericSeq(2, 0, Fraction(1, 2), 64)
    assert all(v_tail_numeric(ns, n).midpoint() == 0 for n in range(5))


def test_mu_numeric_brackets_theta_series():
    ns = NumericSeq(2, 1, 0, 128)
    mu = mu_numeric(ns)
    partial = sum(Fraction(1, 2 ** (k * (k + 1) // 2)) for k in range(12))
    assert partial <= mu.upper()
    assert mu.lower() <= partial + Fraction(1, 2 ** 77)
    assert F_eval(2, 0, 1, 128).overlaps(mu)


def test_F_eval_functional_equation():
    q, lam, z = Fraction(2), Fraction(1), Fraction(1)
    lhs = F_eval(q, lam, q * z, 128) - (z + lam) * F_eval(q, lam, z, 128) - (1 - lam)
    assert lhs.contains(0)
    assert F_eval(3, Fraction(1, 2), 0).midpoint() == 1


def test_lambda_in_q_powers_rejected():
    with pytest.raises(ValueError):
        NumericSeq(2, 1, 4, 64)


@pytest.mark.parametrize("lam", [Fraction(1, 2), Fraction(0)])
def test_numeric_symbolic_coherence(lam):
    ns = NumericSeq(2, 1, lam, 256)
    ctx = SeqContext(alpha=1, lam=lam, q=2)
    mu = mu_numeric(ns)
    for n in range(11):
        poly = SeqContext(alpha=1, lam=lam).v(n)
        sym = evaluate_poly(poly, {"q": BigFloat.exact(2), "mu": mu}, 300)
        assert sym.overlaps(v_tail_numeric(ns, n))
        assert ctx.v(n).degree("mu") <= 1

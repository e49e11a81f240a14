from fractions import Fraction

import mpmath
import pytest

from qhankel.asym.constants import (B_via_degree_constant, clausen_constant, constants_ABC,
                                    constants_report, degree_constant_pair, inverse_square_sum,
                                    threshold, threshold_closed_form)
from qhankel.asym.experiments import (decay_experiment, floor_sum, sumel_partial,
                                      weighted_exponent_sum)
from qhankel.errors import PreconditionError
from qhankel.hankel.exponents import e_l_sum


def test_inverse_square_sum_against_mpmath():
    value, err = inverse_square_sum(Fraction(3), Fraction(2), 80)
    ref = mpmath.zeta(2, mpmath.mpf(2) / 3) / 9
    assert abs(float(value) - float(ref)) < 1e-15
    assert err <= Fraction(1, 1 << 80)


def test_clausen_value_and_nesting():
    cl = clausen_constant(64)
    assert cl.certified_positive()
    assert abs(float(cl) - 0.67662774) < 5e-9
    with mpmath.workprec(200):
        ref = mpmath.clsin(2, 2 * mpmath.pi / 3)
    assert abs(float(cl) - float(ref)) < 1e-15
    inner = clausen_constant(96)
    assert cl.lower() <= inner.lower() and inner.upper() <= cl.upper()


def test_degree_constant_identity():
    series, closed = degree_constant_pair(80)
    assert abs(series.midpoint() - closed.midpoint()) < Fraction(1, 10 ** 12)


def test_constants_ABC():
    A, B, C = constants_ABC(True, 64)
    assert A.midpoint() == Fraction(1, 2) and C.contains(Fraction(2, 3))
    _, B1, _ = constants_ABC(False, 64)
    assert B1.overlaps(B_via_degree_constant(False, 64))
    assert B.overlaps(B_via_degree_constant(True, 64))


@pytest.mark.parametrize("d,lz,value", [(2, True, 3.27694460), (2, False, 9.43194241),
                                        (1, True, 1.53237645), (1, False, 1.80828115)])
def test_thresholds(d, lz, value):
    a, c = threshold(d, lz, 64), threshold_closed_form(d, lz, 64)
    assert abs(float(a) - value) < 1e-8 and abs(float(c) - value) < 1e-8
    assert a.overlaps(c)


def test_degree_three_excluded():
    for lz in (True, False):
        with pytest.raises(ValueError, match="degree excluded"):
            threshold(3, lz)
    assert constants_report(64).agreement()


def test_floor_sum_brute_force():
    for n in range(0, 12):
        for m in range(1, 7):
            for a in range(0, 9):
                for b in range(0, 9):
                    assert floor_sum(n, m, a, b) == sum((a * i + b) // m for i in range(n))


def test_weighted_sum_small_and_chunking():
    assert weighted_exponent_sum(3).total == 1
    n = 400
    brute = sum(e_l_sum(l, n) * sum(1 for k in range(1, l + 1) if __import__("math").gcd(k, l) == 1)
                for l in range(1, n))
    assert weighted_exponent_sum(n).total == brute
    assert weighted_exponent_sum(n, chunk=7).total == brute


def test_sumel_small_cases():
    assert sumel_partial(3, 0, 3).total == 1
    a, c, n = Fraction(5, 2), Fraction(1, 3), 60
    import math
    phi = lambda l: sum(1 for k in range(1, l + 1) if math.gcd(k, l) == 1)
    brute = sum(phi(l) * sum(math.floor((i + c * l) / (a * l)) for i in range(n + 1)) for l in range(1, 200))
    assert sumel_partial(a, c, n).total == brute
    with pytest.raises(PreconditionError):
        sumel_partial(1, 2, 10)


def test_decay_small_run():
    rep = decay_experiment(2, 1, 0, 8)
    assert all(r.positive for r in rep.rows)
    assert rep.to_csv().splitlines()[0] == "n,log_ratio,err_bound"
    with pytest.raises(PreconditionError):
        decay_experiment(2, 1, 0, 25)
    with pytest.raises(PreconditionError):
        decay_experiment(Fraction(1, 2), 1, 0, 4)

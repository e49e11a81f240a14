from fractions import Fraction

import pytest

from qhankel.asym.experiments import decay_precision
from qhankel.errors import PreconditionError
from qhankel.exact.bigfloat import BigFloat
from qhankel.hankel.det import bareiss_det, hankel_matrix
from qhankel.hankel.numeric import (bezivin_sum, check_scan_preconditions, kronecker_scan,
                                    numeric_hankel_dets, numeric_leading_minors)
from qhankel.qseq import NumericSeq


def test_scan_preconditions():
    with pytest.raises(PreconditionError, match="lambda = q"):
        check_scan_preconditions(Fraction(2), Fraction(1), Fraction(8))
    with pytest.raises(PreconditionError, match="alpha = -lambda"):
        check_scan_preconditions(Fraction(2), Fraction(-6), Fraction(3))
    with pytest.raises(PreconditionError, match="alpha must be nonzero"):
        check_scan_preconditions(Fraction(2), Fraction(0), Fraction(0))
    with pytest.raises(PreconditionError, match="alpha = -lambda"):
        check_scan_preconditions(Fraction(-2), Fraction(-12), Fraction(3))
    check_scan_preconditions(Fraction(2), Fraction(1), Fraction(3))
    check_scan_preconditions(Fraction(2), Fraction(6), Fraction(3))
    check_scan_preconditions(Fraction(2), Fraction(1), Fraction(0))


def test_kronecker_examples():
    res = kronecker_scan(Fraction(1), 2, 1, 0, 3)
    assert 1 in res.zeros
    res = kronecker_scan(Fraction(3, 2), 2, 1, 0, 12)
    assert res.zeros == [] and res.nonzero == tuple(range(1, 13))


def test_numeric_dets_positive_at_lambda_zero():
    dets = numeric_hankel_dets(2, 1, 0, 12, decay_precision(12, 2))
    assert all(d.certified_positive() for d in dets)


def test_numeric_minors_enclose_exact_rational_dets():
    vals = [Fraction(1, k + 2) for k in range(9)]   # Hilbert-type, badly conditioned
    entries = [BigFloat.from_fraction(v, 120) for v in vals]
    approx = numeric_leading_minors(entries, 5, 130)
    for n in range(1, 6):
        assert approx[n - 1].contains(bareiss_det(hankel_matrix(vals, n)))


def test_bezivin_small_cases():
    one = bezivin_sum(2, 1, 1, 1)
    assert one.partial == Fraction(1, 2)
    mu = NumericSeq(2, 1, 0, 128).mu()
    assert one.partial <= (mu - 1).upper()
    big = bezivin_sum(2, 1, 1, 12)
    assert (mu - 1).lower() <= big.partial + big.tail_bound
    assert big.partial <= (mu - 1).upper()


def test_bezivin_bracket_n2():
    V2 = numeric_hankel_dets(2, 1, 0, 2, 256)[1]
    r = bezivin_sum(2, 1, 2, 4)
    assert r.partial <= V2.upper()
    assert V2.lower() <= r.partial + r.tail_bound


def test_bezivin_preconditions():
    with pytest.raises(PreconditionError):
        bezivin_sum(Fraction(1, 2), 1, 1, 3)

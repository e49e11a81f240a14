"""The Clausen constant Im Li_2(e^{2 pi i/3}), the constants A, B, C and the
gamma thresholds, all as BigFloats with rigorous error bounds."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from ..exact.bigfloat import BigFloat

C_CONST = Fraction(2, 3)


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """B_m with B_1 = -1/2, from sum_{k<=m} C(m+1, k) B_k = 0."""
    if m == 0:
        return Fraction(1)
    return -sum(comb(m + 1, k) * bernoulli(k) for k in range(m)) / (m + 1)


def inverse_square_sum(a: Fraction, b: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """sum_{k>=0} (a k + b)^{-2} for rational a, b > 0 as (value, error bound).

    The first K terms are added exactly; the rest comes from Euler-Maclaurin
    with p correction terms, whose remainder is at most
    4 (2p)! a^{2p-1} (aK+b)^{-2p-1} / 6^{2p}.
    """
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise ValueError("need a > 0 and b > 0")
    target = Fraction(1, 1 << bits)
    K = p = max(4, bits // 8)
    while True:
        x = a * K + b
        fact = Fraction(1)
        for i in range(1, 2 * p + 1):
            fact *= i
        remainder = 4 * fact * a ** (2 * p - 1) / (x ** (2 * p + 1) * 36 ** p)
        if remainder <= target:
            break
        K += max(4, K // 4)
        p += max(2, p // 4)
    head = sum(Fraction(1) / (a * k + b) ** 2 for k in range(K))
    tail = 1 / (a * x) + 1 / (2 * x * x)
    for j in range(1, p + 1):
        tail += bernoulli(2 * j) * a ** (2 * j - 1) / x ** (2 * j + 1)
    return head + tail, remainder


def _residue_sums(bits: int):
    """S1 = sum (3k+1)^{-2}, S2 = sum (3k+2)^{-2} with error bounds."""
    s1, e1 = inverse_square_sum(Fraction(3), Fraction(1), bits)
    s2, e2 = inverse_square_sum(Fraction(3), Fraction(2), bits)
    return s1, e1, s2, e2


def clausen_constant(precision: int = 128) -> BigFloat:
    """Im Li_2(e^{2 pi i/3}) = (sqrt 3 / 2) (S1 - S2), enclosed within 2^-precision.

    The enclosure radius is fixed at 2^-precision while the actual error is
    kept below a quarter of that, so raising the precision by one bit or more
    gives an interval inside the previous one.
    """
    if precision < 32:
        raise ValueError("precision must be at least 32 bits")
    work = precision + 40
    s1, e1, s2, e2 = _residue_sums(work)
    diff = BigFloat.from_fraction(s1 - s2, work, e1 + e2)
    value = diff * BigFloat.sqrt_int(3, work) / 2
    limit = Fraction(1, 1 << (precision + 2))
    if value.err > limit:
        raise ArithmeticError("internal precision too low for the requested enclosure")
    return BigFloat(value.man, value.exp, Fraction(1, 1 << precision), prec=work)


def _pi2_sqrt3(work: int) -> tuple[BigFloat, BigFloat]:
    pi = BigFloat.pi(work)
    return pi * pi, BigFloat.sqrt_int(3, work)


def degree_constant_pair(precision: int = 128) -> tuple[BigFloat, BigFloat]:
    """The cyclotomic-degree constant two ways: 1/54 + S2/pi^2 and 5/54 - Cl/(pi^2 sqrt 3)."""
    work = precision + 40
    _, _, s2, e2 = _residue_sums(work)
    pi2, r3 = _pi2_sqrt3(work)
    series = BigFloat.from_fraction(Fraction(1, 54), work) + BigFloat.from_fraction(s2, work, e2) / pi2
    cl = clausen_constant(work)
    closed = BigFloat.from_fraction(Fraction(5, 54), work) - cl / (pi2 * r3)
    return series, closed


def constants_ABC(lambda_is_zero: bool, precision: int = 128) -> tuple[BigFloat, BigFloat, BigFloat]:
    work = precision + 40
    cl = clausen_constant(work)
    pi2, r3 = _pi2_sqrt3(work)
    k = cl / (pi2 * r3)
    if lambda_is_zero:
        A, B0 = Fraction(1, 2), Fraction(65, 216)
    else:
        A, B0 = Fraction(1, 3), Fraction(7, 27)
    B = BigFloat.from_fraction(B0, work) - k
    return BigFloat.from_fraction(A, work), B, BigFloat.from_fraction(C_CONST, work)


def B_via_degree_constant(lambda_is_zero: bool, precision: int = 128) -> BigFloat:
    """B as 5/54 - Cl/(pi^2 sqrt 3) plus 5/24 (lambda = 0) or 1/6 (lambda != 0)."""
    work = precision + 40
    _, closed = degree_constant_pair(work)
    return closed + (Fraction(5, 24) if lambda_is_zero else Fraction(1, 6))


def threshold(d: int, lambda_is_zero: bool, precision: int = 128) -> BigFloat:
    """(A + C) / (A + C - d (C - B)); rejects d whose denominator is not positive."""
    A, B, C = constants_ABC(lambda_is_zero, precision)
    num = A + C
    den = num - d * (C - B)
    if not den.certified_positive():
        raise ValueError(f"degree excluded: A + C - d(C - B) is not positive for d={d}")
    return num / den


_CLOSED = {
    # (d, lambda_is_zero): (numerator factor of pi^2, pi^2 coefficient, sqrt3*Cl coefficient)
    (2, True): (126, 47, 72),
    (2, False): (27, 5, 18),
    (1, True): (252, 173, 72),
    (1, False): (27, 16, 9),
}


def threshold_closed_form(d: int, lambda_is_zero: bool, precision: int = 128) -> BigFloat:
    """N pi^2 / (P pi^2 - S sqrt(3) Cl) with fixed integer triples per (d, lambda case)."""
    key = (d, lambda_is_zero)
    if key not in _CLOSED:
        raise ValueError(f"no closed form for d={d}")
    N, P, S = _CLOSED[key]
    work = precision + 40
    cl = clausen_constant(work)
    pi2, r3 = _pi2_sqrt3(work)
    return (N * pi2) / (P * pi2 - S * r3 * cl)


@dataclass(frozen=True)
class ConstantsReport:
    precision: int
    imLi2: BigFloat
    A: dict
    B: dict
    C: BigFloat
    thresholds: dict          # (d, lambda_is_zero) -> (via A/B/C, closed form)
    degree_constant: tuple
    excluded: dict            # (d, lambda_is_zero) -> True when rejected

    def agreement(self) -> bool:
        ok = all(x.overlaps(y) for x, y in self.thresholds.values())
        s, c = self.degree_constant
        return ok and s.overlaps(c)

    def to_record(self, digits: int = 20) -> dict:
        case = lambda lz: "lambda=0" if lz else "lambda!=0"
        return {
            "precision": self.precision,
            "imLi2": self.imLi2.to_record(digits),
            "A": {case(k): v.to_record(digits) for k, v in sorted(self.A.items())},
            "B": {case(k): v.to_record(digits) for k, v in sorted(self.B.items())},
            "C": self.C.to_record(digits),
            "thresholds": [
                {"d": d, "case": case(lz), "via_ABC": a.to_record(digits),
                 "closed_form": c.to_record(digits)}
                for (d, lz), (a, c) in sorted(self.thresholds.items())
            ],
            "degree_constant": {"series": self.degree_constant[0].to_record(digits), "closed": self.degree_constant[1].to_record(digits)},
            "excluded_degrees": [{"d": d, "case": case(lz)} for (d, lz) in sorted(self.excluded)],
            "agreement": self.agreement(),
        }


def constants_report(precision: int = 128) -> ConstantsReport:
    cl = clausen_constant(precision)
    A, B, thresholds, excluded = {}, {}, {}, {}
    C = None
    for lz in (True, False):
        a, b, c = constants_ABC(lz, precision)
        A[lz], B[lz], C = a, b, c
        for d in (1, 2):
            thresholds[(d, lz)] = (threshold(d, lz, precision), threshold_closed_form(d, lz, precision))
        try:
            threshold(3, lz, precision)
        except ValueError:
            excluded[(3, lz)] = True
    return ConstantsReport(precision, cl, A, B, C, thresholds, degree_constant_pair(precision), excluded)

"""Numeric and exact-rational Hankel determinants with certified error bounds."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Optional, Sequence

import gmpy2

from ..errors import PreconditionError
from ..exact.bigfloat import BigFloat
from ..qseq import NumericSeq, SeqContext
from .det import bareiss_det, bareiss_leading_minors, hankel_matrix


# -- Kronecker scan ------------------------------------------------------------------


def check_scan_preconditions(q: Fraction, alpha: Fraction, lam: Fraction) -> None:
    """alpha != 0, lambda not in q^{Z>0}, alpha not in -lambda q^{Z>0}; exact."""
    if alpha == 0:
        raise PreconditionError("precondition failed: alpha must be nonzero")
    if abs(q) <= 1:
        raise PreconditionError("precondition failed: |q| > 1 required")
    if lam == 0:
        return
    for name, target in (("lambda", lam), ("alpha", alpha / -lam)):
        j, p = 1, q
        while abs(p) <= abs(target):
            if p == target:
                where = "lambda = q^%d" % j if name == "lambda" else "alpha = -lambda q^%d" % j
                raise PreconditionError(f"precondition failed: {where}")
            j, p = j + 1, p * q


def _div_fraction(a, b):
    return a / b


@dataclass(frozen=True)
class ScanResult:
    x: Fraction
    values: tuple      # V_1..V_nmax as Fractions
    nonzero: tuple     # indices n with V_n(x) != 0

    @property
    def zeros(self) -> list:
        return [n for n, v in enumerate(self.values, start=1) if v == 0]

    def to_record(self) -> dict:
        return {"x": f"{self.x.numerator}/{self.x.denominator}", "nonzero": list(self.nonzero),
                "zeros": self.zeros}


def rational_hankel_dets(values: Sequence[Fraction], n_max: int) -> list[Fraction]:
    """V_1..V_nmax over the rationals, pivoting only where a leading minor vanishes."""
    minors = bareiss_leading_minors(hankel_matrix(values, n_max), _div_fraction)
    out = list(minors)
    for n in range(len(out) + 1, n_max + 1):
        out.append(Fraction(bareiss_det(hankel_matrix(values, n), _div_fraction)))
    return [Fraction(v) for v in out]


def kronecker_scan(x, q, alpha, lam, n_max: int) -> ScanResult:
    """Exact V_n(x) for n = 1..n_max with the seed v_0 = x - 1."""
    q, alpha, lam, x = Fraction(q), Fraction(alpha), Fraction(lam), Fraction(x)
    check_scan_preconditions(q, alpha, lam)
    ctx = SeqContext(alpha=alpha, lam=lam, x=x, q=q)
    values = [ctx.v(k).constant_value() for k in range(2 * n_max - 1)]
    dets = rational_hankel_dets(values, n_max)
    return ScanResult(x, tuple(dets), tuple(n for n, d in enumerate(dets, start=1) if d != 0))


# -- positivity sum for lambda = 0 --------------------------------------------------


@dataclass(frozen=True)
class BezivinResult:
    n: int
    J: int
    partial: Fraction
    tail_bound: Fraction

    def lower(self) -> BigFloat:
        return BigFloat.from_fraction(self.partial, 128)

    def to_record(self) -> dict:
        return {"n": self.n, "J": self.J, "partial": float(self.partial),
                "tail_bound": float(self.tail_bound)}


def _vandermonde_sq(points: Sequence[Fraction]) -> Fraction:
    p = Fraction(1)
    for a, b in combinations(points, 2):
        p *= (b - a) ** 2
    return p


def bezivin_sum(q, alpha, n: int, J: int) -> BezivinResult:
    """Partial sum over j_1 < ... < j_n <= J of the positive expansion of V_n at lambda = 0.

    Each index j carries weight q^{-j(j+1)/2} alpha^j and node q^{-j}; the
    summand is the product of weights times the squared Vandermonde of the
    nodes, and the sum is multiplied by alpha^{n^2-n}.
    """
    q, alpha = Fraction(q), Fraction(alpha)
    if not (q > 1 and alpha > 0):
        raise PreconditionError("precondition failed: need q > 1 and alpha > 0 (lambda = 0)")
    if n < 1 or J < n:
        raise PreconditionError("need n >= 1 and J >= n")
    weight = [Fraction(0)] + [alpha ** j / q ** (j * (j + 1) // 2) for j in range(1, J + 2)]
    node = [Fraction(0)] + [1 / q ** j for j in range(1, J + 1)]
    total = Fraction(0)
    for tup in combinations(range(1, J + 1), n):
        w = Fraction(1)
        for j in tup:
            w *= weight[j]
        total += w * _vandermonde_sq([node[j] for j in tup])
    scale = alpha ** (n * n - n)
    # tuples reaching past J: one index above J, the others anywhere; nodes lie in (0,1)
    ratio = alpha / q ** (J + 2)
    if ratio >= 1:
        raise PreconditionError("J too small for a geometric tail bound")
    beyond = weight[J + 1] / (1 - ratio)
    first_ratio = alpha / q ** 2
    all_weights = sum(weight[1:J + 1]) + beyond if first_ratio < 1 else None
    if all_weights is None:
        raise PreconditionError("J too small for a geometric tail bound")
    tail = scale * beyond * all_weights ** (n - 1)
    return BezivinResult(n, J, scale * total, tail)


# -- floating Hankel determinants -------------------------------------------------


def _upper_sqrt(x: Fraction) -> Fraction:
    """Rational upper bound of sqrt(x) for x >= 0."""
    n, d = x.numerator, x.denominator
    return Fraction(isqrt(n * d) + 1, d)


def numeric_leading_minors(entries: Sequence[BigFloat], n_max: int, frac_bits: int) -> list[BigFloat]:
    """Leading minors of the Hankel matrix on ``entries`` with rigorous error bounds.

    Entries are rounded to integers scaled by 2^frac_bits; the exact integer
    determinants are then perturbed by at most prod(R_i + r_i) - prod R_i
    (Hadamard), where R_i and r_i bound the Euclidean norms of the rounded rows
    and of their error rows.
    """
    F = frac_bits
    ints, errs = [], []
    for e in entries:
        scaled = e.midpoint() * (1 << F)
        k = round(scaled)
        ints.append(gmpy2.mpz(k))
        errs.append(abs(scaled - k) + e.err * (1 << F))
    M = hankel_matrix(ints, n_max)
    E = hankel_matrix(errs, n_max)
    minors = bareiss_leading_minors(M, lambda a, b: gmpy2.divexact(a, b))
    if len(minors) < n_max:
        for n in range(len(minors) + 1, n_max + 1):
            minors.append(bareiss_det(hankel_matrix(ints, n), lambda a, b: gmpy2.divexact(a, b)))
    out = []
    for n in range(1, n_max + 1):
        prod_r, prod_rr = Fraction(1), Fraction(1)
        for i in range(n):
            row_sq = sum(int(M[i][j]) ** 2 for j in range(n))
            R = Fraction(isqrt(row_sq) + 1)
            r = _upper_sqrt(sum(E[i][j] ** 2 for j in range(n)))
            prod_r *= R
            prod_rr *= R + r
        bound = (prod_rr - prod_r) / Fraction(1 << (F * n))
        out.append(BigFloat(int(minors[n - 1]), -F * n, bound, prec=max(64, abs(int(minors[n - 1])).bit_length())))
    return out


def numeric_hankel_dets(q, alpha, lam, n_max: int, precision: int,
                        ns: Optional[NumericSeq] = None) -> list[BigFloat]:
    """V_1..V_nmax at mu = F_q(alpha; lambda), from high-precision tails."""
    if ns is None:
        ns = NumericSeq(q, alpha, lam, precision)
    entries = [ns.v(k) for k in range(2 * n_max - 1)]
    return numeric_leading_minors(entries, n_max, precision + 16)

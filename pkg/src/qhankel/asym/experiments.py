"""Asymptotic experiments: weighted cyclotomic exponent sums, totient-weighted
floor sums, and the decay of |V_n| at numeric parameters."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import PreconditionError
from ..exact.bigfloat import BigFloat
from ..exact.cyclotomic import totients_upto
from ..hankel.exponents import e_l_compact
from ..hankel.numeric import numeric_hankel_dets
from ..qseq import NumericSeq
from .constants import constants_ABC, inverse_square_sum

REFERENCE_DEGREE_CONSTANT = Fraction(5301135, 10 ** 8)


# -- weighted exponent sums ------------------------------------------------------


@dataclass(frozen=True)
class WeightedSum:
    n: int
    total: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.total, self.n ** 3)

    def to_record(self) -> dict:
        return {"n": self.n, "sum": self.total, "ratio": f"{float(self.ratio):.12f}",
                "reference": "0.05301135"}


def weighted_exponent_sum(n: int, chunk: int = 4096) -> WeightedSum:
    """sum_l e_l(n) phi(l); e_l(n) vanishes once 2l > n - 1.

    ``chunk`` only changes how partial sums are grouped; the integer is the same.
    """
    if n < 3:
        raise ValueError("weighted_exponent_sum needs n >= 3")
    top = (n - 1) // 2
    phi = totients_upto(max(top, 1))
    partials = []
    for start in range(1, top + 1, chunk):
        partials.append(sum(e_l_compact(l, n) * phi[l] for l in range(start, min(top, start + chunk - 1) + 1)))
    return WeightedSum(n, sum(partials))


def floor_sum(n: int, m: int, a: int, b: int) -> int:
    """sum_{i=0}^{n-1} floor((a i + b) / m) for n >= 0, m >= 1, a, b >= 0."""
    total = 0
    while True:
        if a >= m:
            total += (n - 1) * n // 2 * (a // m)
            a %= m
        if b >= m:
            total += n * (b // m)
            b %= m
        y_max = a * n + b
        if y_max < m:
            return total
        n, b, m, a = y_max // m, y_max % m, a, m


@dataclass(frozen=True)
class SumelResult:
    a: Fraction
    c: Fraction
    n: int
    total: int
    prediction: Fraction
    prediction_err: Fraction

    @property
    def ratio(self) -> float:
        return float(Fraction(self.total) / self.prediction)

    def to_record(self) -> dict:
        return {"a": str(self.a), "c": str(self.c), "n": self.n, "sum": self.total,
                "prediction": f"{float(self.prediction):.12e}", "ratio": f"{self.ratio:.12f}"}


def _pi_squared_bounds(bits: int = 96) -> tuple[Fraction, Fraction]:
    pi = BigFloat.pi(bits)
    return pi.lower() ** 2, pi.upper() ** 2


def sumel_partial(a, c, n: int) -> SumelResult:
    """sum_{l>=1} phi(l) sum_{i=0}^{n} floor((i + c l)/(a l)), exactly, with the
    leading-order prediction n^3/pi^2 sum_{m>=1} (a m - c)^{-2}."""
    a, c = Fraction(a), Fraction(c)
    if not (a > 0 and 0 <= c < a):
        raise PreconditionError("need 0 <= c < a")
    if n < 0:
        raise ValueError("n must be non-negative")
    D = a.denominator * c.denominator // math.gcd(a.denominator, c.denominator)
    A, C = int(a * D), int(c * D)
    # a term is nonzero only when i >= (a - c) l for some i <= n
    top = int(Fraction(n) / (a - c))
    phi = totients_upto(max(top, 1))
    total = 0
    for l in range(1, top + 1):
        total += phi[l] * floor_sum(n + 1, A * l, D, C * l)
    series, err = inverse_square_sum(a, a - c, 64)
    lo, hi = _pi_squared_bounds()
    prediction = Fraction(n ** 3) * series / ((lo + hi) / 2)
    pred_err = Fraction(n ** 3) * (err / lo + series * (hi - lo) / (lo * lo))
    return SumelResult(a, c, n, total, prediction, pred_err)


# -- decay of |V_n| ---------------------------------------------------------------


def decay_precision(n_max: int, q) -> int:
    """Working bits: ceil(0.6 n^3 log2|q|) + 256."""
    return math.ceil(0.6 * n_max ** 3 * math.log2(abs(Fraction(q)))) + 256


@dataclass(frozen=True)
class DecayRow:
    n: int
    value: BigFloat
    log_q: float        # log_{|q|} |V_n|
    log_err: float      # bound on |error| of log_q
    positive: bool

    @property
    def ratio(self) -> float:
        return -self.log_q / self.n ** 3


@dataclass(frozen=True)
class DecayReport:
    q: Fraction
    alpha: Fraction
    lam: Fraction
    precision: int
    rows: list = field(default_factory=list)
    reference: dict = field(default_factory=dict)

    def ratio(self, n: int) -> float:
        return next(r.ratio for r in self.rows if r.n == n)

    def to_record(self) -> dict:
        return {
            "q": str(self.q), "alpha": str(self.alpha), "lambda": str(self.lam),
            "precision": self.precision,
            "reference": self.reference,
            "rows": [{"n": r.n, "log_q_abs": f"{r.log_q:.10f}", "ratio": f"{r.ratio:.10f}",
                      "err_bound": f"{r.log_err:.3e}", "positive": r.positive} for r in self.rows],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "log_ratio", "err_bound"])
        for r in self.rows:
            w.writerow([r.n, f"{r.ratio:.10f}", f"{r.log_err / r.n ** 3:.3e}"])
        return buf.getvalue()


DECAY_CAP = 24


def decay_experiment(q, alpha, lam, n_max: int, n_min: int = 1,
                     precision: Optional[int] = None, cap: int = DECAY_CAP) -> DecayReport:
    """Certified |V_n| at mu = F_q(alpha; lambda) for n_min <= n <= n_max."""
    q, alpha, lam = Fraction(q), Fraction(alpha), Fraction(lam)
    if abs(q) <= 1:
        raise PreconditionError("need |q| > 1")
    if alpha == 0:
        raise PreconditionError("need alpha != 0")
    if n_max > cap:
        raise PreconditionError(f"n_max {n_max} exceeds the configured cap {cap}")
    if precision is None:
        precision = decay_precision(n_max, q)
    ns = NumericSeq(q, alpha, lam, precision)
    dets = numeric_hankel_dets(q, alpha, lam, n_max, precision, ns)
    log2q = math.log2(abs(q))
    rows = []
    for n in range(n_min, n_max + 1):
        V = dets[n - 1]
        if not V.certified_nonzero():
            raise ArithmeticError(f"sign of V_{n} not certified; raise the precision above {precision} bits")
        l2, e2 = V.log2_abs()
        log_q, log_err = l2 / log2q, e2 / log2q
        if log_err >= 0.5:
            raise ArithmeticError(f"log error {log_err} for V_{n} too large; raise the precision")
        rows.append(DecayRow(n, V, log_q, log_err, V.certified_positive()))
    if lam == 0 and q > 1 and alpha > 0:
        bad = [r.n for r in rows if not r.positive]
        if bad:
            raise ArithmeticError(f"expected V_n > 0 at lambda = 0, but sign is negative for n={bad}")
    A, B, _ = constants_ABC(lam == 0, 64)
    reference = {"A": A.to_decimal(12), "A_plus_B": (A + B).to_decimal(12)}
    return DecayReport(q, alpha, lam, precision, rows, reference)

"""The tail sequence v_n, q-binomials, difference operators, and numeric tails.

The sequence satisfies ``v_0 = mu - 1`` and ``v_n = (q^n - lambda) v_{n-1} - alpha^n``.
Any of q, alpha, lambda, mu may be kept symbolic or fixed to a rational.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Optional

from .exact.bigfloat import BigFloat
from .exact.poly import ALPHA, LAMBDA, MU, ONE, Q, ZERO, MultiPoly, NotDivisible

Param = Optional[Fraction]   # None means "keep symbolic"


def parse_param(value) -> Param:
    """Accept None / "sym" for a symbol, otherwise an exact rational."""
    if value is None or value == "sym":
        return None
    if isinstance(value, float):
        raise TypeError("floating-point parameters are not accepted; pass a Fraction or 'p/q' string")
    return Fraction(value)


# -- shifted-index values ---------------------------------------------------


class SeqExpr:
    """Exact value ``num * q**qpow / den`` with polynomial ``num`` and ``den``.

    Operator outputs are of this shape: negative q-powers come from the
    reversed operator, and a polynomial denominator ``1 - lambda`` appears
    once index -1 is reached with lambda symbolic or nonzero.
    """

    __slots__ = ("num", "den", "qpow")

    def __init__(self, num: MultiPoly, den: MultiPoly = ONE, qpow: int = 0):
        num = MultiPoly(num)
        den = MultiPoly(den)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes")
        if not num:
            den, qpow = ONE, 0
        elif den != ONE:
            try:
                num, den = num.exact_div(den), ONE
            except NotDivisible:
                pass
        self.num, self.den, self.qpow = num, den, qpow

    def _parts(self, other):
        if isinstance(other, SeqExpr):
            return other
        return SeqExpr(MultiPoly(other))

    def _aligned(self, other: "SeqExpr"):
        # bring both to a common q-power and denominator
        k = min(self.qpow, other.qpow)
        a = self.num.shift_q(self.qpow - k)
        b = other.num.shift_q(other.qpow - k)
        if self.den == other.den:
            return a, b, self.den, k
        return a * other.den, b * self.den, self.den * other.den, k

    def __add__(self, other):
        o = self._parts(other)
        a, b, den, k = self._aligned(o)
        return SeqExpr(a + b, den, k)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._parts(other)
        a, b, den, k = self._aligned(o)
        return SeqExpr(a - b, den, k)

    def __neg__(self):
        return SeqExpr(-self.num, self.den, self.qpow)

    def __mul__(self, other):
        if isinstance(other, SeqExpr):
            return SeqExpr(self.num * other.num, self.den * other.den, self.qpow + other.qpow)
        return SeqExpr(self.num * other, self.den, self.qpow)

    __rmul__ = __mul__

    def shift_q(self, k: int) -> "SeqExpr":
        return SeqExpr(self.num, self.den, self.qpow + k)

    def __eq__(self, other):
        if not isinstance(other, (SeqExpr, MultiPoly, int, Fraction)):
            return NotImplemented
        return (self - self._parts(other)).num.is_zero()

    __hash__ = None

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den == ONE and (self.qpow >= 0 or self.num.is_zero()
                                    or self.num.q_order() + self.qpow >= 0)

    def to_poly(self) -> MultiPoly:
        if self.den != ONE:
            raise NotDivisible("value has a nontrivial denominator")
        return self.num.shift_q(self.qpow)

    def q_order(self) -> int:
        if self.num.is_zero():
            raise ValueError("order of zero polynomial undefined")
        return self.num.q_order() + self.qpow - self.den.q_order()

    def subs(self, values) -> "SeqExpr":
        return SeqExpr(self.num.subs(values), self.den.subs(values), self.qpow)

    def to_record(self) -> dict:
        return {"numerator": self.num.to_record(), "denominator": self.den.to_record(),
                "q_power": self.qpow}

    def __repr__(self):
        return f"SeqExpr(({self.num}) * q^{self.qpow} / ({self.den}))"


# -- symbolic sequence --------------------------------------------------------


class SeqContext:
    """Parameters of the sequence plus a memo table of v_n.

    ``x`` replaces the symbolic mu by a rational seed value, giving v_n(x).
    """

    def __init__(self, alpha=None, lam=None, x=None, q=None):
        self.alpha = parse_param(alpha)
        self.lam = parse_param(lam)
        self.x = parse_param(x)
        self.q = parse_param(q)
        self._memo: dict[int, MultiPoly] = {}
        self._lock = threading.Lock()

    def __repr__(self):
        show = lambda v: "sym" if v is None else str(v)
        return (f"SeqContext(q={show(self.q)}, alpha={show(self.alpha)}, "
                f"lambda={show(self.lam)}, x={show(self.x)})")

    # symbols or fixed values
    @property
    def Q(self) -> MultiPoly:
        return Q if self.q is None else MultiPoly(self.q)

    @property
    def A(self) -> MultiPoly:
        return ALPHA if self.alpha is None else MultiPoly(self.alpha)

    @property
    def L(self) -> MultiPoly:
        return LAMBDA if self.lam is None else MultiPoly(self.lam)

    @property
    def M(self) -> MultiPoly:
        return MU if self.x is None else MultiPoly(self.x)

    def describe(self) -> dict:
        show = lambda v: "sym" if v is None else f"{v.numerator}/{v.denominator}"
        return {"q": show(self.q), "alpha": show(self.alpha), "lambda": show(self.lam),
                "mu": show(self.x)}

    def lambda_is_zero(self) -> bool:
        return self.lam is not None and self.lam == 0

    def b(self, j: int) -> MultiPoly:
        return self.Q ** j - self.L

    def check_denominators(self) -> None:
        """Reject lambda = q^j (j >= 1) when both are rational."""
        if self.q is None or self.lam is None or self.lam == 0:
            return
        if abs(self.q) <= 1:
            return
        j, p = 1, self.q
        while abs(p) <= abs(self.lam):
            if p == self.lam:
                raise ValueError(f"denominator vanishes: lambda = q^{j}")
            j, p = j + 1, p * self.q

    def _compute(self, n: int) -> MultiPoly:
        if n == 0:
            return self.M - 1
        if n > 0:
            return self.b(n) * self.v(n - 1) - self.A ** n
        # lambda = 0: v_{-k-1} = q^k (v_{-k} + alpha^{-k})
        k = -n - 1
        return (self.v(n + 1) + self.alpha ** (-k)) * self.Q ** k

    def v(self, n: int) -> MultiPoly:
        """The sequence term as an exact polynomial (Laurent in alpha for n < 0)."""
        if n < 0:
            if not self.lambda_is_zero():
                raise ValueError("negative indices undefined for lambda != 0")
            if self.alpha is None or self.alpha == 0:
                raise ValueError("negative indices require a rational nonzero alpha")
        cached = self._memo.get(n)
        if cached is not None:
            return cached
        # fill from the nearest known index so recursion depth stays small
        step = 1 if n >= 0 else -1
        start = 0
        while start != n and (start + step) in self._memo:
            start += step
        for k in range(start, n + step, step):
            if k not in self._memo:
                value = self._compute(k)
                with self._lock:
                    self._memo.setdefault(k, value)
        return self._memo[n]

    def v_ext(self, n: int) -> SeqExpr:
        """v_n for any index the sequence reaches: n >= 0, n = -1 via (v_0 + 1)/(1 - lambda),
        and all negative n when lambda = 0 with rational alpha."""
        if n >= 0 or self.lambda_is_zero():
            return SeqExpr(self.v(n))
        if n == -1:
            den = 1 - self.L
            if den.is_zero():
                raise ZeroDivisionError("denominator vanishes: index -1 needs lambda != 1")
            return SeqExpr(self.v(0) + 1, den)
        raise ValueError("negative indices below -1 undefined for lambda != 0")


def v_symbolic(ctx: SeqContext, n: int) -> MultiPoly:
    return ctx.v(n)


def v_closed_form(ctx: SeqContext, n: int) -> MultiPoly:
    """mu * prod b_j - sum_k alpha^k prod_{j>k} b_j, built without the memo table."""
    if n < 0:
        raise ValueError("closed form needs n >= 0")
    b = [None] + [ctx.b(j) for j in range(1, n + 1)]
    suffix = [ONE] * (n + 2)
    for j in range(n, 0, -1):
        suffix[j] = suffix[j + 1] * b[j]
    total = ctx.M * suffix[1]
    for k in range(n + 1):
        total = total - ctx.A ** k * suffix[k + 1]
    return total


# -- q-binomials and operators -------------------------------------------------


def _q_factorial_ratio(m: int, k: int) -> MultiPoly:
    num = ONE
    for i in range(k):
        num = num * (1 - Q ** (m - i))
    den = ONE
    for i in range(1, k + 1):
        den = den * (1 - Q ** i)
    try:
        return num.exact_div(den)
    except NotDivisible:
        raise AssertionError(f"q-binomial [{m} {k}] did not divide exactly") from None


_gauss_cache: dict[tuple[int, int], MultiPoly] = {}


def gauss_binomial(m: int, k: int) -> MultiPoly:
    """Gaussian binomial [m choose k]_q; zero for k < 0 or k > m."""
    if k < 0:
        return ZERO
    if m < 0:
        raise ValueError("q-binomial with negative top index is not a polynomial")
    if k > m:
        return ZERO
    key = (m, k)
    if key not in _gauss_cache:
        _gauss_cache[key] = _q_factorial_ratio(m, k)
    return _gauss_cache[key]


Operator = dict   # shift s -> MultiPoly coefficient of N^s


def _op_mul(a: Operator, b: Operator) -> Operator:
    out: dict[int, MultiPoly] = {}
    for s, c in a.items():
        for t, d in b.items():
            out[s + t] = out.get(s + t, ZERO) + c * d
    return {s: c for s, c in out.items() if c}


def operator_D(ctx: SeqContext, l: int) -> Operator:
    """Expansion of prod_{k<l} (I + (lambda-alpha) q^k N - lambda alpha q^{2k} N^2)."""
    if l < 0:
        raise ValueError("operator order must be non-negative")
    op: Operator = {0: ONE}
    lam, a, q = ctx.L, ctx.A, ctx.Q
    for k in range(l):
        factor = {0: ONE, 1: (lam - a) * q ** k, 2: -lam * a * q ** (2 * k)}
        op = _op_mul(op, {s: c for s, c in factor.items() if c})
    return op


def operator_Dtilde(ctx: SeqContext, l: int) -> tuple[Operator, int]:
    """prod_{k=1}^l (I - alpha q^{-k} N) as (numerator operator, q-power).

    The numerator is prod (q^k - alpha N); the whole operator is that times q^{-C(l+1,2)}.
    """
    if l < 0:
        raise ValueError("operator order must be non-negative")
    op: Operator = {0: ONE}
    for k in range(1, l + 1):
        op = _op_mul(op, {s: c for s, c in {0: ctx.Q ** k, 1: -ctx.A}.items() if c})
    return op, -comb(l + 1, 2)


def apply_operator(ctx: SeqContext, op: Operator, n: int) -> SeqExpr:
    total = SeqExpr(ZERO)
    for s in sorted(op):
        total = total + ctx.v_ext(n - s) * op[s]
    return total


def apply_D(ctx: SeqContext, l: int, n: int) -> SeqExpr:
    return apply_operator(ctx, operator_D(ctx, l), n)


def apply_Dtilde(ctx: SeqContext, l: int, n: int) -> SeqExpr:
    op, qpow = operator_Dtilde(ctx, l)
    return scale_q(ctx, apply_operator(ctx, op, n), qpow)


def difference_expansion(ctx: SeqContext, l: int, n: int) -> SeqExpr:
    """q^{l(n-l)} sum_s [l s]_q q^{C(l-s+1,2)} (-alpha)^s v_{n-l-s}."""
    total = SeqExpr(ZERO)
    for s in range(l + 1):
        coeff = gauss_binomial(l, s) * ctx.Q ** comb(l - s + 1, 2) * (-ctx.A) ** s
        total = total + ctx.v_ext(n - l - s) * coeff
    return scale_q(ctx, total, l * (n - l))


def scale_q(ctx: SeqContext, e: SeqExpr, k: int) -> SeqExpr:
    """Multiply by q^k, as a symbol or as the fixed rational."""
    if ctx.q is not None:
        return e * MultiPoly(ctx.q ** k)
    return e.shift_q(k)


def B_closed(lam: Fraction, l: int) -> Fraction:
    """prod_{k<l} (zeta^k - lambda) over the l-th roots of unity, in closed form."""
    return (-1) ** l * (Fraction(lam) ** l - 1)


@dataclass(frozen=True)
class FGResult:
    w: MultiPoly
    guaranteed: bool
    l: int
    m: int
    n: int


def apply_FG(ctx: SeqContext, l: int, m: int, n: int, force: bool = False) -> FGResult:
    """w_{m,n} = (I - B N^l)^{2m-1} (I - alpha^l N^l)^m v_n for rational alpha, lambda."""
    if ctx.alpha is None or ctx.lam is None:
        raise ValueError("apply_FG needs rational alpha and lambda")
    if l < 1 or m < 1:
        raise ValueError("apply_FG needs l >= 1 and m >= 1")
    threshold = (3 * m - 1) * l
    guaranteed = n >= threshold
    if not guaranteed and not force:
        raise ValueError(f"divisibility not guaranteed below (3m-1)l = {threshold}")
    B = B_closed(ctx.lam, l)
    op: Operator = {0: ONE}
    op = _op_mul(op, _binomial_power({0: ONE, l: MultiPoly(-B)}, 2 * m - 1))
    op = _op_mul(op, _binomial_power({0: ONE, l: MultiPoly(-(ctx.alpha ** l))}, m))
    w = apply_operator(ctx, op, n).to_poly()
    return FGResult(w, guaranteed, l, m, n)


def _binomial_power(op: Operator, k: int) -> Operator:
    out: Operator = {0: ONE}
    for _ in range(k):
        out = _op_mul(out, {s: c for s, c in op.items() if c})
    return out


# -- numerics -------------------------------------------------------------------


class NumericSeq:
    """Tail values v_n = sum_{k>n} alpha^k / prod_{j=n+1}^k (q^j - lambda) as BigFloats."""

    def __init__(self, q, alpha, lam, precision: int = 128):
        self.q = Fraction(q)
        self.alpha = Fraction(alpha)
        self.lam = Fraction(lam)
        self.precision = int(precision)
        if abs(self.q) <= 1:
            raise ValueError("numeric tails need |q| > 1")
        SeqContext(self.alpha, self.lam, q=self.q).check_denominators()
        # j0: from here on |q^j - lambda| >= |q|^j / 2
        j0, p = 1, abs(self.q)
        while p < 2 * abs(self.lam):
            j0, p = j0 + 1, p * abs(self.q)
        self.j0 = j0
        self._memo: dict[int, BigFloat] = {}

    def tail_exact(self, n: int) -> tuple[Fraction, Fraction]:
        """Exact partial sum and a rigorous bound on the omitted remainder."""
        if n < 0:
            raise ValueError("tails are defined for n >= 0")
        target = Fraction(1, 1 << (self.precision + 2))
        total = Fraction(0)
        if self.alpha == 0:
            return total, Fraction(0)
        term = Fraction(1)
        qk = self.q ** n
        k = n
        while True:
            k += 1
            qk *= self.q
            term = term * self.alpha / (qk - self.lam)
            total += term
            if k + 1 >= self.j0:
                r = 2 * abs(self.alpha) / abs(qk * self.q)
                if r < 1:
                    bound = abs(term) * r / (1 - r)
                    if bound <= target * max(1, abs(total)):
                        return total, bound

    def v(self, n: int) -> BigFloat:
        if n not in self._memo:
            total, bound = self.tail_exact(n)
            self._memo[n] = BigFloat.from_fraction(total, self.precision + 8, bound)
        return self._memo[n]

    def mu(self) -> BigFloat:
        return self.v(0) + 1


def v_tail_numeric(ns: NumericSeq, n: int) -> BigFloat:
    return ns.v(n)


def mu_numeric(ns: NumericSeq) -> BigFloat:
    return ns.mu()


def F_eval(q, lam, z, precision: int = 128) -> BigFloat:
    """F_q(z; lambda) = sum_n z^n / prod_{j<=n} (q^j - lambda)."""
    if Fraction(z) == 0:
        NumericSeq(q, 0, lam, precision)   # validates q and lambda
        return BigFloat.exact(1, precision)
    return NumericSeq(q, z, lam, precision).mu()

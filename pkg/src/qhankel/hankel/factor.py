"""Factorization V_n = q^e0 * prod Phi_l^{e_l} * cofactor, leading terms, K_n, and
the lambda = 1 exponent pattern."""
from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Optional

from ..errors import VerificationFailure
from ..exact.cyclotomic import cyclotomic, multiplicity, totient
from ..exact.poly import ALPHA, LAMBDA, MU, ONE, MultiPoly
from ..qseq import SeqContext
from .det import bareiss_det, hankel_det
from .exponents import e0_formula, e_l_formula

log = logging.getLogger(__name__)

DEFAULT_SEED = 20080812


# -- generic rational points -------------------------------------------------


def draw_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(1, 40), rng.randint(1, 40))


def leading_formula(n: int, lambda_is_zero: bool, alpha=ALPHA, lam=None, mu=MU) -> MultiPoly:
    """Expected coefficient of q^{e0(n)} in V_n as a polynomial in the other symbols."""
    a, m = MultiPoly(alpha), MultiPoly(mu)
    if n == 0:
        return ONE
    if lambda_is_zero:
        if n % 2 == 0:
            sign = -1 if (n * (n + 2) // 8) % 2 else 1
            return sign * a ** (n * (5 * n - 2) // 8) * m ** (n // 2)
        sign = -1 if ((n - 1) * (n - 3) // 8) % 2 else 1
        return sign * a ** ((n - 1) * (5 * n + 1) // 8) * K_rec((n - 1) // 2, a, m)
    L = LAMBDA if lam is None else MultiPoly(lam)
    core = L - (L + a) * m
    if n % 2 == 0:
        return a ** (n * (n - 1) // 2) * L ** (n * (n - 2) // 4) * core ** (n // 2)
    return a ** (n * (n - 1) // 2) * L ** ((n - 1) ** 2 // 4) * (m - 1) * core ** ((n - 1) // 2)


def generic_point(rng: random.Random, n_max: int, lam: Optional[Fraction] = None,
                  notes: Optional[list] = None) -> dict:
    """Draw (alpha, lambda, mu) with every leading coefficient up to n_max nonzero.

    ``lam`` fixes lambda instead of drawing it.  Rejected draws are logged and
    appended to ``notes``.
    """
    while True:
        alpha = draw_rational(rng)
        lv = draw_rational(rng) if lam is None else Fraction(lam)
        mu = draw_rational(rng)
        if lam is None and lv == 1:
            msg = f"re-drawing lambda={lv}: a root of unity is not a generic value"
        else:
            bad = [n for n in range(1, n_max + 1)
                   if leading_formula(n, lv == 0, alpha, lv, mu).is_zero()]
            if not bad:
                return {"alpha": alpha, "lambda": lv, "mu": mu}
            msg = (f"re-drawing degenerate point alpha={alpha}, lambda={lv}, mu={mu}: "
                   f"leading coefficient vanishes for n={bad}")
        log.info(msg)
        if notes is not None:
            notes.append(msg)


def point_context(point: dict) -> SeqContext:
    return SeqContext(alpha=point["alpha"], lam=point["lambda"], x=point["mu"])


# -- factorization -------------------------------------------------------------


@dataclass(frozen=True)
class FactoredDeterminant:
    n: int
    e0_found: int
    e0_guaranteed: int
    cyclo_exponents: dict
    guarantees: dict
    cofactor: MultiPoly
    extras: dict = field(default_factory=dict)

    def reassemble(self) -> MultiPoly:
        p = self.cofactor.shift_q(self.e0_found)
        for l, m in self.cyclo_exponents.items():
            if m:
                p = p * cyclotomic(l) ** m
        return p

    def degree_delta(self) -> int:
        """Degree of q^e0 * prod Phi_l^{found exponent}."""
        return self.e0_found + sum(m * totient(l) for l, m in self.cyclo_exponents.items())

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "e0_found": self.e0_found,
            "e0_guaranteed": self.e0_guaranteed,
            "cyclotomic": [
                {"l": l, "guaranteed": self.guarantees.get(l), "found": m}
                for l, m in sorted(self.cyclo_exponents.items())
            ],
            "extra_factors": {str(l): m for l, m in sorted(self.extras.items())},
            "cofactor": self.cofactor.to_record(),
        }


def factorize(ctx: SeqContext, n: int, probe_limit: Optional[int] = None,
              V: Optional[MultiPoly] = None) -> FactoredDeterminant:
    if ctx.q is not None:
        raise ValueError("factorization needs q symbolic")
    if V is None:
        V = hankel_det(ctx, n)
    if V.is_zero():
        raise ValueError("zero determinant")
    if probe_limit is None:
        probe_limit = ceil(n / 2) + 2
    e0 = V.q_order()
    cof = V.shift_q(-e0)
    found, guarantees, extras = {}, {}, {}
    for l in range(1, probe_limit + 1):
        m, cof = multiplicity(cof, cyclotomic(l))
        found[l] = m
        if 2 * l < n:
            guarantees[l] = e_l_formula(l, n)
        elif m:
            extras[l] = m
    fd = FactoredDeterminant(n, e0, e0_formula(n, ctx.lambda_is_zero()), found, guarantees, cof, extras)
    for l, g in guarantees.items():
        if found[l] < g:
            raise VerificationFailure(
                f"Phi_{l}^{g} divides V_{n}", lhs={"found": found[l]}, rhs={"guaranteed": g},
                context=ctx.describe())
    if fd.reassemble() != V:
        raise VerificationFailure(f"reassembly of V_{n}", context=ctx.describe())
    return fd


# -- leading coefficients --------------------------------------------------------


@dataclass(frozen=True)
class LeadingReport:
    n: int
    e0: int
    q_order: int
    expected: MultiPoly
    actual: MultiPoly

    @property
    def coefficient_ok(self) -> bool:
        return self.expected == self.actual

    def to_record(self) -> dict:
        return {"n": self.n, "e0": self.e0, "q_order": self.q_order,
                "coefficient_ok": self.coefficient_ok,
                "expected": self.expected.to_record(), "actual": self.actual.to_record()}


def verify_leading(ctx: SeqContext, n: int, V: Optional[MultiPoly] = None) -> LeadingReport:
    """Compare the q^{e0(n)} coefficient of V_n with its closed form."""
    if ctx.q is not None:
        raise ValueError("leading coefficients need q symbolic")
    if n < 1:
        raise ValueError("n must be positive")
    if V is None:
        V = hankel_det(ctx, n)
    lz = ctx.lambda_is_zero()
    e0 = e0_formula(n, lz)
    expected = leading_formula(n, lz, ctx.A, ctx.L, ctx.M)
    order = V.q_order() if V else -1
    return LeadingReport(n, e0, order, expected, V.q_coeff(e0))


# -- K_n ---------------------------------------------------------------------------


def K_matrix(n: int, alpha=ALPHA, mu=MU) -> list[list[MultiPoly]]:
    a, m = MultiPoly(alpha), MultiPoly(mu)
    size = n + 1
    rows = []
    for i in range(size):
        row = []
        for j in range(size):
            if i == j:
                row.append(m - 1)
            elif j > i:
                row.append(-(a ** (j - i)))
            elif j == i - 1:
                row.append(m)
            else:
                row.append(MultiPoly(0))
        rows.append(row)
    return rows


def K_det(n: int, alpha=ALPHA, mu=MU) -> MultiPoly:
    if n < 0:
        raise ValueError("n must be non-negative")
    return bareiss_det(K_matrix(n, alpha, mu))


def K_rec(n: int, alpha=ALPHA, mu=MU) -> MultiPoly:
    if n < 0:
        raise ValueError("n must be non-negative")
    a, m = MultiPoly(alpha), MultiPoly(mu)
    k0, k1 = m - 1, (m - 1) ** 2 + a * m
    if n == 0:
        return k0
    for _ in range(n - 1):
        k0, k1 = k1, (m - 1 - a * m) * k1 + a * m ** 2 * k0
    return k1


# -- lambda = 1 -------------------------------------------------------------------


def to_q_power_basis(exponents: dict) -> dict:
    """Solve e_d = sum_{d | l} t_l for t, from the largest l downward."""
    top = max((l for l, m in exponents.items() if m), default=0)
    t = {}
    for l in range(top, 0, -1):
        t[l] = exponents.get(l, 0) - sum(t[L] for L in range(2 * l, top + 1, l))
    return {l: t[l] for l in sorted(t)}


def expected_delta_degree_lambda1(n: int) -> int:
    return n * (n - 1) ** 2 // 4 if n % 2 else n * n * (n - 2) // 4


@dataclass(frozen=True)
class ConjectureReport:
    n: int
    point: dict
    basis_exponents: dict
    expected_exponents: dict
    degree_found: int
    degree_expected: int
    negative: bool

    @property
    def agreed(self) -> bool:
        return (not self.negative and self.basis_exponents == self.expected_exponents
                and self.degree_found == self.degree_expected)

    def to_record(self) -> dict:
        return {
            "n": self.n,
            "kind": "conjecture-check",
            "point": {k: f"{v.numerator}/{v.denominator}" for k, v in self.point.items()},
            "basis_exponents": {str(l): e for l, e in self.basis_exponents.items()},
            "expected_exponents": {str(l): e for l, e in self.expected_exponents.items()},
            "degree_found": self.degree_found,
            "degree_expected": self.degree_expected,
            "conjecture": "agreed" if self.agreed else
                          ("conjecture pattern violated" if self.negative else "violated"),
        }


def conjecture_lambda1(n: int, seed: int = DEFAULT_SEED, point: Optional[dict] = None,
                       V: Optional[MultiPoly] = None) -> ConjectureReport:
    """Empirical check of the (q^l - 1)-basis exponent pattern at lambda = 1."""
    if n < 2:
        raise ValueError("the conjecture check needs n >= 2")
    if point is None:
        point = generic_point(random.Random(seed), n, lam=Fraction(1))
    ctx = point_context(point)
    fd = factorize(ctx, n, probe_limit=max(n, ceil(n / 2) + 2), V=V)
    basis = to_q_power_basis(fd.cyclo_exponents)
    negative = any(e < 0 for e in basis.values())
    top = max(list(basis) + [n])
    basis = {l: basis.get(l, 0) for l in range(1, top + 1)}
    expected = {l: 2 * max(0, n - 2 * l) for l in range(1, top + 1)}
    return ConjectureReport(n, point, basis, expected, fd.degree_delta(),
                            expected_delta_degree_lambda1(n), negative)


__all__ = [
    "DEFAULT_SEED", "ConjectureReport", "FactoredDeterminant", "LeadingReport",
    "K_det", "K_matrix", "K_rec", "conjecture_lambda1", "draw_rational",
    "expected_delta_degree_lambda1", "factorize", "generic_point", "leading_formula",
    "point_context", "to_q_power_basis", "verify_leading",
]

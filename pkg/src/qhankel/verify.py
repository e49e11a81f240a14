"""Verification suites: each runs a family of exact checks and returns a SuiteResult.

Suites stop at the first failing identity and record both sides of it.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Optional

from .errors import VerificationFailure
from .exact.bigfloat import evaluate_poly
from .exact.cyclotomic import cyclotomic, multiplicity
from .hankel.det import cofactor_det, hankel_dets, hankel_matrix
from .hankel.exponents import (check_degree_bounds, e0_formula, e1_floor, e2_floor, e_l_compact,
                               e_l_formula, e_l_sum)
from .hankel.factor import (DEFAULT_SEED, K_det, K_rec, conjecture_lambda1, draw_rational, factorize,
                            generic_point, point_context, verify_leading)
from .hankel.numeric import bezivin_sum, check_scan_preconditions, kronecker_scan, numeric_hankel_dets
from .qseq import (NumericSeq, SeqContext, apply_D, apply_Dtilde, apply_FG, difference_expansion, scale_q,
                   v_closed_form)


def _rec(x):
    if hasattr(x, "to_record"):
        return x.to_record()
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass
class SuiteResult:
    suite: str
    parameters: dict
    rows: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    failure: Optional[dict] = None
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failure is None

    def fail(self, identity: str, lhs, rhs, **context):
        if self.failure is None:
            self.failure = VerificationFailure(identity, _rec(lhs), _rec(rhs), context).to_record()

    def to_record(self) -> dict:
        out = {"suite": self.suite, "parameters": self.parameters, "passed": self.passed,
               "rows": self.rows, "notes": self.notes}
        out.update(self.extra)
        if self.failure is not None:
            out["first_failure"] = self.failure
        return out


# -- operator identities -----------------------------------------------------------


def suite_lemma_dl(l_max: int = 4, n_max: int = 10, neg_min: int = -6, neg_alpha=Fraction(3, 2),
                   seed: int = DEFAULT_SEED, order_l_max: int = 3) -> SuiteResult:
    res = SuiteResult("lemma-dl", {"l_max": l_max, "n_max": n_max, "negative_n_min": neg_min,
                                   "alpha_for_negative": _frac(neg_alpha), "seed": seed,
                                   "order_l_max": order_l_max})
    ctx = SeqContext()
    for l in range(l_max + 1):
        for n in range(max(0, 2 * l - 1), n_max + 1):
            lhs, rhs = apply_D(ctx, l, n), difference_expansion(ctx, l, n)
            ok = lhs == rhs
            res.rows.append({"l": l, "n": n, "symbolic": True, "equal": ok})
            if not ok:
                res.fail(f"D_{l} v_{n} = q-binomial expansion (symbolic)", lhs, rhs, l=l, n=n)
                return res
    # exact q-order at a generic rational point
    rng = random.Random(seed)
    point = generic_point(rng, 1, notes=res.notes)
    cg = point_context(point)
    res.parameters["order_point"] = {k: _frac(v) for k, v in point.items()}
    for l in range(order_l_max + 1):
        for n in range(max(0, 2 * l - 1), n_max + 1):
            value = apply_D(cg, l, n)
            order = value.q_order() if not value.is_zero() else None
            ok = order == l * (n - l)
            res.rows.append({"l": l, "n": n, "generic_point": True, "q_order": order, "order_ok": ok})
            if not ok:
                res.fail(f"ord_q D_{l} v_{n} = {l * (n - l)}", order, l * (n - l), l=l, n=n)
                return res
    # lambda = 0 with rational alpha reaches negative indices
    c0 = SeqContext(alpha=neg_alpha, lam=0)
    for l in range(l_max + 1):
        for n in range(neg_min, n_max + 1):
            lhs, rhs = apply_D(c0, l, n), difference_expansion(c0, l, n)
            row = {"l": l, "n": n, "lambda": "0", "equal": lhs == rhs}
            if not row["equal"]:
                res.rows.append(row)
                res.fail(f"D_{l} v_{n} = q-binomial expansion (lambda=0)", lhs, rhs, l=l, n=n)
                return res
            if not lhs.is_zero():
                order = lhs.q_order()
                row["q_order"] = order
                if n >= 2 * l - 1:
                    row["order_ok"] = order == l * (n - l)
                else:
                    row["order_ok"] = order > l * (n - l)
                if not row["order_ok"]:
                    res.rows.append(row)
                    rel = "=" if n >= 2 * l - 1 else ">"
                    res.fail(f"ord_q D_{l} v_{n} {rel} {l * (n - l)}", order, l * (n - l), l=l, n=n)
                    return res
            res.rows.append(row)
    return res


def suite_operator_relation(l_max: int = 4, n_max: int = 10) -> SuiteResult:
    res = SuiteResult("operator-relation", {"l_max": l_max, "n_max": n_max})
    ctx = SeqContext()
    for l in range(l_max + 1):
        for n in range(max(0, 2 * l - 1), n_max + 1):
            lhs = apply_D(ctx, l, n)
            rhs = scale_q(ctx, apply_Dtilde(ctx, l, n - l), l * n - comb(l, 2))
            ok = lhs == rhs
            res.rows.append({"l": l, "n": n, "equal": ok})
            if not ok:
                res.fail(f"D_{l} v_{n} = q^(ln-C(l,2)) Dtilde_{l} v_{n - l}", lhs, rhs, l=l, n=n)
                return res
    return res


def suite_closed_form(n_max: int = 12) -> SuiteResult:
    res = SuiteResult("closed-form", {"n_max": n_max})
    ctx = SeqContext()
    for n in range(n_max + 1):
        a, b = ctx.v(n), v_closed_form(SeqContext(), n)
        res.rows.append({"n": n, "equal": a == b, "terms": len(a)})
        if a != b:
            res.fail(f"closed form of v_{n}", b, a, n=n)
            break
    return res


# -- determinants ----------------------------------------------------------------------


SYMBOLIC_LIMIT = 6
SPECIAL_LAMBDA = Fraction(2)


def _symbolic_dets(n_max: int):
    return hankel_dets(SeqContext(), n_max)


def suite_leading(n_max: int = 6, seed: int = DEFAULT_SEED, dets: Optional[dict] = None) -> SuiteResult:
    """q-order and q^{e0} coefficient of V_n in both lambda cases.

    Fully symbolic up to n = 6; beyond that lambda is fixed to 2 (nonzero branch)
    or 0, with alpha and mu symbolic.  q-order equality is also checked at
    seeded generic rational points.
    """
    res = SuiteResult("leading", {"n_max": n_max, "seed": seed, "symbolic_up_to": SYMBOLIC_LIMIT,
                                  "lambda_beyond_symbolic": _frac(SPECIAL_LAMBDA)})
    dets = dets if dets is not None else leading_dets(n_max)
    for n in range(1, n_max + 1):
        for case, (ctx, V) in dets[n].items():
            rep = verify_leading(ctx, n, V)
            row = {"n": n, "case": case, "e0": rep.e0, "q_order": rep.q_order,
                   "coefficient_ok": rep.coefficient_ok}
            res.rows.append(row)
            if not rep.coefficient_ok:
                res.fail(f"leading coefficient of V_{n} ({case})", rep.actual, rep.expected, n=n)
                return res
            if rep.q_order < rep.e0:
                res.fail(f"ord_q V_{n} >= e0 ({case})", rep.q_order, rep.e0, n=n)
                return res
    # q-order equality at generic points
    rng = random.Random(seed)
    for lz in (False, True):
        point = generic_point(rng, n_max, lam=Fraction(0) if lz else None, notes=res.notes)
        ctx = point_context(point)
        Vs = hankel_dets(ctx, n_max)
        for n in range(1, n_max + 1):
            order, e0 = Vs[n].q_order(), e0_formula(n, lz)
            res.rows.append({"n": n, "case": "generic " + ("lambda=0" if lz else "lambda!=0"),
                             "point": {k: _frac(v) for k, v in point.items()},
                             "q_order": order, "e0": e0, "equal": order == e0})
            if order != e0:
                res.fail(f"ord_q V_{n} = e0 at generic point", order, e0, n=n,
                         point={k: _frac(v) for k, v in point.items()})
                return res
    return res


def leading_dets(n_max: int) -> dict:
    """{n: {case: (ctx, V_n)}} for the leading-term and degree checks."""
    out = {n: {} for n in range(1, n_max + 1)}
    full = _symbolic_dets(min(n_max, SYMBOLIC_LIMIT))
    c_sym, c_zero = SeqContext(), SeqContext(lam=0)
    for n in range(1, min(n_max, SYMBOLIC_LIMIT) + 1):
        out[n]["symbolic"] = (c_sym, full[n])
        out[n]["lambda=0"] = (c_zero, full[n].subs({"lambda": 0}))
    if n_max > SYMBOLIC_LIMIT:
        c_spec = SeqContext(lam=SPECIAL_LAMBDA)
        c_zero2 = SeqContext(lam=0)
        spec = hankel_dets(c_spec, n_max)
        zero = hankel_dets(c_zero2, n_max)
        for n in range(SYMBOLIC_LIMIT + 1, n_max + 1):
            out[n][f"lambda={SPECIAL_LAMBDA}"] = (c_spec, spec[n])
            out[n]["lambda=0"] = (c_zero2, zero[n])
    return out


def suite_degree_bounds(n_max: int = 6, seed: int = DEFAULT_SEED, dets: Optional[dict] = None) -> SuiteResult:
    """Degrees of V_n against the bounds in q, mu, alpha, lambda.

    Beyond the fully symbolic range the lambda-degree is read off V_n with q and
    lambda symbolic and (alpha, mu) at a seeded generic point.
    """
    res = SuiteResult("degree-bounds", {"n_max": n_max, "seed": seed})
    dets = dets if dets is not None else leading_dets(n_max)
    rng = random.Random(seed)
    biv = None
    if n_max > SYMBOLIC_LIMIT:
        point = {"alpha": draw_rational(rng), "mu": draw_rational(rng)}
        res.parameters["bivariate_point"] = {k: _frac(v) for k, v in point.items()}
        biv = hankel_dets(SeqContext(alpha=point["alpha"], x=point["mu"]), n_max)
    for n in range(1, n_max + 1):
        checks = {}
        if "symbolic" in dets[n]:
            checks.update(check_degree_bounds(dets[n]["symbolic"][1], n))
        else:
            spec = next(V for case, (c, V) in dets[n].items() if case != "lambda=0")
            checks.update(check_degree_bounds(spec, n, ("q", "mu", "alpha")))
            checks.update(check_degree_bounds(biv[n], n, ("lambda",)))
        row = {"n": n}
        for var, (actual, bound, ok) in checks.items():
            row[var] = {"actual": actual, "bound": bound}
            if not ok:
                res.rows.append(row)
                res.fail(f"deg_{var} V_{n} <= {bound}", actual, bound, n=n)
                return res
        res.rows.append(row)
    return res


def suite_cyclotomic(n_max: int = 10, seed: int = DEFAULT_SEED, points: int = 3,
                     probe_limit: Optional[int] = None, l_formula_max: int = 20,
                     n_formula_max: int = 200) -> SuiteResult:
    res = SuiteResult("cyclotomic", {"n_max": n_max, "seed": seed, "points": points,
                                     "probe_limit": probe_limit or "ceil(n/2)+2",
                                     "formula_grid": [l_formula_max, n_formula_max]})
    for l in range(1, l_formula_max + 1):
        for n in range(n_formula_max + 1):
            a, b = e_l_sum(l, n), e_l_compact(l, n)
            if a != b:
                res.fail(f"e_{l}({n}) sum = compact", a, b, l=l, n=n)
                return res
    for n in range(n_formula_max + 1):
        if n >= 1 and e_l_formula(1, n) != e1_floor(n):
            res.fail(f"e_1({n}) = floor((n-1)^2/3)", e_l_formula(1, n), e1_floor(n))
            return res
        if n >= 2 and e_l_formula(2, n) != e2_floor(n):
            res.fail(f"e_2({n}) = floor((n-2)^2/6)", e_l_formula(2, n), e2_floor(n))
            return res
    rng = random.Random(seed)
    for k in range(points):
        point = generic_point(rng, n_max, notes=res.notes)
        ctx = point_context(point)
        Vs = hankel_dets(ctx, n_max)
        for n in range(1, n_max + 1):
            try:
                fd = factorize(ctx, n, probe_limit, V=Vs[n])
            except VerificationFailure as exc:
                res.failure = exc.to_record()
                return res
            for l in sorted(fd.cyclo_exponents):
                res.rows.append({"point": k, "n": n, "l": l, "guaranteed": fd.guarantees.get(l),
                                 "found": fd.cyclo_exponents[l]})
        res.notes.append(f"point {k}: " + ", ".join(f"{a}={_frac(v)}" for a, v in point.items()))
    return res


def suite_w_divisibility(l_max: int = 3, m_max: int = 3, extra: int = 4,
                         seed: int = DEFAULT_SEED) -> SuiteResult:
    rng = random.Random(seed)
    alpha, lam = draw_rational(rng), draw_rational(rng)
    res = SuiteResult("w-divisibility", {"l_max": l_max, "m_max": m_max, "extra": extra,
                                         "alpha": _frac(alpha), "lambda": _frac(lam), "seed": seed})
    ctx = SeqContext(alpha=alpha, lam=lam)
    for l in range(1, l_max + 1):
        phi = cyclotomic(l)
        for m in range(1, m_max + 1):
            start = (3 * m - 1) * l
            for n in range(start, start + extra + 1):
                w = apply_FG(ctx, l, m, n).w
                found, _ = multiplicity(w, phi, limit=m) if w else (m, w)
                res.rows.append({"l": l, "m": m, "n": n, "divisible": found >= m})
                if found < m:
                    res.fail(f"Phi_{l}^{m} divides w_{{{m},{n}}}", {"multiplicity": found}, {"required": m},
                             l=l, m=m, n=n)
                    return res
    return res


def suite_kdet(n_max: int = 10) -> SuiteResult:
    res = SuiteResult("kdet", {"n_max": n_max})
    for n in range(n_max + 1):
        a, b = K_det(n), K_rec(n)
        res.rows.append({"n": n, "equal": a == b})
        if a != b:
            res.fail(f"K_{n} determinant = recurrence", a, b, n=n)
            break
    return res


def suite_conjecture_lambda1(n_max: int = 8, seed: int = DEFAULT_SEED) -> SuiteResult:
    """Empirical check; disagreement is reported in the data, not as a failure."""
    res = SuiteResult("conjecture-lambda1", {"n_max": n_max, "seed": seed, "lambda": "1/1"})
    rng = random.Random(seed)
    point = generic_point(rng, n_max, lam=Fraction(1), notes=res.notes)
    Vs = hankel_dets(point_context(point), n_max)
    agreed = True
    for n in range(2, n_max + 1):
        rep = conjecture_lambda1(n, point=point, V=Vs[n])
        res.rows.append(rep.to_record())
        agreed = agreed and rep.agreed
    res.extra["conjecture"] = "agreed" if agreed else "violated"
    return res


def suite_kronecker(n_max: int = 12, seed: int = DEFAULT_SEED, count: int = 5,
                    q=Fraction(2), alpha=Fraction(1), lam=Fraction(0)) -> SuiteResult:
    res = SuiteResult("kronecker", {"n_max": n_max, "seed": seed, "count": count,
                                    "q": _frac(q), "alpha": _frac(alpha), "lambda": _frac(lam)})
    check_scan_preconditions(q, alpha, lam)
    rng = random.Random(seed)
    for _ in range(count):
        x = draw_rational(rng)
        while x == 1:
            res.notes.append("re-drawing x=1: the seed v_0 = x - 1 vanishes")
            x = draw_rational(rng)
        scan = kronecker_scan(x, q, alpha, lam, n_max)
        res.rows.append(scan.to_record())
        if scan.zeros:
            res.fail(f"V_n(x) != 0 for n <= {n_max}", {"zeros": scan.zeros}, "nonzero",
                     x=_frac(x), values={str(n): _frac(scan.values[n - 1]) for n in scan.zeros})
            return res
    return res


def suite_bezivin(n_max: int = 3, J_values=(4, 6, 8), q=Fraction(2), alpha=Fraction(1),
                  precision: int = 256) -> SuiteResult:
    res = SuiteResult("bezivin", {"n_max": n_max, "J": list(J_values), "q": _frac(q),
                                  "alpha": _frac(alpha), "precision": precision})
    dets = numeric_hankel_dets(q, alpha, 0, n_max, precision)
    for n in range(1, n_max + 1):
        V = dets[n - 1]
        prev = None
        for J in J_values:
            if J < n:
                continue
            b = bezivin_sum(q, alpha, n, J)
            below = b.partial <= V.upper()
            above = V.lower() <= b.partial + b.tail_bound
            increasing = prev is None or b.partial > prev
            res.rows.append({"n": n, "J": J, "partial": float(b.partial), "tail_bound": float(b.tail_bound),
                             "V_n": V.to_decimal(15), "lower_ok": below, "upper_ok": above,
                             "increasing": increasing})
            if not (below and above and increasing):
                res.fail(f"partial sum brackets V_{n} at J={J}", b.to_record(), V.to_record())
                return res
            prev = b.partial
    return res


def suite_numeric_coherence(n_max: int = 10, precision: int = 256,
                            params=((2, 1, Fraction(1, 2)), (2, 1, 0))) -> SuiteResult:
    res = SuiteResult("numeric-coherence", {"n_max": n_max, "precision": precision,
                                            "params": [[_frac(Fraction(x)) for x in p] for p in params]})
    for q, a, lam in params:
        ns = NumericSeq(q, a, lam, precision)
        mu = ns.mu()
        ctx = SeqContext()
        for n in range(n_max + 1):
            tail = ns.v(n)
            sym = evaluate_poly(ctx.v(n), {"q": Fraction(q), "alpha": Fraction(a), "lambda": Fraction(lam),
                                           "mu": mu}, precision + 64)
            ok = tail.overlaps(sym)
            res.rows.append({"q": str(q), "alpha": str(a), "lambda": str(lam), "n": n, "agree": ok,
                             "tail": tail.to_decimal(15), "combined_err": float(tail.err + sym.err)})
            if not ok:
                res.fail(f"numeric tail v_{n} = symbolic v_{n} at numeric mu", tail.to_record(), sym.to_record())
                return res
    return res


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "lemma-dl": suite_lemma_dl,
    "operator-relation": suite_operator_relation,
    "closed-form": suite_closed_form,
    "leading": suite_leading,
    "cyclotomic": suite_cyclotomic,
    "w-divisibility": suite_w_divisibility,
    "kdet": suite_kdet,
    "degree-bounds": suite_degree_bounds,
    "conjecture-lambda1": suite_conjecture_lambda1,
    "kronecker": suite_kronecker,
    "bezivin": suite_bezivin,
    "numeric-coherence": suite_numeric_coherence,
}


def cofactor_crosscheck(n_max: int = 4) -> bool:
    """Elimination agrees with cofactor expansion on symbolic inputs."""
    ctx = SeqContext()
    Vs = hankel_dets(ctx, n_max)
    values = [ctx.v(k) for k in range(2 * n_max - 1)]
    return all(Vs[n] == cofactor_det(hankel_matrix(values, n)) for n in range(1, n_max + 1))


__all__ = ["SUITES", "SuiteResult", "cofactor_crosscheck", "leading_dets"] + [k for k in globals() if k.startswith("suite_")]

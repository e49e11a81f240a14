"""Exponent formulas: q-order e0(n), cyclotomic multiplicities e_l(n), degree bounds."""
from __future__ import annotations

from dataclasses import asdict, dataclass
from math import comb

from ..exact.poly import MultiPoly


def e0_formula(n: int, lambda_is_zero: bool) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    if not lambda_is_zero:
        return comb(n, 3)
    if n % 2 == 0:
        return n * (n - 2) * (5 * n - 2) // 24
    return n * (n - 1) * (5 * n - 7) // 24


def e_l_sum(l: int, n: int) -> int:
    """sum_{i<n} (floor((i+l)/(3l)) + floor(i/(3l)))."""
    return sum((i + l) // (3 * l) + i // (3 * l) for i in range(n))


def e_l_compact(l: int, n: int) -> int:
    """Closed form by residue class of n modulo 3l."""
    j = n % (3 * l)
    value = (n - j) * (n + j - 2 * l) // (3 * l)
    if j >= 2 * l:
        value += j - 2 * l
    return value


def e_l_formula(l: int, n: int) -> int:
    if l < 1 or n < 0:
        raise ValueError("need l >= 1 and n >= 0")
    a, b = e_l_sum(l, n), e_l_compact(l, n)
    if a != b:
        raise AssertionError(f"e_l formulas disagree at l={l}, n={n}: {a} vs {b}")
    return a


def e1_floor(n: int) -> int:
    return (n - 1) ** 2 // 3


def e2_floor(n: int) -> int:
    return (n - 2) ** 2 // 6


@dataclass(frozen=True)
class DegreeBounds:
    n: int
    q: int
    mu: int
    alpha: int
    lam: int

    def to_record(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def degree_bounds(n: int) -> DegreeBounds:
    if n < 1:
        raise ValueError("degree bounds need n >= 1")
    return DegreeBounds(n, n * (n - 1) * (4 * n + 1) // 6, n, n * (n - 1), n * (n - 1))


def check_degree_bounds(V: MultiPoly, n: int, variables=("q", "mu", "alpha", "lambda")) -> dict:
    """Actual degree against the bound for each listed variable.

    Returns ``{var: (actual, bound, ok)}``; variables fixed to numbers report degree 0.
    """
    b = degree_bounds(n).to_record()
    out = {}
    for var in variables:
        actual = V.degree(var)
        out[var] = (actual, b[var], actual <= b[var])
    return out

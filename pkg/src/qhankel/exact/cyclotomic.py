"""Cyclotomic polynomials in q, exact division by q-only divisors, Euler's totient."""
from __future__ import annotations

import math
import threading
from typing import Optional

from .poly import Q, MultiPoly, NotDivisible

_cyclo_cache: dict[int, MultiPoly] = {1: Q - 1}
_cyclo_lock = threading.Lock()


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def cyclotomic(l: int) -> MultiPoly:
    """Phi_l(q), obtained from q^l - 1 by exact division by Phi_d for the proper divisors d."""
    if l < 1:
        raise ValueError(f"cyclotomic index must be positive, got {l}")
    with _cyclo_lock:
        cached = _cyclo_cache.get(l)
    if cached is not None:
        return cached
    p = Q ** l - 1
    for d in divisors(l)[:-1]:
        p = p.exact_div(cyclotomic(d))
    with _cyclo_lock:
        _cyclo_cache.setdefault(l, p)
    return p


def _check_q_only(d: MultiPoly) -> None:
    if d.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if any(v != "q" for v in d.variables):
        raise ValueError(f"divisor must involve only q, got variables {d.variables}")


def divide_exact_q(p: MultiPoly, d: MultiPoly) -> Optional[MultiPoly]:
    """Return ``p / d`` if ``d`` (a polynomial in q alone) divides ``p`` exactly, else None."""
    _check_q_only(d)
    try:
        return p.exact_div(d)
    except NotDivisible:
        return None


def multiplicity(p: MultiPoly, d: MultiPoly, limit: Optional[int] = None) -> tuple[int, MultiPoly]:
    """Largest m with d^m | p (capped at ``limit``) and the cofactor p / d^m."""
    _check_q_only(d)
    if p.is_zero():
        raise ValueError("multiplicity in the zero polynomial is unbounded")
    if d.is_constant():
        raise ValueError("multiplicity of a unit is unbounded")
    m = 0
    while limit is None or m < limit:
        quotient = divide_exact_q(p, d)
        if quotient is None:
            break
        p = quotient
        m += 1
    return m, p


def totient(l: int) -> int:
    if l < 1:
        raise ValueError("totient is defined for positive integers")
    result, n, p = l, l, 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            result -= result // p
        p += 1
    if n > 1:
        result -= result // n
    return result


def totients_upto(n: int) -> list[int]:
    """phi(0..n) by sieve; phi(0) is reported as 0."""
    phi = list(range(n + 1))
    for p in range(2, n + 1):
        if phi[p] == p:
            for k in range(p, n + 1, p):
                phi[k] -= phi[k] // p
    return phi


def mertens_sigma(x) -> int:
    """Sum of phi(l) for 1 <= l <= floor(x)."""
    if x < 0:
        raise ValueError("mertens_sigma needs x >= 0")
    n = math.floor(x)
    return sum(totients_upto(n)[1:]) if n >= 1 else 0

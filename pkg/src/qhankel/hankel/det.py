"""Fraction-free (Bareiss) determinants over exact rings, plus a cofactor oracle.

The routines work for any element type with ``+ - *``, a zero test via ``bool``
and an exact division supplied by the caller: MultiPoly, int, gmpy2.mpz and
Fraction all qualify.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from ..exact.poly import MultiPoly, NotDivisible
from ..qseq import SeqContext


class InexactDivision(ArithmeticError):
    """A Bareiss step produced a remainder; this signals a bug, never a valid input."""


def _default_div(a, b):
    if isinstance(a, MultiPoly):
        try:
            return a.exact_div(b)
        except NotDivisible:
            raise InexactDivision(f"Bareiss division left a remainder (divisor has {len(b)} terms)") from None
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return a / b
    q, r = divmod(a, b)
    if r:
        raise InexactDivision(f"Bareiss division left a remainder: {a} / {b}")
    return q


def _one_like(x):
    if isinstance(x, MultiPoly):
        return MultiPoly(1)
    return type(x)(1)


def bareiss_det(matrix: Sequence[Sequence], div: Callable = _default_div):
    """Determinant by fraction-free elimination with row pivoting."""
    n = len(matrix)
    if n == 0:
        return 1
    M = [list(row) for row in matrix]
    sign = 1
    prev = _one_like(M[0][0])
    for k in range(n - 1):
        if not M[k][k]:
            swap = next((i for i in range(k + 1, n) if M[i][k]), None)
            if swap is None:
                return M[0][0] * 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            row_i, row_k = M[i], M[k]
            f = row_i[k]
            for j in range(k + 1, n):
                row_i[j] = div(pivot * row_i[j] - f * row_k[j], prev)
        prev = pivot
    d = M[n - 1][n - 1]
    return d if sign > 0 else -d


def bareiss_leading_minors(matrix: Sequence[Sequence], div: Callable = _default_div) -> list:
    """All leading principal minors d_1..d_n in one elimination pass.

    No pivoting is possible here, so the pass stops at the first vanishing
    minor; the list then holds that zero and the caller recomputes the rest
    with :func:`bareiss_det`.
    """
    n = len(matrix)
    M = [list(row) for row in matrix]
    minors = []
    prev = None
    for k in range(n):
        pivot = M[k][k]
        minors.append(pivot)
        if not pivot or k == n - 1:
            break
        for i in range(k + 1, n):
            row_i, row_k = M[i], M[k]
            f = row_i[k]
            for j in range(k + 1, n):
                t = pivot * row_i[j] - f * row_k[j]
                row_i[j] = t if prev is None else div(t, prev)
        prev = pivot
    return minors


def cofactor_det(matrix: Sequence[Sequence]):
    """Laplace expansion along the first row; exponential, used only as an oracle."""
    n = len(matrix)
    if n == 0:
        return 1
    if n == 1:
        return matrix[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = matrix[0][j] * cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def hankel_matrix(values: Sequence, n: int) -> list[list]:
    return [[values[i + j] for j in range(n)] for i in range(n)]


def hankel_det(ctx: SeqContext, n: int) -> MultiPoly:
    """V_n = det(v_{i+j})_{0<=i,j<n}; the empty determinant is 1."""
    if n < 0:
        raise ValueError("order must be non-negative")
    if n == 0:
        return MultiPoly(1)
    values = [ctx.v(k) for k in range(2 * n - 1)]
    d = bareiss_det(hankel_matrix(values, n))
    if n <= 4:
        oracle = cofactor_det(hankel_matrix(values, n))
        if d != oracle:
            raise AssertionError(f"elimination and cofactor expansion disagree at n={n}")
    return d


def hankel_dets(ctx: SeqContext, n_max: int) -> list[MultiPoly]:
    """[V_0, V_1, ..., V_nmax] from a single elimination of the largest matrix."""
    if n_max < 0:
        raise ValueError("order must be non-negative")
    out = [MultiPoly(1)]
    if n_max == 0:
        return out
    values = [ctx.v(k) for k in range(2 * n_max - 1)]
    minors = bareiss_leading_minors(hankel_matrix(values, n_max))
    out.extend(minors)
    for n in range(len(out), n_max + 1):
        out.append(bareiss_det(hankel_matrix(values, n)))
    return out

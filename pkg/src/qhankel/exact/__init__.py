"""Exact arithmetic substrate: rationals, polynomials, cyclotomics, error-tracked floats."""
from .poly import (
    ALPHA, LAMBDA, MU, ONE, Q, VARS, ZERO,
    MultiPoly, NotDivisible, QPolyView, mpoly_arith, q_coeff, q_degree, q_order,
)
from .cyclotomic import cyclotomic, divide_exact_q, mertens_sigma, multiplicity, totient, totients_upto
from .bigfloat import BigFloat

__all__ = [
    "ALPHA", "LAMBDA", "MU", "ONE", "Q", "VARS", "ZERO",
    "MultiPoly", "NotDivisible", "QPolyView", "mpoly_arith", "q_coeff", "q_degree", "q_order",
    "cyclotomic", "divide_exact_q", "mertens_sigma", "multiplicity", "totient", "totients_upto",
    "BigFloat",
]

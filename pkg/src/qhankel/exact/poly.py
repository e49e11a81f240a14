"""Sparse multivariate polynomials over the rationals in the variables q, alpha, lambda, mu.

All polynomials live in one canonical ring Q[q, alpha, lambda, mu] (lex order,
q most significant). The heavy lifting is delegated to FLINT's ``fmpq_mpoly``;
this module supplies the immutable value type the rest of the package uses,
plus q-specific helpers (order, degree, coefficient extraction) and the text
serialization used by the CLI.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

import flint
from flint.utils.flint_exceptions import DomainError

VARS = ("q", "alpha", "lambda", "mu")
_INDEX = {name: i for i, name in enumerate(VARS)}
_CTX = flint.fmpq_mpoly_ctx.get(VARS, "lex")

Scalar = Union[int, Fraction]


class NotDivisible(ArithmeticError):
    """Raised by :meth:`MultiPoly.exact_div` when the division leaves a remainder."""


def to_fmpq(c: Scalar) -> flint.fmpq:
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, int):
        return flint.fmpq(c)
    if isinstance(c, flint.fmpq):
        return c
    raise TypeError(f"not an exact rational: {c!r}")


def from_fmpq(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


class MultiPoly:
    """Immutable exact polynomial in (q, alpha, lambda, mu).

    Supports ``+ - *`` with other polynomials, ints and Fractions, and ``**`` with
    a non-negative integer exponent.
    """

    __slots__ = ("_p",)

    def __init__(self, value: Union["MultiPoly", Scalar, None] = None):
        if value is None:
            self._p = _CTX.from_dict({})
        elif isinstance(value, MultiPoly):
            self._p = value._p
        elif isinstance(value, flint.fmpq_mpoly):
            self._p = value
        else:
            self._p = _CTX.constant(to_fmpq(value))

    @classmethod
    def gen(cls, name: str) -> "MultiPoly":
        return cls(_CTX.gen(_INDEX[name]))

    @classmethod
    def from_terms(cls, terms: Mapping[tuple, Scalar], variables: Iterable[str] = VARS) -> "MultiPoly":
        """Build from ``{exponent vector: coefficient}`` over the given variable list."""
        slots = [_INDEX[v] for v in variables]
        d = {}
        for exps, c in terms.items():
            if len(exps) != len(slots):
                raise ValueError(f"exponent vector {exps} does not match variables {list(variables)}")
            full = [0, 0, 0, 0]
            for s, e in zip(slots, exps):
                if e < 0:
                    raise ValueError("negative exponent in polynomial term")
                full[s] += e
            key = tuple(full)
            d[key] = d.get(key, 0) + to_fmpq(c)
        return cls(_CTX.from_dict({k: v for k, v in d.items() if v != 0}))

    # -- ring operations -------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            return other._p
        if isinstance(other, (int, Fraction)):
            return to_fmpq(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(self._p - o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(o - self._p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else MultiPoly(self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return MultiPoly(-self._p)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            raise ValueError("negative power is not a polynomial operation")
        return MultiPoly(self._p ** k)

    def exact_div(self, other: Union["MultiPoly", Scalar]) -> "MultiPoly":
        """Quotient ``self / other``; raises :class:`NotDivisible` on a remainder."""
        o = self._coerce(other)
        if o is NotImplemented:
            raise TypeError(f"cannot divide by {other!r}")
        if o == 0:
            raise ZeroDivisionError("division by the zero polynomial")
        try:
            return MultiPoly(self._p / o)
        except DomainError as exc:
            raise NotDivisible(str(exc)) from None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._p == o

    def __hash__(self):
        return hash(tuple(sorted((k, (int(c.p), int(c.q))) for k, c in self._p.to_dict().items())))

    def __bool__(self):
        return not self._p.is_zero()

    def __repr__(self):
        return f"MultiPoly({self._p.str()})"

    def __str__(self):
        return self._p.str()

    # -- inspection ------------------------------------------------------

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def __len__(self):
        return len(self._p)

    def terms(self) -> dict[tuple[int, int, int, int], Fraction]:
        return {k: from_fmpq(c) for k, c in self._p.to_dict().items()}

    @property
    def variables(self) -> tuple[str, ...]:
        """Variables that actually occur, in canonical order."""
        degs = self._p.degrees()
        return tuple(v for v, d in zip(VARS, degs) if d > 0)

    def degree(self, var: str) -> int:
        """Degree in ``var``; -1 for the zero polynomial."""
        if self._p.is_zero():
            return -1
        return int(self._p.degrees()[_INDEX[var]])

    def constant_value(self) -> Fraction:
        if not self._p.is_constant():
            raise ValueError("polynomial is not constant")
        d = self._p.to_dict()
        return from_fmpq(d[(0, 0, 0, 0)]) if d else Fraction(0)

    # -- q-structure -----------------------------------------------------

    def q_order(self) -> int:
        if self._p.is_zero():
            raise ValueError("order of zero polynomial undefined")
        # lex with q first: the last term carries the smallest q-exponent
        return int(self._p.monoms()[-1][0])

    def q_degree(self) -> int:
        if self._p.is_zero():
            raise ValueError("degree of zero polynomial undefined")
        return int(self._p.degrees()[0])

    def q_coeff(self, k: int) -> "MultiPoly":
        """Coefficient of q^k as a polynomial in alpha, lambda, mu."""
        d = {(0,) + e[1:]: c for e, c in self._p.to_dict().items() if e[0] == k}
        return MultiPoly(_CTX.from_dict(d))

    def shift_q(self, k: int) -> "MultiPoly":
        """Multiply by q^k; negative k requires divisibility by q^-k."""
        if k >= 0:
            return MultiPoly(self._p * _CTX.gen(0) ** k)
        return self.exact_div(MultiPoly(_CTX.gen(0) ** (-k)))

    # -- substitution and evaluation --------------------------------------

    def subs(self, values: Mapping[str, Scalar]) -> "MultiPoly":
        """Specialize some variables to rationals, e.g. ``p.subs({"lambda": Fraction(1, 3)})``."""
        if not values:
            return self
        for name in values:
            if name not in _INDEX:
                raise KeyError(f"unknown variable {name!r}")
        return MultiPoly(self._p.subs({k: to_fmpq(v) for k, v in values.items()}))

    def evaluate(self, values: Mapping[str, Scalar]) -> Fraction:
        """Exact value with every occurring variable specialized."""
        return self.subs(values).constant_value()

    def derivative(self, var: str) -> "MultiPoly":
        return MultiPoly(self._p.derivative(var))

    # -- serialization ---------------------------------------------------

    def to_record(self) -> dict:
        """``{"vars": [...], "terms": [{"coefficient": "p/q", "exponents": [...]}, ...]}``."""
        used = self.variables
        slots = [_INDEX[v] for v in used]
        rows = sorted(
            (tuple(int(e[s]) for s in slots), from_fmpq(c)) for e, c in self._p.to_dict().items()
        )
        return {
            "vars": list(used),
            "terms": [{"coefficient": _frac_str(c), "exponents": list(e)} for e, c in rows],
        }

    @classmethod
    def from_record(cls, record: Mapping) -> "MultiPoly":
        variables = list(record["vars"])
        terms = {}
        for t in record["terms"]:
            terms[tuple(t["exponents"])] = Fraction(t["coefficient"])
        return cls.from_terms(terms, variables)

    def to_json(self) -> str:
        return json.dumps(self.to_record(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "MultiPoly":
        return cls.from_record(json.loads(text))


def _frac_str(c: Fraction) -> str:
    return f"{c.numerator}/{c.denominator}"


ZERO = MultiPoly(0)
ONE = MultiPoly(1)
Q = MultiPoly.gen("q")
ALPHA = MultiPoly.gen("alpha")
LAMBDA = MultiPoly.gen("lambda")
MU = MultiPoly.gen("mu")


def mpoly_arith(a: MultiPoly, b, op: str) -> MultiPoly:
    """Functional form of the ring operations: ``op`` in add, sub, mul, pow."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown operation {op!r}")


def q_order(p: MultiPoly) -> int:
    return p.q_order()


def q_degree(p: MultiPoly) -> int:
    return p.q_degree()


def q_coeff(p: MultiPoly, k: int) -> MultiPoly:
    return p.q_coeff(k)


@dataclass(frozen=True)
class QPolyView:
    """Dense-in-q view: ``coeffs[k]`` is the coefficient of q^k."""

    coeffs: tuple[MultiPoly, ...]

    @classmethod
    def of(cls, p: MultiPoly) -> "QPolyView":
        if p.is_zero():
            return cls(())
        buckets: dict[int, dict] = {}
        for e, c in p._p.to_dict().items():
            buckets.setdefault(e[0], {})[(0,) + e[1:]] = c
        deg = max(buckets)
        return cls(tuple(MultiPoly(_CTX.from_dict(buckets.get(k, {}))) for k in range(deg + 1)))

    def reassemble(self) -> MultiPoly:
        total = ZERO
        for k, c in enumerate(self.coeffs):
            if c:
                total = total + c.shift_q(k)
        return total

    def order(self) -> int:
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        raise ValueError("order of zero polynomial undefined")

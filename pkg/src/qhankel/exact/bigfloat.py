"""Arbitrary-precision binary floats carrying a rigorous absolute error bound.

A :class:`BigFloat` stands for an unknown real ``x`` with
``|x - man * 2**exp| <= err``.  Every operation rounds the stored value to the
working precision and widens ``err`` by worst-case propagation plus the
rounding it introduced, so the enclosure stays valid through any chain of
operations.  ``err`` is kept as a small dyadic rational rounded upward.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Mapping, Union

from mpmath.libmp import mpf_pi, round_floor

ERR_BITS = 30
DEFAULT_PREC = 128


def _round_up(x: Fraction) -> Fraction:
    """Smallest-ish dyadic >= x with at most ERR_BITS significant bits (x >= 0)."""
    if x <= 0:
        return Fraction(0)
    n, d = x.numerator, x.denominator
    e = n.bit_length() - d.bit_length() - ERR_BITS
    if e >= 0:
        m = -(-n // (d << e))
        return Fraction(m << e)
    m = -(-(n << -e) // d)
    return Fraction(m, 1 << -e)


def _dyadic(man: int, exp: int) -> Fraction:
    return Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)


def _mag_up(man: int, exp: int) -> Fraction:
    m = abs(man)
    k = m.bit_length() - ERR_BITS
    if k > 0:
        return _dyadic((m >> k) + 1, exp + k)
    return _dyadic(m, exp)


def _mag_down(man: int, exp: int) -> Fraction:
    m = abs(man)
    k = m.bit_length() - ERR_BITS
    if k > 0:
        return _dyadic(m >> k, exp + k)
    return _dyadic(m, exp)


class BigFloat:
    """Error-tracked binary float ``man * 2**exp`` +/- ``err``."""

    __slots__ = ("man", "exp", "err", "prec")

    def __init__(self, man: int, exp: int, err: Fraction = Fraction(0), prec: int = DEFAULT_PREC):
        self.prec = prec
        extra = Fraction(0)
        k = abs(man).bit_length() - prec
        if k > 0:
            # truncation toward zero; lost part is below one unit of the kept last bit
            man = man >> k if man >= 0 else -((-man) >> k)
            exp += k
            extra = _dyadic(1, exp)
        if man == 0:
            exp = 0
        self.man = man
        self.exp = exp
        self.err = _round_up(Fraction(err) + extra)

    # -- constructors ----------------------------------------------------

    @classmethod
    def exact(cls, n: int, prec: int = DEFAULT_PREC) -> "BigFloat":
        return cls(n, 0, Fraction(0), max(prec, abs(n).bit_length()))

    @classmethod
    def from_fraction(cls, x: Union[Fraction, int], prec: int = DEFAULT_PREC, err: Fraction = Fraction(0)) -> "BigFloat":
        x = Fraction(x)
        if x == 0:
            return cls(0, 0, err, prec)
        n, d = x.numerator, x.denominator
        e = n.bit_length() - d.bit_length() - prec - 2
        man = (n << -e) // d if e < 0 else n // (d << e)
        # floor division: residual in [0, 1) units of 2**e
        return cls(man, e, Fraction(err) + _dyadic(1, e), prec)

    @classmethod
    def sqrt_int(cls, n: int, prec: int = DEFAULT_PREC) -> "BigFloat":
        if n < 0:
            raise ValueError("square root of a negative integer")
        s = math.isqrt(n << (2 * prec))
        return cls(s, -prec, _dyadic(1, -prec), prec + n.bit_length())

    @classmethod
    def pi(cls, prec: int = DEFAULT_PREC) -> "BigFloat":
        _, man, exp, _ = mpf_pi(prec + 4, round_floor)
        return cls(int(man), int(exp), _dyadic(1, int(exp)), prec)

    # -- views -----------------------------------------------------------

    def midpoint(self) -> Fraction:
        return _dyadic(self.man, self.exp)

    def lower(self) -> Fraction:
        return self.midpoint() - self.err

    def upper(self) -> Fraction:
        return self.midpoint() + self.err

    def contains(self, x) -> bool:
        return abs(Fraction(x) - self.midpoint()) <= self.err

    def overlaps(self, other: "BigFloat") -> bool:
        """True when the two enclosures share a point."""
        return abs(self.midpoint() - other.midpoint()) <= self.err + other.err

    def certified_nonzero(self) -> bool:
        return self.man != 0 and _mag_down(self.man, self.exp) > self.err

    def certified_positive(self) -> bool:
        return self.man > 0 and self.certified_nonzero()

    def certified_negative(self) -> bool:
        return self.man < 0 and self.certified_nonzero()

    def abs_upper(self) -> Fraction:
        return _mag_up(self.man, self.exp) + self.err

    def __float__(self):
        if self.man == 0:
            return 0.0
        k = abs(self.man).bit_length() - 60
        if k > 0:
            return math.ldexp(float(self.man >> k if self.man > 0 else -((-self.man) >> k)), self.exp + k)
        return math.ldexp(float(self.man), self.exp)

    def log2_abs(self) -> tuple[float, float]:
        """``(log2|x|, bound)`` where every point of the enclosure has log2 within ``bound``.

        The bound includes a 1e-12 allowance for the double-precision evaluation.
        """
        if not self.certified_nonzero():
            raise ValueError("cannot take log of a value not certified nonzero")
        m = abs(self.man)
        k = m.bit_length() - 60
        top = m >> k if k > 0 else m
        value = math.log2(top) + (self.exp + max(k, 0))
        rel = float(_round_up(self.err / _mag_down(self.man, self.exp)))
        spread = -math.log2(1.0 - rel) if rel < 1 else math.inf
        return value, spread + 1e-12

    def to_decimal(self, digits: int = 20) -> str:
        x = self.midpoint()
        sign = "-" if x < 0 else ""
        x = abs(x)
        if x == 0:
            return "0"
        mag = math.floor(math.log10(float(x))) if float(x) > 0 else -int((x.denominator.bit_length() - x.numerator.bit_length()) * 0.30103)
        scale = digits - 1 - mag
        n = round(x * Fraction(10) ** scale)
        s = str(n)
        point = len(s) - scale
        if point <= 0:
            body = "0." + "0" * (-point) + s
        elif point >= len(s):
            body = s + "0" * (point - len(s))
        else:
            body = s[:point] + "." + s[point:]
        return sign + body

    def __repr__(self):
        return f"BigFloat({self.to_decimal(12)} +/- {float(self.err):.3g})"

    def to_record(self, digits: int = 20) -> dict:
        return {"value": self.to_decimal(digits), "err_bound": f"{float(self.err):.6e}"}

    # -- arithmetic ------------------------------------------------------

    def _lift(self, other) -> "BigFloat":
        if isinstance(other, BigFloat):
            return other
        if isinstance(other, int):
            return BigFloat.exact(other, self.prec)
        if isinstance(other, Fraction):
            return BigFloat.from_fraction(other, self.prec)
        return NotImplemented

    def __neg__(self):
        return BigFloat(-self.man, self.exp, self.err, self.prec)

    def __abs__(self):
        return BigFloat(abs(self.man), self.exp, self.err, self.prec)

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        e = min(self.exp, o.exp)
        man = (self.man << (self.exp - e)) + (o.man << (o.exp - e))
        return BigFloat(man, e, self.err + o.err, max(self.prec, o.prec))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        err = (_mag_up(self.man, self.exp) * o.err + _mag_up(o.man, o.exp) * self.err
               + self.err * o.err)
        return BigFloat(self.man * o.man, self.exp + o.exp, err, max(self.prec, o.prec))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        if not o.certified_nonzero():
            raise ZeroDivisionError("divisor not certified nonzero")
        prec = max(self.prec, o.prec)
        shift = prec + abs(o.man).bit_length() - abs(self.man).bit_length() + 2
        num = self.man << shift if shift >= 0 else self.man >> -shift
        lost = Fraction(0) if shift >= 0 else _dyadic(1, self.exp)
        man, rem = divmod(num, o.man)
        exp = self.exp - shift - o.exp
        quotient_mag = _mag_up(man, exp) + _dyadic(1, exp)
        denom_low = _mag_down(o.man, o.exp) - o.err
        err = (self.err + lost + quotient_mag * o.err) / denom_low + _dyadic(1, exp)
        return BigFloat(man, exp, err, prec)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = BigFloat.exact(1, self.prec)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result


def evaluate_poly(p, values: Mapping[str, Union[BigFloat, Fraction, int]], prec: int = DEFAULT_PREC) -> BigFloat:
    """Evaluate a MultiPoly at BigFloat / rational points with error propagation."""
    from .poly import VARS

    points = []
    for name in VARS:
        v = values.get(name)
        if v is None:
            points.append(None)
        elif isinstance(v, BigFloat):
            points.append(v)
        else:
            points.append(BigFloat.from_fraction(Fraction(v), prec))
    powers: list[dict[int, BigFloat]] = [{0: BigFloat.exact(1, prec)} for _ in VARS]

    def power(i: int, e: int) -> BigFloat:
        cache = powers[i]
        if e not in cache:
            if points[i] is None:
                raise KeyError(f"no value supplied for {VARS[i]}")
            cache[e] = power(i, e - 1) * points[i]
        return cache[e]

    total = BigFloat.exact(0, prec)
    for exps, c in sorted(p.terms().items()):
        term = BigFloat.from_fraction(c, prec)
        for i, e in enumerate(exps):
            if e:
                term = term * power(i, e)
        total = total + term
    return total

"""Exact scalars: rationals, Gaussian rationals Q(i), and quadratic extensions Q(i)(sqrt m).

Rationals are :class:`fractions.Fraction` throughout. :class:`GaussianRational`
is the base field for every structure matrix and every solver output;
:class:`QuadExtScalar` only appears in closed-form derivation families whose
parameters need a square root that does not exist in Q(i).
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import isqrt
from numbers import Rational as _RationalABC
from typing import Optional, Union

from .errors import MalformedScalar, RadicandMismatch

__all__ = [
    "GaussianRational",
    "QuadExtScalar",
    "Scalar",
    "as_gaussian",
    "format_scalar",
    "gr_arith",
    "gr_sqrt",
    "parse_scalar",
    "qe_arith",
    "rational_sqrt",
    "ZERO",
    "ONE",
    "I",
]

_ZERO = Fraction(0)


class GaussianRational:
    """An element ``re + im*i`` of Q(i) with exact :class:`~fractions.Fraction` parts."""

    # treated as immutable; no setter guard because construction is the hot path
    __slots__ = ("re", "im")

    def __init__(self, re: Union[int, Fraction, str] = 0, im: Union[int, Fraction, str] = 0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        # skips Fraction() coercion; callers guarantee Fraction inputs
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # -- conversions -------------------------------------------------------
    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def is_real(self) -> bool:
        return not self.im

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    # -- comparison --------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, _RationalABC)):
            return not self.im and self.re == other
        if isinstance(other, complex):
            return complex(self) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.re) if not self.im else hash((self.re, self.im))

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> "GaussianRational":
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self) -> "GaussianRational":
        return self

    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational._raw(a * c, _ZERO)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, _RationalABC)):
            if not other:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussianRational._raw(self.re / other, self.im / other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        c, d = other.re, other.im
        if not d:
            if not c:
                raise ZeroDivisionError("division by zero in Q(i)")
            return GaussianRational._raw(self.re / c, self.im / c)
        den = c * c + d * d
        a, b = self.re, self.im
        return GaussianRational._raw((a * c + b * d) / den, (b * c - a * d) / den)

    def __rtruediv__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return GaussianRational._raw(Fraction(other), _ZERO) / self
        return NotImplemented

    def __pow__(self, exponent: int) -> "GaussianRational":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return ONE / (self ** -exponent)
        result, base = ONE, self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result


ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def as_gaussian(value) -> GaussianRational:
    """Coerce ints, Fractions, scalar strings and exact QuadExt values to Q(i)."""
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, _RationalABC)):
        return GaussianRational._raw(Fraction(value), _ZERO)
    if isinstance(value, str):
        return parse_scalar(value)
    if isinstance(value, QuadExtScalar):
        if value.radical_coeff:
            raise ValueError(f"{value} is not an element of Q(i)")
        return value.base
    if isinstance(value, complex):
        raise TypeError("floating-point complex values are not exact; pass a string or ints")
    raise TypeError(f"cannot interpret {type(value).__name__} as a Gaussian rational")


def gr_arith(lhs: GaussianRational, rhs: GaussianRational, op: str) -> GaussianRational:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two Gaussian rationals."""
    lhs, rhs = as_gaussian(lhs), as_gaussian(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


def rational_sqrt(q: Fraction) -> Optional[Fraction]:
    """Non-negative rational square root of ``q``, or None if irrational."""
    q = Fraction(q)
    if q < 0:
        return None
    num, den = q.numerator, q.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def gr_sqrt(m) -> Optional[GaussianRational]:
    """Square root of ``m`` inside Q(i), or None when ``m`` is not a square there.

    Of the two roots the one with positive real part is returned (positive
    imaginary part when the real part vanishes).
    """
    m = as_gaussian(m)
    p, q = m.re, m.im
    if not q:
        if p >= 0:
            r = rational_sqrt(p)
            return None if r is None else GaussianRational._raw(r, _ZERO)
        r = rational_sqrt(-p)
        return None if r is None else GaussianRational._raw(_ZERO, r)
    modulus = rational_sqrt(p * p + q * q)
    if modulus is None:
        return None
    x = rational_sqrt((p + modulus) / 2)
    if x is None or not x:
        return None
    y = q / (2 * x)
    return GaussianRational._raw(x, y)


class QuadExtScalar:
    """``base + radical_coeff * sqrt(radicand)`` with base, coefficient and radicand in Q(i).

    When the radicand is a square in Q(i) the value collapses on construction:
    the root is folded into ``base`` and ``radical_coeff`` becomes zero.
    """

    __slots__ = ("base", "radical_coeff", "radicand")

    def __init__(self, base=0, radical_coeff=0, radicand=-1):
        base = as_gaussian(base)
        coeff = as_gaussian(radical_coeff)
        radicand = as_gaussian(radicand)
        if coeff:
            root = gr_sqrt(radicand)
            if root is not None:
                base = base + coeff * root
                coeff = ZERO
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "radical_coeff", coeff)
        object.__setattr__(self, "radicand", radicand)

    def __setattr__(self, name, value):
        raise AttributeError("QuadExtScalar is immutable")

    @classmethod
    def sqrt(cls, m) -> "QuadExtScalar":
        """The element ``sqrt(m)`` of Q(i)(sqrt m)."""
        return cls(0, 1, m)

    def is_rational(self) -> bool:
        return not self.radical_coeff

    def to_gaussian(self) -> GaussianRational:
        return as_gaussian(self)

    def conjugate_radical(self) -> "QuadExtScalar":
        """Galois conjugate: sqrt(m) -> -sqrt(m)."""
        return QuadExtScalar(self.base, -self.radical_coeff, self.radicand)

    def __repr__(self) -> str:
        return f"QuadExtScalar({self.base!s}, {self.radical_coeff!s}, radicand={self.radicand!s})"

    def __str__(self) -> str:
        if not self.radical_coeff:
            return format_scalar(self.base)
        return f"({self.base})+({self.radical_coeff})*sqrt({self.radicand})"

    def __complex__(self) -> complex:
        import cmath

        return complex(self.base) + complex(self.radical_coeff) * cmath.sqrt(complex(self.radicand))

    def __bool__(self) -> bool:
        return bool(self.base) or bool(self.radical_coeff)

    def _coerce(self, other) -> "QuadExtScalar":
        if isinstance(other, QuadExtScalar):
            if other.radicand != self.radicand and (self.radical_coeff or other.radical_coeff):
                raise RadicandMismatch(
                    f"cannot combine sqrt({self.radicand}) with sqrt({other.radicand})"
                )
            return other
        if isinstance(other, (GaussianRational, int, _RationalABC)):
            return QuadExtScalar._from_parts(as_gaussian(other), ZERO, self.radicand)
        raise TypeError(f"cannot combine QuadExtScalar with {type(other).__name__}")

    @classmethod
    def _from_parts(cls, base, coeff, radicand) -> "QuadExtScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "base", base)
        object.__setattr__(obj, "radical_coeff", coeff)
        object.__setattr__(obj, "radicand", radicand)
        return obj

    def _radicand_with(self, other: "QuadExtScalar") -> GaussianRational:
        return self.radicand if self.radical_coeff or not other.radical_coeff else other.radicand

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other)
        except (TypeError, RadicandMismatch):
            return NotImplemented if not isinstance(other, QuadExtScalar) else False
        return self.base == other.base and self.radical_coeff == other.radical_coeff

    def __hash__(self) -> int:
        if not self.radical_coeff:
            return hash(self.base)
        return hash((self.base, self.radical_coeff, self.radicand))

    def __neg__(self) -> "QuadExtScalar":
        return QuadExtScalar._from_parts(-self.base, -self.radical_coeff, self.radicand)

    def __add__(self, other):
        o = self._coerce(other)
        return QuadExtScalar._from_parts(
            self.base + o.base, self.radical_coeff + o.radical_coeff, self._radicand_with(o)
        )

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        m = self._radicand_with(o)
        a, b, c, d = self.base, self.radical_coeff, o.base, o.radical_coeff
        return QuadExtScalar._from_parts(a * c + b * d * m, a * d + b * c, m)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        m = self._radicand_with(o)
        c, d = o.base, o.radical_coeff
        den = c * c - d * d * m
        if not den:
            # c + d*sqrt(m) != 0 with zero norm only if m is a square, which collapses
            raise ZeroDivisionError("division by zero in quadratic extension")
        num = self * QuadExtScalar._from_parts(c, -d, m)
        return QuadExtScalar._from_parts(num.base / den, num.radical_coeff / den, m)

    def __rtruediv__(self, other):
        return self._coerce(other) / self


Scalar = Union[GaussianRational, QuadExtScalar]


def qe_arith(lhs, rhs, op: str) -> QuadExtScalar:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} in Q(i)(sqrt m)."""
    if not isinstance(lhs, QuadExtScalar):
        if not isinstance(rhs, QuadExtScalar):
            raise TypeError("qe_arith needs at least one QuadExtScalar operand")
        lhs = rhs._coerce(lhs)
    rhs = lhs._coerce(rhs)
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


# -- text grammar ------------------------------------------------------------

_RAT = r"-?\d+(?:/\d+)?"
_REAL_RE = re.compile(rf"^({_RAT})$")
_UNSIGNED = r"\d+(?:/\d+)?"
_COMPLEX_RE = re.compile(rf"^(?:({_RAT})([+-])({_UNSIGNED})|({_RAT}))i$")


def _parse_rational(token: str) -> Fraction:
    num, _, den = token.partition("/")
    if den and int(den) == 0:
        raise MalformedScalar(f"zero denominator in {token!r}")
    return Fraction(int(num), int(den) if den else 1)


def parse_scalar(text: str) -> GaussianRational:
    """Parse ``"3"``, ``"-1/2"``, ``"1/2+3/4i"`` or ``"-1i"`` into a Gaussian rational."""
    if not isinstance(text, str):
        raise MalformedScalar(f"scalar must be a string, got {type(text).__name__}")
    m = _REAL_RE.match(text)
    if m:
        return GaussianRational._raw(_parse_rational(m.group(1)), _ZERO)
    m = _COMPLEX_RE.match(text)
    if not m:
        raise MalformedScalar(f"malformed scalar {text!r}")
    re_tok, sign, im_tok = m.group(1, 2, 3) if m.group(1) else (None, None, m.group(4))
    im = _parse_rational(im_tok)
    if sign == "-":
        im = -im
    re_part = _parse_rational(re_tok) if re_tok is not None else _ZERO
    return GaussianRational._raw(re_part, im)


def _format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(value) -> str:
    """Inverse of :func:`parse_scalar`; exact values only."""
    value = as_gaussian(value)
    re_part, im_part = value.re, value.im
    if not im_part:
        return _format_rational(re_part)
    if not re_part:
        return f"{_format_rational(im_part)}i"
    sign = "+" if im_part > 0 else "-"
    return f"{_format_rational(re_part)}{sign}{_format_rational(abs(im_part))}i"

"""Exact arithmetic in an imaginary quadratic field and its ring of integers.

Elements are stored in the integral basis {1, w} where

    w = sqrt(-m)                 if m = 1, 2 (mod 4)
    w = (-1 + sqrt(-m)) / 2      if m = 3 (mod 4)

so that w satisfies w**2 + t*w + n = 0 with (t, n) = (0, m) or (1, (1 + m) / 4).
All scalars are ``fractions.Fraction``; nothing in this package uses floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from sympy import factorint

from bianchi.utils.exceptions import ExcludedFieldError, NotSquareFreeError

Rational = Fraction
Scalar = Union[int, Fraction]

EXCLUDED_M = (1, 3)


def validate_m(m: int) -> None:
    """Check that m defines a supported field Q(sqrt(-m)).

    Args:
        m: Candidate positive integer

    Raises:
        ExcludedFieldError: If m is 1 or 3 (excluded case)
        NotSquareFreeError: If m is not a square-free positive integer
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise NotSquareFreeError(f"m={m!r} is not a square-free positive integer")
    if m in EXCLUDED_M:
        raise ExcludedFieldError(f"m={m} is an excluded case (the ring has units other than +-1)")
    if any(exponent > 1 for exponent in factorint(m).values()):
        raise NotSquareFreeError(f"m={m} is not square-free")


def discriminant_of(m: int) -> int:
    """Discriminant of Q(sqrt(-m)) for square-free m."""
    return -m if m % 4 == 3 else -4 * m


def fields_up_to(max_abs_discriminant: int) -> list[int]:
    """Supported m with |discriminant| <= the bound, ordered by |discriminant|.

    Examples:
        >>> fields_up_to(24)
        [7, 2, 11, 15, 19, 5, 23, 6]
    """
    fields = []
    for m in range(2, max(max_abs_discriminant, 0) + 1):
        if m in EXCLUDED_M or -discriminant_of(m) > max_abs_discriminant:
            continue
        if all(exponent == 1 for exponent in factorint(m).values()):
            fields.append(m)
    return sorted(fields, key=lambda m: (-discriminant_of(m), m))


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Return the exact square root of a nonnegative rational, or None.

    Examples:
        >>> rational_sqrt(Fraction(9, 4))
        Fraction(3, 2)
        >>> rational_sqrt(Fraction(2)) is None
        True
    """
    q = Fraction(q)
    if q < 0:
        return None
    num_root = math.isqrt(q.numerator)
    den_root = math.isqrt(q.denominator)
    if num_root * num_root != q.numerator or den_root * den_root != q.denominator:
        return None
    return Fraction(num_root, den_root)


def sqrt_upper_bound(q: Fraction) -> Fraction:
    """Rational number that is at least sqrt(q), for q >= 0."""
    q = Fraction(q)
    if q <= 0:
        return Fraction(0)
    # sqrt(p/d) = sqrt(p*d)/d
    return Fraction(math.isqrt(q.numerator * q.denominator) + 1, q.denominator)


def render_rational(q: Scalar) -> str:
    """Render a rational as "p/q" (or "p" for integers)."""
    return str(Fraction(q))


def parse_rational(text: str) -> Fraction:
    """Parse the output of :func:`render_rational`."""
    return Fraction(text.strip())


@dataclass(frozen=True, slots=True)
class FieldCtx:
    """Context of the field K = Q(sqrt(-m)).

    Attributes:
        m: Square-free positive integer other than 1 and 3
    """
    m: int

    def __post_init__(self) -> None:
        validate_m(self.m)

    @property
    def three_mod_four(self) -> bool:
        """True when m = 3 (mod 4), i.e. w is the half-integral generator."""
        return self.m % 4 == 3

    @property
    def discriminant(self) -> int:
        return discriminant_of(self.m)

    @property
    def trace_omega(self) -> int:
        """t in w**2 + t*w + n = 0 (minus the trace of w)."""
        return 1 if self.three_mod_four else 0

    @property
    def norm_omega(self) -> int:
        """n in w**2 + t*w + n = 0 (the norm of w)."""
        return (1 + self.m) // 4 if self.three_mod_four else self.m

    @property
    def imag_scale(self) -> Fraction:
        """Coefficient of sqrt(-m) in w."""
        return Fraction(1, 2) if self.three_mod_four else Fraction(1)

    def integer(self, a: int = 0, b: int = 0) -> AlgInt:
        """Build the algebraic integer a + b*w."""
        return AlgInt(a, b, self)

    def element(self, x: Scalar = 0, y: Scalar = 0) -> FieldElem:
        """Build the field element x + y*w."""
        return FieldElem(Fraction(x), Fraction(y), self)

    @property
    def zero(self) -> AlgInt:
        return AlgInt(0, 0, self)

    @property
    def one(self) -> AlgInt:
        return AlgInt(1, 0, self)

    @property
    def omega(self) -> AlgInt:
        return AlgInt(0, 1, self)

    def from_coords(self, x_re: Scalar, y_im: Scalar) -> FieldElem:
        """Inverse of :func:`coords`: the element x_re + y_im*sqrt(-m)."""
        y = Fraction(y_im) / self.imag_scale
        x = Fraction(x_re) + self.trace_omega * y / 2
        return FieldElem(x, y, self)

    def parse(self, text: str) -> FieldElem:
        """Parse the canonical rendering "x + y*w"."""
        head, sep, tail = text.partition(" + ")
        if not sep or not tail.endswith("*w"):
            raise ValueError(f"Not a field element rendering: {text!r}")
        return FieldElem(parse_rational(head), parse_rational(tail[:-2]), self)


class _QuadraticNumber:
    """Arithmetic shared by :class:`AlgInt` and :class:`FieldElem`.

    Subclasses expose the basis coefficients through ``_parts`` and the
    field through ``ctx``.
    """

    __slots__ = ()

    ctx: FieldCtx

    def _parts(self) -> tuple[Scalar, Scalar]:
        raise NotImplementedError

    def _build(self, x: Scalar, y: Scalar, integral: bool) -> AlgInt | FieldElem:
        if integral:
            return AlgInt(int(x), int(y), self.ctx)
        return FieldElem(Fraction(x), Fraction(y), self.ctx)

    def _coerce(self, other: object) -> tuple[Scalar, Scalar, bool] | None:
        if isinstance(other, _QuadraticNumber):
            if other.ctx != self.ctx:
                raise ValueError(f"Mixing elements of Q(sqrt(-{self.ctx.m})) and Q(sqrt(-{other.ctx.m}))")
            x, y = other._parts()
            return x, y, isinstance(other, AlgInt)
        if isinstance(other, bool):
            return None
        if isinstance(other, int):
            return other, 0, True
        if isinstance(other, Fraction):
            return other, 0, False
        return None

    def __add__(self, other: object) -> AlgInt | FieldElem:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        x2, y2, integral = coerced
        x1, y1 = self._parts()
        return self._build(x1 + x2, y1 + y2, integral and isinstance(self, AlgInt))

    __radd__ = __add__

    def __neg__(self) -> AlgInt | FieldElem:
        x, y = self._parts()
        return self._build(-x, -y, isinstance(self, AlgInt))

    def __sub__(self, other: object) -> AlgInt | FieldElem:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        x2, y2, integral = coerced
        x1, y1 = self._parts()
        return self._build(x1 - x2, y1 - y2, integral and isinstance(self, AlgInt))

    def __rsub__(self, other: object) -> AlgInt | FieldElem:
        return (-self).__add__(other)

    def __mul__(self, other: object) -> AlgInt | FieldElem:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        c, d, integral = coerced
        a, b = self._parts()
        t, n = self.ctx.trace_omega, self.ctx.norm_omega
        bd = b * d
        return self._build(a * c - n * bd, a * d + b * c - t * bd, integral and isinstance(self, AlgInt))

    __rmul__ = __mul__

    def conj(self) -> AlgInt | FieldElem:
        """Complex conjugate."""
        a, b = self._parts()
        return self._build(a - self.ctx.trace_omega * b, -b, isinstance(self, AlgInt))

    def norm(self) -> Fraction:
        """Field norm, equal to the squared absolute value."""
        a, b = self._parts()
        return Fraction(a * a - self.ctx.trace_omega * a * b + self.ctx.norm_omega * b * b)

    def __truediv__(self, other: object) -> FieldElem:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        c, d, _ = coerced
        divisor = FieldElem(Fraction(c), Fraction(d), self.ctx)
        denominator = divisor.norm()
        if denominator == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(-m))")
        x, y = (self * divisor.conj())._parts()
        return FieldElem(Fraction(x) / denominator, Fraction(y) / denominator, self.ctx)

    def __rtruediv__(self, other: object) -> FieldElem:
        coerced = self._coerce(other)
        if coerced is None:
            return NotImplemented
        x, y, _ = coerced
        return FieldElem(Fraction(x), Fraction(y), self.ctx) / self

    def is_zero(self) -> bool:
        x, y = self._parts()
        return x == 0 and y == 0

    def coords(self) -> tuple[Fraction, Fraction]:
        """Real part and imaginary part divided by sqrt(m)."""
        x, y = self._parts()
        y_im = Fraction(y) * self.ctx.imag_scale
        return Fraction(x) - self.ctx.trace_omega * Fraction(y) / 2, y_im

    def __str__(self) -> str:
        x, y = self._parts()
        return f"{render_rational(x)} + {render_rational(y)}*w"


@dataclass(frozen=True, slots=True)
class AlgInt(_QuadraticNumber):
    """Algebraic integer a + b*w.

    Attributes:
        a: Coefficient of 1
        b: Coefficient of w
        ctx: Field context
    """
    a: int
    b: int
    ctx: FieldCtx

    def _parts(self) -> tuple[int, int]:
        return self.a, self.b

    def as_elem(self) -> FieldElem:
        """The same number as a :class:`FieldElem`."""
        return FieldElem(Fraction(self.a), Fraction(self.b), self.ctx)

    @property
    def key(self) -> tuple[int, int]:
        return (self.a, self.b)


@dataclass(frozen=True, slots=True)
class FieldElem(_QuadraticNumber):
    """Field element x + y*w with rational coefficients.

    Attributes:
        x: Coefficient of 1
        y: Coefficient of w
        ctx: Field context
    """
    x: Fraction
    y: Fraction
    ctx: FieldCtx

    def _parts(self) -> tuple[Fraction, Fraction]:
        return self.x, self.y

    def is_integral(self) -> bool:
        """True when both basis coefficients are integers."""
        return self.x.denominator == 1 and self.y.denominator == 1

    def to_algint(self) -> AlgInt:
        """Convert to :class:`AlgInt`.

        Raises:
            ValueError: If the element is not integral
        """
        if not self.is_integral():
            raise ValueError(f"{self} is not an algebraic integer")
        return AlgInt(self.x.numerator, self.y.numerator, self.ctx)

    @property
    def key(self) -> tuple[Fraction, Fraction]:
        return (self.x, self.y)


def as_elem(value: AlgInt | FieldElem) -> FieldElem:
    """Promote an algebraic integer to a field element (no-op for FieldElem)."""
    return value.as_elem() if isinstance(value, AlgInt) else value


def norm(e: AlgInt | FieldElem) -> Fraction:
    """Squared absolute value |e|**2 of a field element."""
    return e.norm()


def coords(e: AlgInt | FieldElem) -> tuple[Fraction, Fraction]:
    """Coordinates (x_re, y_im) with e = x_re + y_im*sqrt(-m)."""
    return e.coords()


def distance_sq(z1: AlgInt | FieldElem, z2: AlgInt | FieldElem) -> Fraction:
    """Squared Euclidean distance |z1 - z2|**2."""
    return (z1 - z2).norm()

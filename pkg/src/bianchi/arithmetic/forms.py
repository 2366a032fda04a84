"""Binary quadratic forms and the ideal class group.

Forms a*x**2 + b*x*y + c*y**2 of negative discriminant are kept in reduced
shape. Composition follows the classical Dirichlet algorithm and the class
group of O is realised on the reduced primitive forms of the field
discriminant.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from functools import lru_cache

from sympy.core.intfunc import igcdex

from bianchi.arithmetic.field import AlgInt, FieldCtx, FieldElem
from bianchi.arithmetic.ideals import IdealBasis, cusp_ideal
from bianchi.core.models import AbelianGroup

logger = logging.getLogger(__name__)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, y, g = igcdex(a, b)
    return int(x), int(y), int(g)


@dataclass(frozen=True)
class BinaryQuadraticForm:
    """Positive definite form (a, b, c).

    Attributes:
        a: Coefficient of x**2
        b: Coefficient of x*y
        c: Coefficient of y**2
    """
    a: int
    b: int
    c: int

    @classmethod
    def from_ab(cls, a: int, b: int, discriminant: int) -> BinaryQuadraticForm:
        """Build the form with leading coefficients (a, b) and the given discriminant.

        Raises:
            ValueError: If (b**2 - discriminant) is not divisible by 4a
        """
        numerator = b * b - discriminant
        if numerator % (4 * a):
            raise ValueError(f"No form ({a}, {b}, *) of discriminant {discriminant}")
        return cls(a, b, numerator // (4 * a))

    @classmethod
    def identity(cls, discriminant: int) -> BinaryQuadraticForm:
        """Principal form of the discriminant."""
        return cls.from_ab(1, discriminant % 2, discriminant)

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return math.gcd(self.a, self.b, self.c) == 1

    def is_reduced(self) -> bool:
        """|b| <= a <= c with b >= 0 whenever |b| = a or a = c."""
        a, b, c = self.a, self.b, self.c
        if not (-a < b <= a and a <= c):
            return False
        return not (a == c and b < 0)

    def normalized(self) -> BinaryQuadraticForm:
        """Equivalent form with -a < b <= a."""
        a, b, c = self.a, self.b, self.c
        if -a < b <= a:
            return self
        r = (a - b) // (2 * a)
        return BinaryQuadraticForm(a, b + 2 * r * a, a * r * r + b * r + c)

    def reduced(self) -> BinaryQuadraticForm:
        """The unique reduced form properly equivalent to this one."""
        if self.discriminant >= 0 or self.a <= 0:
            raise ValueError(f"{self} is not positive definite")
        start = self.normalized()
        a, b, c = start.a, start.b, start.c
        while a > c or (a == c and b < 0):
            s = (c + b) // (2 * c)
            a, b, c = c, -b + 2 * s * c, c * s * s - b * s + a
        return BinaryQuadraticForm(a, b, c).normalized()

    def inverse(self) -> BinaryQuadraticForm:
        return BinaryQuadraticForm(self.a, -self.b, self.c).reduced()

    def compose(self, other: BinaryQuadraticForm) -> BinaryQuadraticForm:
        """Gaussian composition, returned reduced.

        Raises:
            ValueError: If the discriminants differ
        """
        if self.discriminant != other.discriminant:
            raise ValueError(f"Cannot compose forms of discriminants {self.discriminant} and {other.discriminant}")
        f1, f2 = self.reduced(), other.reduced()
        if f1.a > f2.a:
            f1, f2 = f2, f1
        a1, b1 = f1.a, f1.b
        a2, b2, c2 = f2.a, f2.b, f2.c
        s = (b1 + b2) // 2
        n = b2 - s

        if a2 % a1 == 0:
            y1, d = 0, a1
        else:
            u, _, d = _xgcd(a2, a1)
            y1 = u
        if s % d == 0:
            x2, y2, d1 = 0, -1, d
        else:
            x2, y2, d1 = _xgcd(s, d)
            y2 = -y2

        v1, v2 = a1 // d1, a2 // d1
        r = (y1 * y2 * n - x2 * c2) % v1
        b3 = b2 + 2 * v2 * r
        a3 = v1 * v2
        return BinaryQuadraticForm.from_ab(a3, b3, self.discriminant).reduced()

    def __mul__(self, other: BinaryQuadraticForm) -> BinaryQuadraticForm:
        return self.compose(other)

    def square(self) -> BinaryQuadraticForm:
        return self.compose(self)

    def __pow__(self, exponent: int) -> BinaryQuadraticForm:
        base = self.reduced() if exponent >= 0 else self.inverse()
        result = BinaryQuadraticForm.identity(self.discriminant)
        k = abs(exponent)
        while k:
            if k & 1:
                result = result.compose(base)
            base = base.square()
            k >>= 1
        return result

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def reduced_forms(discriminant: int) -> list[BinaryQuadraticForm]:
    """All reduced primitive forms of a negative discriminant, sorted by (a, b).

    Examples:
        discriminant -20: [(1, 0, 5), (2, 2, 3)]
    """
    if discriminant >= 0 or discriminant % 4 not in (0, 1):
        raise ValueError(f"Not a negative discriminant: {discriminant}")
    forms = []
    a = 1
    while 3 * a * a <= -discriminant:
        for b in range(-a + 1, a + 1):
            if (b - discriminant) % 2:
                continue
            numerator = b * b - discriminant
            if numerator % (4 * a):
                continue
            form = BinaryQuadraticForm(a, b, numerator // (4 * a))
            if form.is_reduced() and form.is_primitive():
                forms.append(form)
        a += 1
    return forms


@lru_cache(maxsize=None)
def _class_data(discriminant: int) -> tuple[tuple[BinaryQuadraticForm, ...], AbelianGroup]:
    forms = tuple(reduced_forms(discriminant))
    index = {form: i for i, form in enumerate(forms)}
    group = AbelianGroup.from_multiplication_table(
        len(forms), lambda i, j: index[forms[i].compose(forms[j])]
    )
    logger.debug(f"Class group of discriminant {discriminant}: {group.render_cyclic()} from {len(forms)} forms")
    return forms, group


def class_group(ctx: FieldCtx) -> AbelianGroup:
    """Ideal class group of O as an abelian group."""
    return _class_data(ctx.discriminant)[1]


def class_number(ctx: FieldCtx) -> int:
    return len(_class_data(ctx.discriminant)[0])


def ideal_form(ideal: IdealBasis) -> BinaryQuadraticForm:
    """Reduced form attached to the class of an ideal.

    The ideal rZ + (q + p*w)Z is scaled by 1/p to aZ + (k + w)Z and written
    as aZ + ((-b + sqrt(D))/2)Z, giving the form (a, b, c).
    """
    ctx = ideal.ctx
    p, q, r = ideal.w_coeff, ideal.offset, ideal.modulus
    if r % p or q % p:
        raise ValueError(f"Hermite basis ({p}, {q}, {r}) is not an O-ideal")
    a, k = r // p, q // p
    b = ctx.trace_omega - 2 * k
    return BinaryQuadraticForm.from_ab(a, b, ctx.discriminant).reduced()


def ideal_class_of_cusp(z: AlgInt | FieldElem) -> BinaryQuadraticForm:
    """Class of the ideal (lam, mu) for the cusp z = lam/mu.

    Multiplying by the common denominator n gives the ideal (n*z, n) of the
    same class.

    Examples:
        m=5: the cusp (1 + sqrt(-5))/2 lies in the class of (2, 2, 3).
    """
    return ideal_form(cusp_ideal(z))


def is_principal_cusp(z: AlgInt | FieldElem) -> bool:
    """True when the cusp z is Gamma-equivalent to infinity."""
    form = ideal_class_of_cusp(z)
    return form == BinaryQuadraticForm.identity(form.discriminant)

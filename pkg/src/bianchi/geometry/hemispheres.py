"""Exact geometry of hemispheres over the complex plane.

A hemisphere S(mu, lam) has center lam/mu and squared radius 1/|mu|**2. Points
of upper half-space are stored as (z, zeta**2). Plane coordinates are the
pair (x, y) with z = x + y*sqrt(-m), see :func:`bianchi.arithmetic.field.coords`.

Radii are never square-rooted. Comparisons of sums of square roots are
decided by squaring both sides under explicit sign guards.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from bianchi.arithmetic.field import AlgInt, FieldCtx, FieldElem, as_elem, distance_sq
from bianchi.arithmetic.ideals import is_unimodular
from bianchi.utils.exceptions import GeometryError


def compare_sqrt_sum(x: Fraction, y: Fraction, z: Fraction) -> int:
    """Sign of sqrt(x) + sqrt(y) - sqrt(z) for nonnegative rationals.

    Examples:
        >>> compare_sqrt_sum(Fraction(1), Fraction(1), Fraction(4))
        0
        >>> compare_sqrt_sum(Fraction(1), Fraction(1), Fraction(5))
        -1
    """
    slack = z - x - y
    if slack < 0:
        return 1
    gap = 4 * x * y - slack * slack
    return (gap > 0) - (gap < 0)


@dataclass(frozen=True)
class PointH:
    """Point (z, zeta) of upper half-space, zeta stored squared.

    A squared height of zero encodes a point of the complex plane, which is
    how singular points enter the geometry.
    """
    z: FieldElem
    sq_height: Fraction

    def __post_init__(self) -> None:
        if self.sq_height < 0:
            raise ValueError(f"Negative squared height {self.sq_height}")

    @property
    def key(self) -> tuple[Fraction, Fraction, Fraction]:
        return (*self.z.key, self.sq_height)

    @property
    def on_boundary(self) -> bool:
        return self.sq_height == 0

    def translate(self, t: AlgInt | FieldElem) -> PointH:
        return PointH(as_elem(self.z + t), self.sq_height)


@dataclass(frozen=True)
class Hemisphere:
    """Hemisphere S(mu, lam) of a unimodular pair.

    Attributes:
        mu: Nonzero denominator, |mu|**2 is the inverse squared radius
        lam: Numerator, the center is lam/mu
    """
    mu: AlgInt
    lam: AlgInt

    def __post_init__(self) -> None:
        if self.mu.is_zero():
            raise ValueError("Hemisphere with mu = 0")

    @classmethod
    def from_pair(cls, mu: AlgInt, lam: AlgInt, *, check: bool = True) -> Hemisphere:
        """Build S(mu, lam) with the lexicographically least sign of the pair.

        Raises:
            GeometryError: If ``check`` is set and the pair is not unimodular
        """
        if check and not is_unimodular(mu, lam):
            raise GeometryError(f"({mu}, {lam}) is not a unimodular pair")
        if (-mu.a, -mu.b, -lam.a, -lam.b) < (mu.a, mu.b, lam.a, lam.b):
            mu, lam = -mu, -lam
        return cls(mu, lam)

    @property
    def ctx(self) -> FieldCtx:
        return self.mu.ctx

    @cached_property
    def center(self) -> FieldElem:
        return as_elem(self.lam / self.mu)

    @property
    def norm_mu(self) -> int:
        return int(self.mu.norm())

    @cached_property
    def sq_radius(self) -> Fraction:
        return 1 / self.mu.norm()

    @cached_property
    def key(self) -> tuple[Fraction, Fraction, Fraction]:
        """Geometric identity: (center, squared radius)."""
        return (*self.center.key, self.sq_radius)

    def translate(self, t: AlgInt) -> Hemisphere:
        """The hemisphere S(mu, lam + mu*t) with center moved by t."""
        return Hemisphere(self.mu, self.lam + self.mu * t)

    def sq_height_at(self, z: AlgInt | FieldElem) -> Fraction:
        """Squared height of the hemisphere over z (negative outside its disk)."""
        return self.sq_radius - distance_sq(z, self.center)

    def __str__(self) -> str:
        return f"S({self.mu}, {self.lam})"


@dataclass(frozen=True)
class PlaneLine:
    """Line a*x + b*y = c in plane coordinates.

    The first nonzero of (a, b) is 1, so equal lines have equal triples.
    """
    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def normalized(cls, a: Fraction, b: Fraction, c: Fraction) -> PlaneLine:
        a, b, c = Fraction(a), Fraction(b), Fraction(c)
        if a == 0 and b == 0:
            raise GeometryError("Degenerate line 0*x + 0*y = c")
        lead = a if a != 0 else b
        return cls(a / lead, b / lead, c / lead)

    def value(self, x: Fraction, y: Fraction) -> Fraction:
        return self.a * x + self.b * y - self.c

    def contains(self, z: AlgInt | FieldElem) -> bool:
        return self.value(*z.coords()) == 0


def strictly_below_at(z: AlgInt | FieldElem, lower: Hemisphere, upper: Hemisphere) -> bool:
    """True iff ``lower`` is strictly below ``upper`` over z."""
    return lower.sq_height_at(z) < upper.sq_height_at(z)


def point_strictly_below(p: PointH, h: Hemisphere) -> bool:
    """True iff |p.z - center|**2 + p.sq_height < sq_radius."""
    return distance_sq(p.z, h.center) + p.sq_height < h.sq_radius


def everywhere_below(h1: Hemisphere, h2: Hemisphere) -> bool:
    """Decide |c1 - c2| <= r2 - r1, i.e. h1 lies nowhere above h2.

    Examples:
        A hemisphere is everywhere below itself.
    """
    a = distance_sq(h1.center, h2.center)
    b, c = h2.sq_radius, h1.sq_radius
    slack = b - a - c
    return slack >= 0 and slack * slack >= 4 * a * c


def touches(h1: Hemisphere, h2: Hemisphere) -> bool:
    """True iff the two hemispheres meet in upper half-space or on its boundary."""
    a = distance_sq(h1.center, h2.center)
    r1, r2 = h1.sq_radius, h2.sq_radius
    small, large = min(r1, r2), max(r1, r2)
    return compare_sqrt_sum(r1, r2, a) >= 0 and compare_sqrt_sum(a, small, large) >= 0


def overlaps(h1: Hemisphere, h2: Hemisphere) -> bool:
    """True iff the closed disks under the two hemispheres intersect."""
    return compare_sqrt_sum(h1.sq_radius, h2.sq_radius, distance_sq(h1.center, h2.center)) >= 0


def agree_coefficients(h1: Hemisphere, h2: Hemisphere) -> tuple[Fraction, Fraction, Fraction]:
    """Unnormalized (a, b, c) with a*x + b*y - c >= 0 exactly where h1 is not below h2."""
    m = h1.ctx.m
    p1, q1 = h1.center.coords()
    p2, q2 = h2.center.coords()
    level1 = h1.center.norm() - h1.sq_radius
    level2 = h2.center.norm() - h2.sq_radius
    return 2 * (p1 - p2), 2 * m * (q1 - q2), level1 - level2


def agree_line(h1: Hemisphere, h2: Hemisphere) -> PlaneLine:
    """The line of points over which neither hemisphere is strictly below the other.

    Raises:
        GeometryError: If the hemispheres are concentric
    """
    a, b, c = agree_coefficients(h2, h1)
    if a == 0 and b == 0:
        raise GeometryError(f"No agree-line for concentric hemispheres {h1} and {h2}")
    return PlaneLine.normalized(a, b, c)


def intersect_lines(l1: PlaneLine, l2: PlaneLine) -> tuple[Fraction, Fraction] | None:
    """Unique intersection point of two lines, None when parallel or equal."""
    det = l1.a * l2.b - l1.b * l2.a
    if det == 0:
        return None
    x = (l1.c * l2.b - l1.b * l2.c) / det
    y = (l1.a * l2.c - l1.c * l2.a) / det
    return x, y


def lift(z: AlgInt | FieldElem, h: Hemisphere) -> PointH | None:
    """The point of h above z, None outside the disk of h."""
    sq_height = h.sq_height_at(z)
    if sq_height < 0:
        return None
    return PointH(as_elem(z), sq_height)

"""Lattice and ideal arithmetic of the ring of integers.

Covers the fundamental rectangle D0 of the translation group, enumeration of
ring elements in disks and on circles, norms, unimodularity of pairs and the
singular points of the field.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from fractions import Fraction

from bianchi.arithmetic.field import (
    AlgInt,
    FieldCtx,
    FieldElem,
    as_elem,
    rational_sqrt,
    sqrt_upper_bound,
)
from bianchi.core.normal_forms import hermite_normal_form_2

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IdealBasis:
    """Hermite basis of an O-ideal.

    The ideal is ``modulus * Z + (offset + w_coeff * w) * Z``, which is the
    upper triangular matrix ((w_coeff, offset), (0, modulus)) in the
    coordinate order (w, 1).

    Attributes:
        w_coeff: Positive w-coefficient of the second generator
        offset: Integer part of the second generator, 0 <= offset < modulus
        modulus: Positive generator of the ideal's intersection with Z
        ctx: Field context
    """
    w_coeff: int
    offset: int
    modulus: int
    ctx: FieldCtx

    @property
    def norm(self) -> int:
        """Index of the ideal in O."""
        return self.w_coeff * self.modulus

    @property
    def is_unit_ideal(self) -> bool:
        return self.norm == 1

    def generators(self) -> tuple[AlgInt, AlgInt]:
        return AlgInt(self.modulus, 0, self.ctx), AlgInt(self.offset, self.w_coeff, self.ctx)

    def contains(self, element: AlgInt) -> bool:
        """Membership test against the Hermite basis."""
        if element.b % self.w_coeff:
            return False
        return (element.a - (element.b // self.w_coeff) * self.offset) % self.modulus == 0


def ideal_from_generators(generators: Iterable[AlgInt], ctx: FieldCtx) -> IdealBasis:
    """Hermite basis of the ideal generated by ``generators``.

    Raises:
        ValueError: If all generators are zero
    """
    vectors: list[tuple[int, int]] = []
    for g in generators:
        for element in (g, g * ctx.omega):
            vectors.append((element.b, element.a))
    w_coeff, offset, modulus = hermite_normal_form_2(vectors)
    if w_coeff == 0 or modulus == 0:
        raise ValueError("The zero ideal has no Hermite basis")
    return IdealBasis(w_coeff, offset, modulus, ctx)


def _cusp_denominator(z: FieldElem) -> int:
    return math.lcm(Fraction(z.x).denominator, Fraction(z.y).denominator)


def cusp_ideal(z: AlgInt | FieldElem) -> IdealBasis:
    """The ideal (n*z, n), n the least positive integer with n*z in O."""
    z = as_elem(z)
    n = _cusp_denominator(z)
    return ideal_from_generators(((z * n).to_algint(), AlgInt(n, 0, z.ctx)), z.ctx)


def cusp_scale(z: AlgInt | FieldElem) -> Fraction:
    """|mu|**2 / N((lam, mu)) for the cusp z = lam/mu.

    The value does not depend on the pair (lam, mu) chosen for z.

    Examples:
        Ring elements have scale 1; m=5: the cusp (1 + sqrt(-5))/2 has scale 2.
    """
    z = as_elem(z)
    return Fraction(_cusp_denominator(z) ** 2, cusp_ideal(z).norm)


def is_unimodular(mu: AlgInt, lam: AlgInt, ctx: FieldCtx | None = None) -> bool:
    """Decide whether mu*O + lam*O = O.

    Examples:
        m=5: (2, 1 + sqrt(-5)) generates an ideal of norm 2, so the pair is
        not unimodular.

    Raises:
        ValueError: If both arguments are zero
    """
    if mu.is_zero() and lam.is_zero():
        raise ValueError("(0, 0) is not a pair of the projective line")
    return ideal_from_generators((mu, lam), ctx or mu.ctx).is_unit_ideal


# -- disks and circles --------------------------------------------------------


def _row_range(center_y: Fraction, reach: Fraction, step: Fraction) -> range:
    return range(math.floor((center_y - reach) / step), math.ceil((center_y + reach) / step) + 1)


def lattice_points_in_disk(
    center: AlgInt | FieldElem, sq_radius: Fraction, *, strict: bool = False
) -> Iterator[AlgInt]:
    """Ring elements t with |t - center|**2 <= sq_radius (< when ``strict``).

    Elements are produced ordered by their w-coefficient, then by the integer
    coefficient.
    """
    ctx = center.ctx
    sq_radius = Fraction(sq_radius)
    if sq_radius < 0 or (strict and sq_radius == 0):
        return
    cx, cy = center.coords()
    ox, oy = ctx.omega.coords()
    m = ctx.m
    for s in _row_range(cy, sqrt_upper_bound(sq_radius / m), oy):
        rest = sq_radius - m * (s * oy - cy) ** 2
        if rest < 0:
            continue
        base = cx - s * ox
        reach = sqrt_upper_bound(rest)
        for q in range(math.floor(base - reach), math.ceil(base + reach) + 1):
            gap = (q - base) ** 2
            if gap < rest or (not strict and gap == rest):
                yield AlgInt(q, s, ctx)


def lattice_points_on_circle(center: AlgInt | FieldElem, sq_radius: Fraction) -> Iterator[AlgInt]:
    """Ring elements t with |t - center|**2 == sq_radius exactly."""
    ctx = center.ctx
    sq_radius = Fraction(sq_radius)
    if sq_radius < 0:
        return
    cx, cy = center.coords()
    ox, oy = ctx.omega.coords()
    m = ctx.m
    for s in _row_range(cy, sqrt_upper_bound(sq_radius / m), oy):
        rest = sq_radius - m * (s * oy - cy) ** 2
        root = rational_sqrt(rest)
        if root is None:
            continue
        base = cx - s * ox
        for q in sorted({base - root, base + root}):
            if q.denominator == 1:
                yield AlgInt(q.numerator, s, ctx)


def elements_of_norm(n: int, ctx: FieldCtx) -> list[AlgInt]:
    """All mu with norm(mu) = n, one per pair {mu, -mu}, sorted by (a, b).

    Examples:
        m=7, n=2: [w, 1 + w]
    """
    if n < 1:
        raise ValueError(f"Norm must be positive, got {n}")
    found = [mu for mu in lattice_points_on_circle(ctx.zero, Fraction(n)) if (mu.a, mu.b) > (0, 0)]
    return sorted(found, key=lambda mu: (mu.a, mu.b))


def norm_values(ctx: FieldCtx, start: int = 1) -> Iterator[int]:
    """Ascending stream of the values of the norm on nonzero ring elements."""
    n = max(start, 1)
    while True:
        if next(lattice_points_on_circle(ctx.zero, Fraction(n)), None) is not None:
            yield n
        n += 1


# -- the fundamental rectangle ------------------------------------------------


def rectangle_bounds(ctx: FieldCtx) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    """D0 as (x_lo, x_hi, y_lo, y_hi) in (real, imaginary / sqrt(m)) coordinates."""
    if ctx.three_mod_four:
        return Fraction(-1, 2), Fraction(1, 2), Fraction(0), Fraction(1, 2)
    return Fraction(0), Fraction(1), Fraction(0), Fraction(1)


def rectangle_area(ctx: FieldCtx) -> Fraction:
    """Area of D0 measured in coordinates (the real area divided by sqrt(m))."""
    x_lo, x_hi, y_lo, y_hi = rectangle_bounds(ctx)
    return (x_hi - x_lo) * (y_hi - y_lo)


def rectangle_center(ctx: FieldCtx) -> FieldElem:
    x_lo, x_hi, y_lo, y_hi = rectangle_bounds(ctx)
    return ctx.from_coords((x_lo + x_hi) / 2, (y_lo + y_hi) / 2)


def rectangle_sq_half_diagonal(ctx: FieldCtx) -> Fraction:
    """Squared distance from the center of D0 to its corners."""
    x_lo, x_hi, y_lo, y_hi = rectangle_bounds(ctx)
    return ((x_hi - x_lo) / 2) ** 2 + ctx.m * ((y_hi - y_lo) / 2) ** 2


def in_rectangle(z: AlgInt | FieldElem) -> bool:
    """Membership in the closed rectangle D0."""
    x_lo, x_hi, y_lo, y_hi = rectangle_bounds(z.ctx)
    x, y = z.coords()
    return x_lo <= x <= x_hi and y_lo <= y <= y_hi


def translate_to_rectangle(z: AlgInt | FieldElem) -> tuple[FieldElem, AlgInt]:
    """Return (z', t) with z' = z - t in D0 and t in O.

    Coordinates already inside the closed bounds are left alone, so points
    on the boundary of D0 are fixed.

    Examples:
        m=7: 3 + w -> (w, 3)
    """
    ctx = z.ctx
    z = as_elem(z)
    x_lo, x_hi, y_lo, y_hi = rectangle_bounds(ctx)
    _, y = z.coords()
    shift_w = 0 if y_lo <= y <= y_hi else math.floor(y / (y_hi - y_lo))
    shifted = z - AlgInt(0, shift_w, ctx)
    x, _ = shifted.coords()
    shift_1 = 0 if x_lo <= x <= x_hi else math.floor(x - x_lo)
    t = AlgInt(shift_1, shift_w, ctx)
    return z - t, t


def reduce_mod_lattice(z: AlgInt | FieldElem) -> tuple[FieldElem, AlgInt]:
    """Canonical representative of z mod O: basis coefficients in [0, 1)."""
    z = as_elem(z)
    t = AlgInt(math.floor(z.x), math.floor(z.y), z.ctx)
    return z - t, t


def lattice_key(z: AlgInt | FieldElem) -> tuple[Fraction, Fraction]:
    """Hashable key of the class of z mod O."""
    reduced, _ = reduce_mod_lattice(z)
    return reduced.key


def rectangle_lattice_points(ctx: FieldCtx) -> list[AlgInt]:
    """Ring elements lying in the closed rectangle D0."""
    reach = rectangle_sq_half_diagonal(ctx)
    return [t for t in lattice_points_in_disk(rectangle_center(ctx), reach) if in_rectangle(t)]


# -- singular points ----------------------------------------------------------


def singular_points(ctx: FieldCtx) -> list[FieldElem]:
    """Singular points mod O, each translated into D0.

    Enumerates p(r + sqrt(-m))/s with -s/2 < r <= s/2, s**2 <= r**2 + m and

    - m = 1, 2 (mod 4): s != 1, s | r**2 + m, p coprime to s taken mod s;
    - m = 3 (mod 4): s even, s != 2, 2s | r**2 + m, p coprime to s/2 taken mod s/2.

    The representative p is the least positive residue. Points that are
    equal mod O are reported once.

    Examples:
        m=5: [(1 + sqrt(-5))/2]
        m=15: [(-1 + sqrt(-15))/4, (1 + sqrt(-15))/4]
    """
    m = ctx.m
    sqrt_minus_m = ctx.from_coords(0, 1)
    seen: dict[tuple[Fraction, Fraction], FieldElem] = {}
    s_max = math.isqrt(4 * m // 3) + 1
    for s in range(2, s_max + 1):
        if ctx.three_mod_four:
            if s % 2 or s == 2:
                continue
            modulus, divisor = s // 2, 2 * s
        else:
            modulus, divisor = s, s
        for r in range(-((s - 1) // 2), s // 2 + 1):
            if s * s > r * r + m or (r * r + m) % divisor:
                continue
            for p in range(1, modulus + 1):
                if math.gcd(p, modulus) != 1:
                    continue
                point = (sqrt_minus_m + r) * Fraction(p, s)
                key = lattice_key(point)
                if key not in seen:
                    seen[key] = translate_to_rectangle(point)[0]
    points = sorted(seen.values(), key=lambda z: z.coords())
    logger.debug(f"m={m}: {len(points)} singular points mod O")
    return points

"""Matrices of PSL2(O), their action on upper half-space and finite subgroups."""

from __future__ import annotations

from collections.abc import Callable, Iterable, Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from bianchi.arithmetic.field import AlgInt, FieldCtx, as_elem
from bianchi.core.models import AbelianGroup
from bianchi.geometry.hemispheres import PointH
from bianchi.utils.exceptions import IdentificationError, InvariantViolationError

MAX_ELEMENT_ORDER = 6
STABILIZER_ORDERS = (1, 2, 3, 4, 6, 12)


def _positive(x: AlgInt) -> bool:
    return (x.a, x.b) > (0, 0)


@dataclass(frozen=True)
class Matrix2:
    """Element (a b; c d) of PSL2(O), stored with its canonical sign.

    The first nonzero entry among (c, d, a) has lexicographically positive
    basis coordinates.
    """
    a: AlgInt
    b: AlgInt
    c: AlgInt
    d: AlgInt

    @classmethod
    def of(cls, a: AlgInt, b: AlgInt, c: AlgInt, d: AlgInt) -> Matrix2:
        """Build a matrix in canonical sign.

        Raises:
            IdentificationError: If the determinant is not 1
        """
        if not (a * d - b * c - 1).is_zero():
            raise IdentificationError(f"({a}, {b}; {c}, {d}) has determinant {a * d - b * c}")
        lead = next(x for x in (c, d, a) if not x.is_zero())
        if not _positive(lead):
            a, b, c, d = -a, -b, -c, -d
        return cls(a, b, c, d)

    @classmethod
    def from_ints(cls, ctx: FieldCtx, values: Sequence[int]) -> Matrix2:
        """Build from the 8 basis coordinates (a, b, c, d)."""
        if len(values) != 8:
            raise IdentificationError(f"Expected 8 coordinates, got {len(values)}")
        entries = [AlgInt(values[i], values[i + 1], ctx) for i in range(0, 8, 2)]
        return cls.of(*entries)

    @classmethod
    def identity(cls, ctx: FieldCtx) -> Matrix2:
        return cls(ctx.one, ctx.zero, ctx.zero, ctx.one)

    @classmethod
    def translation(cls, t: AlgInt) -> Matrix2:
        ctx = t.ctx
        return cls(ctx.one, t, ctx.zero, ctx.one)

    @property
    def ctx(self) -> FieldCtx:
        return self.a.ctx

    def to_ints(self) -> tuple[int, ...]:
        return (self.a.a, self.a.b, self.b.a, self.b.b, self.c.a, self.c.b, self.d.a, self.d.b)

    def __mul__(self, other: Matrix2) -> Matrix2:
        return Matrix2.of(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> Matrix2:
        return Matrix2.of(self.d, -self.b, -self.c, self.a)

    def is_identity(self) -> bool:
        return self == Matrix2.identity(self.ctx)

    def order(self, limit: int = 12) -> int:
        """Order in PSL2(O).

        Raises:
            InvariantViolationError: If the order exceeds ``limit``
        """
        power = self
        for k in range(1, limit + 1):
            if power.is_identity():
                return k
            power = power * self
        raise InvariantViolationError(f"{self} has order larger than {limit}")

    def __str__(self) -> str:
        return f"({self.a}, {self.b}; {self.c}, {self.d})"


def apply(g: Matrix2, p: PointH) -> PointH:
    """Image of a point of upper half-space (or of the plane) under g.

    With D = |cz + d|**2 + zeta**2 |c|**2 the image is
    z' = ((az + b) conj(cz + d) + a conj(c) zeta**2) / D and zeta'**2 = zeta**2 / D**2.

    Raises:
        IdentificationError: If a point of the plane is sent to infinity
    """
    z, sq = p.z, p.sq_height
    w = g.c * z + g.d
    denominator = w.norm() + sq * g.c.norm()
    if denominator == 0:
        raise IdentificationError(f"{g} sends {z} to infinity")
    numerator = (g.a * z + g.b) * w.conj() + g.a * g.c.conj() * sq
    return PointH(as_elem(numerator / denominator), sq / denominator**2)


class FiniteGroup:
    """Finite subgroup of PSL2(O) with its multiplication table.

    Attributes:
        elements: Canonical matrices, the identity first, then sorted
    """

    def __init__(self, elements: Iterable[Matrix2]):
        """Initialize and verify the group axioms.

        Raises:
            InvariantViolationError: If the set is empty, not closed or too large
        """
        unique = sorted(set(elements), key=Matrix2.to_ints)
        if not unique:
            raise InvariantViolationError("A group needs at least the identity")
        identity = Matrix2.identity(unique[0].ctx)
        if identity not in unique:
            raise InvariantViolationError("Stabilizer without identity")
        unique.remove(identity)
        self.elements: tuple[Matrix2, ...] = (identity, *unique)
        self._index = {g: i for i, g in enumerate(self.elements)}
        size = len(self.elements)
        if size not in STABILIZER_ORDERS:
            raise InvariantViolationError(f"Finite subgroup of order {size}")
        self._table = [[self._lookup(g * h) for h in self.elements] for g in self.elements]
        for g in self.elements:
            if g.inverse() not in self._index:
                raise InvariantViolationError(f"{g} has no inverse in the group")
            g.order(MAX_ELEMENT_ORDER)

    def _lookup(self, g: Matrix2) -> int:
        if g not in self._index:
            raise InvariantViolationError(f"Product {g} leaves the group")
        return self._index[g]

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Matrix2) -> bool:
        return g in self._index

    def __iter__(self) -> Iterator[Matrix2]:
        return iter(self.elements)

    def index(self, g: Matrix2) -> int:
        return self._lookup(g)

    def product(self, i: int, j: int) -> int:
        return self._table[i][j]

    @property
    def is_abelian(self) -> bool:
        n = len(self)
        return all(self._table[i][j] == self._table[j][i] for i in range(n) for j in range(n))

    @property
    def type_tag(self) -> str:
        """Isomorphism type: 1, Z/2, Z/3, Z/4, D2, Z/6, S3 or A4."""
        n = len(self)
        orders = {g.order() for g in self.elements}
        if n == 4:
            return "Z/4" if 4 in orders else "D2"
        if n == 6:
            return "Z/6" if self.is_abelian else "S3"
        return {1: "1", 2: "Z/2", 3: "Z/3", 12: "A4"}[n]

    def abelianization(self) -> AbelianGroup:
        """G/[G, G] from the multiplication table."""
        return AbelianGroup.from_multiplication_table(len(self), self.product)

    def conjugate(self, h: Matrix2) -> FiniteGroup:
        """The group h G h**-1."""
        inverse = h.inverse()
        return FiniteGroup(h * g * inverse for g in self.elements)

    def subgroup(self, predicate: Callable[[Matrix2], bool]) -> FiniteGroup:
        return FiniteGroup(g for g in self.elements if predicate(g))

    def __repr__(self) -> str:
        return f"FiniteGroup({self.type_tag}, order={len(self)})"


def fixes(g: Matrix2, p: PointH) -> bool:
    try:
        return apply(g, p) == p
    except IdentificationError:
        return False


def sq_height_ratio(p: PointH, q: PointH) -> Fraction:
    """zeta_p**2 / zeta_q**2 for points of positive height."""
    if p.sq_height <= 0 or q.sq_height <= 0:
        raise IdentificationError("Identification needs points of positive height")
    return p.sq_height / q.sq_height

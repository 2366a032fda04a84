"""Unit tests for the bounded identification search."""

from fractions import Fraction

import pytest

from bianchi.arithmetic.field import FieldCtx
from bianchi.arithmetic.ideals import singular_points
from bianchi.geometry.hemispheres import PointH
from bianchi.group.identify import (
    cusp_pair_anchor,
    edge_stabilizer,
    identify,
    identify_with_translations,
    pointwise_stabilizer,
    stabilizer,
)
from bianchi.group.matrices import Matrix2, apply
from bianchi.utils.exceptions import IdentificationError
from tests.fixtures import point

CTX = FieldCtx(7)
S = Matrix2.from_ints(CTX, [0, 0, -1, 0, 1, 0, 0, 0])


def long_word(ctx: FieldCtx) -> Matrix2:
    """T(2 + w) S T(1 - w) = (2 + w, (2 + w)(1 - w) - 1; 1, 1 - w)."""
    inversion = Matrix2.from_ints(ctx, [0, 0, -1, 0, 1, 0, 0, 0])
    return Matrix2.translation(ctx.integer(2, 1)) * inversion * Matrix2.translation(ctx.integer(1, -1))


def bounded_identifications(p: PointH, q: PointH, bound: int) -> set[Matrix2]:
    """Every g with c != 0, basis coordinates in [-bound, bound] and g.p = q, by exhaustion.

    Uses only |cz + d|**2 + zeta**2 |c|**2 = zeta/zeta' to skip (c, d), then
    runs over every a in the box.
    """
    ctx = p.z.ctx
    box = [ctx.integer(x, y) for x in range(-bound, bound + 1) for y in range(-bound, bound + 1)]
    ratio = p.sq_height / q.sq_height
    found = set()
    for c in box:
        if c.is_zero() or (c.norm() * p.sq_height) ** 2 > ratio:
            continue
        for d in box:
            if ((c * p.z + d).norm() + c.norm() * p.sq_height) ** 2 != ratio:
                continue
            for a in box:
                b = (a * d - 1) / c
                if not b.is_integral() or max(abs(b.x), abs(b.y)) > bound:
                    continue
                g = Matrix2.of(a, b.to_algint(), c, d)
                if apply(g, p) == q:
                    found.add(g)
    return found


class TestStabilizer:
    """Tests for point stabilizers."""

    def test_stabilizer_of_j(self):
        group = stabilizer(point(CTX, 0, 0, 1))
        assert group.type_tag == "Z/2"
        assert set(group) == {Matrix2.identity(CTX), S}

    def test_stabilizer_of_order_three_point(self):
        group = stabilizer(point(CTX, Fraction(-1, 2), 0, Fraction(3, 4)))
        assert group.type_tag == "Z/3"

    def test_generic_point_has_trivial_stabilizer(self):
        assert stabilizer(point(CTX, Fraction(1, 3), 0, Fraction(1, 2))).type_tag == "1"

    def test_edge_stabilizer(self):
        j = point(CTX, 0, 0, 1)
        assert edge_stabilizer(j, point(CTX, 0, 0, 4)).type_tag == "1"

    def test_pointwise_stabilizer_needs_positive_height(self):
        with pytest.raises(IdentificationError, match="positive height"):
            pointwise_stabilizer([point(CTX, 0, 0, 0)])

    def test_pointwise_stabilizer(self):
        group = pointwise_stabilizer([point(CTX, 0, 0, 0), point(CTX, 0, 0, 1)])
        assert group.type_tag == "1"


class TestIdentify:
    """Tests for identifying two points."""

    def test_irrational_height_ratio(self):
        assert identify(point(CTX, 0, 0, 1), point(CTX, 0, 0, 2)) == []
        assert identify_with_translations(point(CTX, 0, 0, 1), point(CTX, 0, 0, 2)) == []

    def test_translations_included(self):
        p = point(CTX, Fraction(1, 3), 0, Fraction(1, 2))
        found = identify_with_translations(p, p.translate(CTX.integer(2, 1)))
        assert Matrix2.translation(CTX.integer(2, 1)) in found

    def test_finds_known_matrix(self):
        g = Matrix2.from_ints(CTX, [1, 0, 0, 0, 1, 0, 1, 0])
        p = point(CTX, Fraction(1, 5), Fraction(1, 3), Fraction(2, 3))
        assert g in identify(p, apply(g, p))

    def test_zero_height_rejected(self):
        with pytest.raises(IdentificationError):
            identify(point(CTX, 0, 0, 0), point(CTX, 0, 0, 1))

    @pytest.mark.parametrize("m", [5, 7])
    @pytest.mark.parametrize(
        "coords",
        [
            (Fraction(1, 5), Fraction(1, 3), Fraction(2, 3)),
            (0, 0, 1),
            (Fraction(1, 2), 0, Fraction(3, 4)),
            (Fraction(-1, 3), Fraction(1, 4), Fraction(1, 2)),
            (Fraction(2, 7), Fraction(-1, 5), Fraction(5, 3)),
        ],
    )
    def test_complete_against_bounded_search(self, m, coords):
        """identify agrees with every matrix of coordinates up to 10 sending p to q."""
        ctx = FieldCtx(m)
        p = point(ctx, *coords)
        q = apply(long_word(ctx), p)
        found = set(identify(p, q))
        assert all(apply(h, p) == q for h in found)
        assert {h for h in found if max(map(abs, h.to_ints())) <= 10} == bounded_identifications(p, q, 10)


class TestCuspPairAnchor:
    """Tests for the anchor point between two cusps."""

    def test_ring_elements(self):
        anchor = cusp_pair_anchor(point(CTX, 0, 0, 0), point(CTX, 1, 0, 0))
        assert anchor == point(CTX, Fraction(1, 2), 0, Fraction(1, 4))

    def test_symmetric(self):
        ctx = FieldCtx(5)
        p, q = point(ctx, Fraction(1, 2), Fraction(1, 2), 0), point(ctx, Fraction(-1, 3), Fraction(1, 3), 0)
        assert cusp_pair_anchor(p, q) == cusp_pair_anchor(q, p)

    def test_fixed_by_the_swapping_inversion(self):
        ctx = FieldCtx(15)
        p, q = point(ctx, 0, Fraction(1, 2), 0), point(ctx, Fraction(1, 2), Fraction(1, 2), 0)
        inversion = Matrix2.from_ints(ctx, [0, 0, -1, 0, 1, 0, 0, 0])
        assert apply(inversion, p) == q
        anchor = cusp_pair_anchor(p, q)
        assert anchor == point(ctx, Fraction(1, 4), Fraction(1, 2), Fraction(1, 16))
        assert apply(inversion, anchor) == anchor
        assert inversion in identify(anchor, anchor)

    @pytest.mark.parametrize("m", [5, 15])
    def test_carried_by_the_group(self, m):
        ctx = FieldCtx(m)
        cusps = [PointH(s, Fraction(0)) for s in singular_points(ctx)]
        p, q = cusps[0], cusps[-1].translate(ctx.one)
        for g in (long_word(ctx), Matrix2.from_ints(ctx, [1, 0, 0, 0, 1, 0, 1, 0])):
            assert apply(g, cusp_pair_anchor(p, q)) == cusp_pair_anchor(apply(g, p), apply(g, q))

    def test_rejects_interior_points(self):
        with pytest.raises(IdentificationError, match="geodesic"):
            cusp_pair_anchor(point(CTX, 0, 0, 1), point(CTX, 1, 0, 0))

    def test_rejects_equal_cusps(self):
        cusp = point(CTX, 0, 0, 0)
        with pytest.raises(IdentificationError, match="geodesic"):
            cusp_pair_anchor(cusp, cusp)

"""Unit tests for lattice enumeration, unimodularity and singular points."""

import random
from fractions import Fraction

import pytest

from bianchi.arithmetic.field import AlgInt, FieldCtx, FieldElem
from bianchi.arithmetic.ideals import (
    cusp_ideal,
    cusp_scale,
    elements_of_norm,
    ideal_from_generators,
    in_rectangle,
    is_unimodular,
    lattice_key,
    lattice_points_in_disk,
    lattice_points_on_circle,
    norm_values,
    rectangle_area,
    rectangle_lattice_points,
    reduce_mod_lattice,
    singular_points,
    translate_to_rectangle,
)


def brute_force_disk(center: FieldElem, sq_radius: Fraction, strict: bool = False) -> set[tuple[int, int]]:
    """All (a, b) in a generous box with |a + b*w - center|**2 within the radius."""
    ctx = center.ctx
    found = set()
    for a in range(-25, 26):
        for b in range(-12, 13):
            gap = (AlgInt(a, b, ctx) - center).norm()
            if gap < sq_radius or (not strict and gap == sq_radius):
                found.add((a, b))
    return found


class TestUnimodular:
    """Tests for the unimodularity test on pairs."""

    def test_non_principal_ideals_of_q_sqrt_minus_5(self):
        ctx = FieldCtx(5)
        assert not is_unimodular(ctx.integer(2), ctx.integer(1, 1))
        assert not is_unimodular(ctx.integer(3), ctx.integer(1, 1))

    def test_unimodular_pairs(self):
        ctx = FieldCtx(5)
        assert is_unimodular(ctx.omega, ctx.one)
        assert is_unimodular(ctx.integer(2), ctx.integer(3))
        assert is_unimodular(ctx.zero, ctx.one)

    def test_zero_pair_rejected(self):
        ctx = FieldCtx(7)
        with pytest.raises(ValueError):
            is_unimodular(ctx.zero, ctx.zero)

    def test_ideal_norm(self):
        ctx = FieldCtx(5)
        ideal = ideal_from_generators([ctx.integer(2), ctx.integer(1, 1)], ctx)
        assert ideal.norm == 2
        assert ideal.contains(ctx.integer(1, 1))
        assert not ideal.contains(ctx.one)


class TestNorms:
    """Tests for norm enumeration."""

    def test_elements_of_norm(self):
        ctx7 = FieldCtx(7)
        assert [mu.key for mu in elements_of_norm(2, ctx7)] == [(0, 1), (1, 1)]
        ctx5 = FieldCtx(5)
        assert [mu.key for mu in elements_of_norm(4, ctx5)] == [(2, 0)]

    def test_elements_of_norm_rejects_zero(self):
        with pytest.raises(ValueError):
            elements_of_norm(0, FieldCtx(7))

    def test_norm_values(self):
        stream = norm_values(FieldCtx(5))
        assert [next(stream) for _ in range(6)] == [1, 4, 5, 6, 9, 14]
        stream = norm_values(FieldCtx(7))
        assert [next(stream) for _ in range(5)] == [1, 2, 4, 7, 8]

    def test_norm_values_start(self):
        stream = norm_values(FieldCtx(5), start=2)
        assert next(stream) == 4


class TestDiskEnumeration:
    """Disk and circle enumeration against a brute-force scan."""

    @pytest.mark.parametrize("m", [2, 5, 7, 15])
    @pytest.mark.parametrize("strict", [False, True])
    def test_matches_brute_force(self, m, strict):
        ctx = FieldCtx(m)
        rng = random.Random(m * 10 + strict)
        for _ in range(10):
            center = ctx.element(Fraction(rng.randint(-6, 6), rng.randint(1, 4)), Fraction(rng.randint(-4, 4), rng.randint(1, 4)))
            sq_radius = Fraction(rng.randint(0, 40), rng.randint(1, 4))
            found = {t.key for t in lattice_points_in_disk(center, sq_radius, strict=strict)}
            assert found == brute_force_disk(center, sq_radius, strict)

    def test_ordering(self):
        ctx = FieldCtx(7)
        points = list(lattice_points_in_disk(ctx.zero, Fraction(4)))
        assert points == sorted(points, key=lambda t: (t.b, t.a))

    def test_circle_is_disk_boundary(self):
        ctx = FieldCtx(2)
        center = ctx.element(Fraction(1, 2), 0)
        closed = set(lattice_points_in_disk(center, Fraction(9, 4)))
        open_ = set(lattice_points_in_disk(center, Fraction(9, 4), strict=True))
        circle = set(lattice_points_on_circle(center, Fraction(9, 4)))
        assert circle == closed - open_
        assert {t.key for t in circle} == {(-1, 0), (2, 0), (0, 1), (1, 1), (0, -1), (1, -1)}

    def test_negative_radius_is_empty(self):
        ctx = FieldCtx(7)
        assert list(lattice_points_in_disk(ctx.zero, Fraction(-1))) == []
        assert list(lattice_points_in_disk(ctx.zero, Fraction(0), strict=True)) == []


class TestRectangle:
    """Tests for the fundamental rectangle D0."""

    def test_area(self):
        assert rectangle_area(FieldCtx(5)) == 1
        assert rectangle_area(FieldCtx(7)) == Fraction(1, 2)

    def test_lattice_points(self):
        assert {t.key for t in rectangle_lattice_points(FieldCtx(7))} == {(0, 0), (0, 1), (1, 1)}
        assert len(rectangle_lattice_points(FieldCtx(5))) == 4

    def test_translate_to_rectangle(self):
        ctx = FieldCtx(7)
        moved, t = translate_to_rectangle(ctx.integer(3, 1))
        assert moved == ctx.omega.as_elem()
        assert t == ctx.integer(3, 0)

    @pytest.mark.parametrize("m", [2, 7, 11])
    def test_translate_lands_in_rectangle(self, m):
        ctx = FieldCtx(m)
        rng = random.Random(m)
        for _ in range(20):
            z = ctx.element(Fraction(rng.randint(-30, 30), 7), Fraction(rng.randint(-30, 30), 5))
            moved, t = translate_to_rectangle(z)
            assert in_rectangle(moved)
            assert moved + t == z
            assert lattice_key(moved) == lattice_key(z)

    def test_boundary_points_fixed(self):
        ctx = FieldCtx(5)
        corner = ctx.element(1, 1)
        assert translate_to_rectangle(corner)[0] == corner

    def test_reduce_mod_lattice(self):
        ctx = FieldCtx(2)
        reduced, t = reduce_mod_lattice(ctx.element(Fraction(-1, 3), Fraction(7, 2)))
        assert reduced.key == (Fraction(2, 3), Fraction(1, 2))
        assert t == ctx.integer(-1, 3)


class TestSingularPoints:
    """Tests for singular points mod O."""

    def test_class_number_one_has_none(self):
        for m in (2, 7, 11, 19):
            assert singular_points(FieldCtx(m)) == []

    def test_q_sqrt_minus_5(self):
        points = singular_points(FieldCtx(5))
        assert [p.coords() for p in points] == [(Fraction(1, 2), Fraction(1, 2))]

    def test_q_sqrt_minus_15(self):
        points = singular_points(FieldCtx(15))
        assert [p.coords() for p in points] == [
            (Fraction(-1, 4), Fraction(1, 4)),
            (Fraction(1, 4), Fraction(1, 4)),
        ]

    def test_points_lie_in_rectangle(self):
        for m in (6, 10, 14, 23):
            assert all(in_rectangle(p) for p in singular_points(FieldCtx(m)))


class TestCuspScale:
    """Tests for cusp ideals and their scale."""

    def test_ring_elements(self):
        ctx = FieldCtx(5)
        assert cusp_ideal(ctx.integer(2, 1)).is_unit_ideal
        assert cusp_scale(ctx.integer(2, 1)) == 1

    def test_singular_cusp_of_q_sqrt_minus_5(self):
        ctx = FieldCtx(5)
        cusp = ctx.from_coords(Fraction(1, 2), Fraction(1, 2))
        assert cusp_ideal(cusp).norm == 2
        assert cusp_scale(cusp) == 2

    def test_rational_cusp(self):
        ctx = FieldCtx(7)
        assert cusp_scale(ctx.element(Fraction(2, 5), 0)) == 25

    def test_translation_invariant(self):
        ctx = FieldCtx(15)
        for z in singular_points(ctx):
            assert cusp_scale(z + ctx.omega) == cusp_scale(z)

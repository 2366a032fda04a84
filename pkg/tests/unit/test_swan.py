"""Unit tests for the hemisphere list and the recording step."""

from fractions import Fraction

import pytest

from bianchi.arithmetic.field import FieldCtx
from bianchi.arithmetic.ideals import in_rectangle
from bianchi.geometry.hemispheres import Hemisphere
from bianchi.geometry.swan import (
    BoundAudit,
    HemisphereList,
    bound_audit,
    estimate_E,
    initial_step,
    record_hemispheres,
)
from tests.fixtures import unit_square_polyhedron


class TestHemisphereList:
    """Tests for HemisphereList."""

    def test_rejects_duplicates(self):
        ctx = FieldCtx(7)
        hlist = HemisphereList(ctx)
        assert hlist.add(Hemisphere.from_pair(ctx.one, ctx.zero))
        assert not hlist.add(Hemisphere.from_pair(-ctx.one, ctx.zero))
        assert len(hlist) == 1

    def test_sorted_by_norm(self):
        ctx = FieldCtx(7)
        big = Hemisphere.from_pair(ctx.omega, ctx.one)
        small = Hemisphere.from_pair(ctx.one, ctx.zero)
        hlist = HemisphereList(ctx, [big, small])
        assert list(hlist) == [small, big]
        assert hlist.max_norm == 2
        assert big in hlist

    def test_empty_max_norm(self):
        assert HemisphereList(FieldCtx(2)).max_norm == 0

    def test_representatives_skip_translates(self):
        hlist = initial_step(FieldCtx(5))
        assert len(hlist) == 4
        assert hlist.representatives() == [0]


class TestInitialStep:
    """Tests for the unit hemispheres over D0."""

    def test_centers_for_q_sqrt_minus_7(self):
        ctx = FieldCtx(7)
        centers = {h.center.key for h in initial_step(ctx)}
        assert centers == {(0, 0), (0, 1), (1, 1)}

    def test_centers_for_q_sqrt_minus_5(self):
        centers = {h.center.key for h in initial_step(FieldCtx(5))}
        assert centers == {(0, 0), (1, 0), (0, 1), (1, 1)}

    def test_unit_radius(self):
        assert all(h.sq_radius == 1 for h in initial_step(FieldCtx(11)))


class TestEstimateE:
    """Tests for the first norm horizon."""

    @pytest.mark.parametrize("m, h, expected", [(7, 1, 4), (2, 1, 4), (5, 2, 115)])
    def test_examples(self, m, h, expected):
        assert estimate_E(FieldCtx(m), h) == expected

    def test_rejects_zero_class_number(self):
        with pytest.raises(ValueError):
            estimate_E(FieldCtx(7), 0)


class TestRecordHemispheres:
    """Tests for recording one norm value."""

    def test_norm_two_over_q_sqrt_minus_2(self):
        ctx = FieldCtx(2)
        hlist = record_hemispheres(2, initial_step(ctx))
        assert len(hlist) == 6
        assert hlist.max_norm == 2
        added = [h for h in hlist if h.norm_mu == 2]
        assert {h.center.key for h in added} == {(0, Fraction(1, 2)), (1, Fraction(1, 2))}
        assert all(in_rectangle(h.center) for h in hlist)

    def test_recording_twice_adds_nothing(self):
        ctx = FieldCtx(2)
        hlist = record_hemispheres(2, initial_step(ctx))
        size = len(hlist)
        record_hemispheres(2, hlist)
        assert len(hlist) == size


class TestBoundAudit:
    """Tests for the known bound on norm(mu)."""

    def test_within(self):
        assert BoundAudit(10, Fraction(16)).within
        assert BoundAudit(10, None).within
        assert not BoundAudit(20, Fraction(16)).within

    def test_class_number_one_bound(self):
        audit = bound_audit(unit_square_polyhedron(7), 1)
        assert audit.bound == 16
        assert audit.within

    def test_no_bound_beyond_class_number_two(self):
        assert bound_audit(unit_square_polyhedron(7), 3).bound is None


class TestPolyhedronStats:
    """Tests for the polyhedron summary."""

    def test_stats(self):
        stats = unit_square_polyhedron(7).stats()
        assert stats.hemispheres == 1
        assert stats.vertices == 3
        assert stats.max_norm == 1
        assert stats.min_sq_height == "1/2"
        assert stats.horizon == 4

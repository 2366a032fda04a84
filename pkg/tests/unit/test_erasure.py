"""Unit tests for hemisphere erasure rules."""

from fractions import Fraction

import pytest

from bianchi.geometry.erasure import ErasureRuleFactory, NonemptyRule, ThreeVertexRule

TRIANGLE = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(0), Fraction(1, 2))]
SEGMENT = [(Fraction(0), Fraction(0)), (Fraction(1, 2), Fraction(1, 4)), (Fraction(1), Fraction(1, 2))]


class TestThreeVertexRule:
    """Tests for ThreeVertexRule."""

    def test_keeps_triangle(self):
        assert ThreeVertexRule().keeps(TRIANGLE)

    def test_erases_collinear_points(self):
        """Three vertices on one line bound no 2-cell."""
        assert not ThreeVertexRule().keeps(SEGMENT)

    def test_erases_short_lists(self):
        rule = ThreeVertexRule()
        assert not rule.keeps(TRIANGLE[:2])
        assert not rule.keeps([])


class TestNonemptyRule:
    """Tests for NonemptyRule."""

    def test_keeps_any_vertex(self):
        rule = NonemptyRule()
        assert rule.keeps(TRIANGLE[:1])
        assert rule.keeps(SEGMENT)

    def test_erases_empty(self):
        assert not NonemptyRule().keeps([])


class TestErasureRuleFactory:
    """Tests for ErasureRuleFactory."""

    def test_create_by_name(self):
        assert isinstance(ErasureRuleFactory.create_rule("three-vertex"), ThreeVertexRule)
        assert isinstance(ErasureRuleFactory.create_rule("nonempty"), NonemptyRule)

    def test_rule_names(self):
        assert ErasureRuleFactory.create_rule("nonempty").name == "nonempty"

    def test_unknown_rule(self):
        with pytest.raises(ValueError, match="Unknown prune rule: lowest. Valid rules: three-vertex, nonempty"):
            ErasureRuleFactory.create_rule("lowest")

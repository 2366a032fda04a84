"""Unit tests for exact arithmetic in Q(sqrt(-m))."""

import random
from fractions import Fraction

import pytest

from bianchi.arithmetic.field import (
    AlgInt,
    FieldCtx,
    FieldElem,
    coords,
    distance_sq,
    fields_up_to,
    norm,
    rational_sqrt,
    sqrt_upper_bound,
    validate_m,
)
from bianchi.utils.exceptions import ExcludedFieldError, InvalidFieldError, NotSquareFreeError

FIELDS = (2, 5, 6, 7, 11, 15, 19, 23, 74)


def random_element(ctx: FieldCtx, rng: random.Random) -> FieldElem:
    """Random field element with small rational coefficients."""
    return ctx.element(Fraction(rng.randint(-9, 9), rng.randint(1, 5)), Fraction(rng.randint(-9, 9), rng.randint(1, 5)))


class TestValidateM:
    """Tests for field parameter validation."""

    @pytest.mark.parametrize("m", [1, 3])
    def test_excluded_cases(self, m):
        """The two fields with extra units are rejected."""
        with pytest.raises(ExcludedFieldError, match="excluded case"):
            validate_m(m)

    def test_not_square_free(self):
        with pytest.raises(NotSquareFreeError, match="not square-free"):
            validate_m(12)

    @pytest.mark.parametrize("m", [0, -5])
    def test_non_positive(self, m):
        with pytest.raises(NotSquareFreeError):
            validate_m(m)

    def test_invalid_field_error_is_value_error(self):
        """Callers catching ValueError also see invalid fields."""
        with pytest.raises(ValueError):
            FieldCtx(4)
        assert issubclass(InvalidFieldError, ValueError)

    @pytest.mark.parametrize("m", FIELDS)
    def test_accepts_square_free(self, m):
        validate_m(m)


class TestFieldsUpTo:
    """Tests for discriminant-ordered field enumeration."""

    def test_first_fields(self):
        assert fields_up_to(24) == [7, 2, 11, 15, 19, 5, 23, 6]

    def test_small_bounds(self):
        assert fields_up_to(8) == [7, 2]
        assert fields_up_to(3) == []
        assert fields_up_to(0) == []

    def test_discriminants(self):
        assert FieldCtx(7).discriminant == -7
        assert FieldCtx(2).discriminant == -8
        assert FieldCtx(5).discriminant == -20


class TestFieldCtx:
    """Tests for the integral basis {1, w}."""

    def test_basis_constants(self):
        ctx7 = FieldCtx(7)
        assert (ctx7.trace_omega, ctx7.norm_omega) == (1, 2)
        ctx5 = FieldCtx(5)
        assert (ctx5.trace_omega, ctx5.norm_omega) == (0, 5)

    def test_norm_of_omega(self):
        assert norm(FieldCtx(7).omega) == 2
        assert norm(FieldCtx(5).omega) == 5

    @pytest.mark.parametrize("m", FIELDS)
    def test_omega_minimal_polynomial(self, m):
        """w**2 + t*w + n = 0."""
        ctx = FieldCtx(m)
        w = ctx.omega
        assert (w * w + ctx.trace_omega * w + ctx.norm_omega).is_zero()

    def test_coords(self):
        assert coords(FieldCtx(7).omega) == (Fraction(-1, 2), Fraction(1, 2))
        assert coords(FieldCtx(2).integer(3, 2)) == (Fraction(3), Fraction(2))

    @pytest.mark.parametrize("m", [5, 7, 15])
    def test_from_coords_inverts_coords(self, m):
        ctx = FieldCtx(m)
        rng = random.Random(m)
        for _ in range(20):
            e = random_element(ctx, rng)
            assert ctx.from_coords(*e.coords()) == e

    def test_parse_rendering(self):
        ctx = FieldCtx(7)
        e = ctx.element(Fraction(-3, 4), Fraction(5, 2))
        assert str(e) == "-3/4 + 5/2*w"
        assert ctx.parse(str(e)) == e

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            FieldCtx(7).parse("1 - w")


class TestArithmetic:
    """Tests for ring and field operations."""

    @pytest.mark.parametrize("m", FIELDS)
    def test_norm_is_multiplicative(self, m):
        ctx = FieldCtx(m)
        rng = random.Random(100 + m)
        for _ in range(25):
            a, b = random_element(ctx, rng), random_element(ctx, rng)
            assert norm(a * b) == norm(a) * norm(b)

    @pytest.mark.parametrize("m", FIELDS)
    def test_division_inverts_multiplication(self, m):
        ctx = FieldCtx(m)
        rng = random.Random(200 + m)
        for _ in range(25):
            a, b = random_element(ctx, rng), random_element(ctx, rng)
            if b.is_zero():
                continue
            assert (a * b) / b == a

    def test_norm_equals_product_with_conjugate(self):
        ctx = FieldCtx(11)
        e = ctx.integer(3, -2)
        product = e * e.conj()
        assert product.b == 0
        assert Fraction(product.a) == norm(e)

    def test_integers_stay_integral(self):
        ctx = FieldCtx(7)
        product = ctx.integer(1, 1) * ctx.integer(2, -1)
        assert isinstance(product, AlgInt)
        assert isinstance(ctx.integer(1, 1) + 3, AlgInt)
        assert isinstance(ctx.integer(1, 1) / 1, FieldElem)

    def test_division_by_zero(self):
        ctx = FieldCtx(5)
        with pytest.raises(ZeroDivisionError):
            ctx.one / ctx.zero

    def test_mixing_fields(self):
        with pytest.raises(ValueError, match="Mixing"):
            FieldCtx(5).one + FieldCtx(7).one

    def test_to_algint(self):
        ctx = FieldCtx(2)
        assert ctx.element(2, -1).to_algint() == ctx.integer(2, -1)
        with pytest.raises(ValueError, match="not an algebraic integer"):
            ctx.element(Fraction(1, 2), 0).to_algint()

    def test_distance_sq(self):
        ctx = FieldCtx(7)
        assert distance_sq(ctx.zero, ctx.one) == 1
        assert distance_sq(ctx.zero, ctx.omega) == 2


class TestRationalHelpers:
    """Tests for exact square roots."""

    def test_rational_sqrt(self):
        assert rational_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert rational_sqrt(Fraction(2)) is None
        assert rational_sqrt(Fraction(-1)) is None
        assert rational_sqrt(Fraction(0)) == 0

    @pytest.mark.parametrize("q", [Fraction(2), Fraction(1, 3), Fraction(49, 5), Fraction(4)])
    def test_sqrt_upper_bound(self, q):
        bound = sqrt_upper_bound(q)
        assert bound >= 0
        assert bound * bound >= q

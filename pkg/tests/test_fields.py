import pytest

from quadforms.checks import check_square_class_laws
from quadforms.errors import (
    DegenerateElementError,
    ShapeError,
    UnsupportedFieldError,
)
from quadforms.fields import (
    FieldDesc,
    Ordering,
    Place,
    all_orderings,
    canonical_square_class,
    hilbert_symbol_int,
    hilbert_symbol_oracle,
    least_nonresidue,
    legendre_symbol,
    residue_split,
    sign_at,
    square_class,
    squarefree_part,
)

Q = FieldDesc.rationals()
QX = Q.extend("x")
QXY = Q.extend("x", "y")
F7 = FieldDesc.prime_field(7)


class TestFieldDesc:
    def test_tower_printing(self):
        assert str(Q) == "Q"
        assert str(F7) == "Fp(7)"
        assert str(QXY) == "Q[[x,y]]"

    def test_extend_order_is_significant(self):
        assert QXY.tower_vars == ("x", "y")
        assert QXY != Q.extend("y", "x")
        assert Q.extend("x").extend("y") == QXY

    def test_extends(self):
        assert QXY.extends(QX)
        assert QXY.extends(Q)
        assert not QX.extends(QXY)

    def test_duplicate_variable_rejected(self):
        with pytest.raises(Exception):
            Q.extend("x", "x")

    def test_even_or_composite_prime_rejected(self):
        for bad in (2, 9, 1):
            with pytest.raises(UnsupportedFieldError):
                FieldDesc.prime_field(bad)


class TestCanonicalSquareClass:
    def test_squarefree_reduction(self):
        c = canonical_square_class(18, 1, (), Q)
        assert (c.base_part, c.exps) == (2, ())

    def test_monomial_exponents_mod_two(self):
        c = canonical_square_class(12, 1, (2, 1), QXY)
        assert (c.base_part, c.exps) == (3, (0, 1))

    def test_denominator_square_absorbed(self):
        c = canonical_square_class(-1, 4, (), Q)
        assert (c.base_part, c.exps) == (-1, ())

    def test_prime_field_two_classes(self):
        # squares mod 7 are {1,2,4}; least nonresidue is 3
        assert canonical_square_class(2, 1, (), F7).base_part == 1
        assert canonical_square_class(5, 1, (), F7).base_part == 3
        assert canonical_square_class(12, 1, (), F7).base_part == 3

    def test_zero_rejected(self):
        with pytest.raises(DegenerateElementError):
            canonical_square_class(0, 1, (), Q)

    def test_monomial_length_checked(self):
        with pytest.raises(ShapeError):
            canonical_square_class(1, 1, (1,), Q)
        with pytest.raises(ShapeError):
            canonical_square_class(1, 1, (), QX)

    def test_equality_is_canonical(self):
        assert canonical_square_class(8, 2, (), Q) == square_class(1, Q)
        assert canonical_square_class(2, 3, (), Q) == canonical_square_class(6, 9, (), Q)

    def test_group_laws_battery(self):
        assert check_square_class_laws(101, 150).passed


class TestResidueSplit:
    def test_top_variable_extracted(self):
        u, e = residue_split(canonical_square_class(7, 1, (1,), QX))
        assert e == 1
        assert u == square_class(7, Q)

    def test_constant_has_exponent_zero(self):
        u, e = residue_split(canonical_square_class(5, 1, (0,), QX))
        assert e == 0
        assert u == square_class(5, Q)

    def test_only_top_variable_moves(self):
        u, e = residue_split(canonical_square_class(3, 1, (1, 1), QXY))
        assert e == 1
        assert u == canonical_square_class(3, 1, (1,), QX)


class TestOrderings:
    def test_rationals_have_one_ordering(self):
        assert len(list(all_orderings(Q))) == 1

    def test_tower_orderings_count(self):
        assert len(list(all_orderings(QXY))) == 4

    def test_signs(self):
        assert sign_at(square_class(-7, Q), Ordering(Q)) == -1
        pos = Ordering(QX, (1,))
        assert sign_at(canonical_square_class(1, 1, (1,), QX), pos) == 1
        mixed = Ordering(QXY, (1, -1))
        assert sign_at(canonical_square_class(-3, 1, (1, 1), QXY), mixed) == 1

    def test_sign_multiplicative(self):
        a = canonical_square_class(-3, 1, (1, 0), QXY)
        b = canonical_square_class(5, 1, (1, 1), QXY)
        for P in all_orderings(QXY):
            assert sign_at(a.times(b), P) == sign_at(a, P) * sign_at(b, P)


class TestLegendreAndSquarefree:
    def test_legendre(self):
        assert legendre_symbol(2, 7) == 1
        assert legendre_symbol(3, 7) == -1
        assert legendre_symbol(1, 5) == 1

    def test_least_nonresidue(self):
        assert least_nonresidue(7) == 3
        assert least_nonresidue(3) == 2

    def test_squarefree_part(self):
        assert squarefree_part(18) == 2
        assert squarefree_part(-12) == -3
        assert squarefree_part(1) == 1


class TestHilbertSymbol:
    def test_real_place(self):
        assert hilbert_symbol_int(-1, -1, Place.real()) == -1
        assert hilbert_symbol_int(1, -1, Place.real()) == 1

    def test_odd_prime_place(self):
        assert hilbert_symbol_int(2, 7, Place.prime(7)) == 1
        assert hilbert_symbol_int(7, 7, Place.prime(7)) == -1

    def test_closed_form_matches_enumeration_oracle(self):
        # the oracle solves a x^2 + b y^2 = z^2 by exhaustion mod p^k
        places = [Place.real(), Place.prime(2), Place.prime(3), Place.prime(5), Place.prime(7)]
        values = [-10, -7, -5, -3, -2, -1, 1, 2, 3, 5, 6, 7, 10]
        for a in values:
            for b in values:
                for pl in places:
                    assert hilbert_symbol_int(a, b, pl) == hilbert_symbol_oracle(a, b, pl), (a, b, pl)

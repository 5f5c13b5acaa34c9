import pytest

from quadforms.brauer import (
    BrauerClass2,
    clifford_invariant,
    hasse_invariant,
    is_trivial,
    schur_index,
)
from quadforms.checks import check_hilbert_cross, check_hilbert_reciprocity
from quadforms.errors import UnsupportedClassError
from quadforms.fields import FieldDesc, SquareClassElem, square_class
from quadforms.forms import QForm, is_isotropic

Q = FieldDesc.rationals()
QXY = Q.extend("x", "y")


def unit(field, i):
    bits = [0] * field.depth
    bits[i] = 1
    return SquareClassElem(field, 1, tuple(bits))


def sym(a, b, field):
    return BrauerClass2.symbol(a, b, field)


class TestHasse:
    def test_pair_with_one_splits(self):
        assert is_trivial(hasse_invariant(QForm.diagonal([1, 5], Q)))
        assert is_trivial(hasse_invariant(QForm.diagonal([1, 1, 1, 7], Q)))

    def test_minus_one_minus_one(self):
        h = hasse_invariant(QForm.diagonal([-1, -1], Q))
        assert not is_trivial(h)
        assert is_trivial(h.plus(sym(square_class(-1, Q), square_class(-1, Q), Q)))


class TestClifford:
    def test_hyperbolic_plane_trivial(self):
        assert is_trivial(clifford_invariant(QForm.diagonal([1, -1], Q)))

    def test_eight_ones_trivial(self):
        assert is_trivial(clifford_invariant(QForm.diagonal([1] * 8, Q)))

    def test_generic_five_two_symbol_presentation(self):
        F = Q.extend("x1", "x2", "x3", "x4")
        w, x, y, z = (unit(F, i) for i in range(4))
        q = QForm(F, (square_class(1, F), w, x, y, z))
        expected = sym(w.neg(), x.neg(), F).plus(
            sym(y.times(z).neg(), w.times(x).times(z), F))
        assert is_trivial(clifford_invariant(q).plus(expected))


class TestTriviality:
    def test_negative_unit_symbol_nontrivial(self):
        assert not is_trivial(sym(square_class(-1, Q), square_class(-1, Q), Q))

    def test_two_seven_splits(self):
        assert is_trivial(sym(square_class(2, Q), square_class(7, Q), Q))

    def test_tower_biquaternion_nontrivial(self):
        x, y = unit(QXY, 0), unit(QXY, 1)
        c = sym(square_class(-1, QXY), square_class(-1, QXY), QXY).plus(sym(x, y, QXY))
        assert not is_trivial(c)

    def test_symbol_of_equal_slots_rewrites(self):
        x = unit(Q.extend("x"), 0)
        F = x.field
        assert is_trivial(sym(x, x, F).plus(sym(x, square_class(-1, F), F)))

    def test_group_laws(self):
        a = sym(square_class(-1, Q), square_class(-1, Q), Q)
        b = sym(square_class(2, Q), square_class(5, Q), Q)
        assert is_trivial(a.plus(a))
        assert is_trivial(a.plus(b).plus(b).plus(a))
        assert is_trivial(BrauerClass2.trivial(Q))


class TestSchurIndex:
    def test_trivial_class(self):
        assert schur_index(BrauerClass2.trivial(Q)) == 1

    def test_quaternion(self):
        assert schur_index(sym(square_class(-1, Q), square_class(-1, Q), Q)) == 2

    def test_biquaternion_over_tower(self):
        x, y = unit(QXY, 0), unit(QXY, 1)
        c = sym(square_class(-1, QXY), square_class(-1, QXY), QXY).plus(sym(x, y, QXY))
        assert schur_index(c) == 4

    def test_albert_form_consistency(self):
        # index 4 exactly when the associated 6-dim form is anisotropic
        x, y = unit(QXY, 0), unit(QXY, 1)
        albert = QForm(QXY, (square_class(1, QXY), square_class(1, QXY), square_class(1, QXY),
                             x, y, x.times(y).neg()))
        assert not is_isotropic(albert)

    def test_three_independent_symbols_out_of_scope(self):
        F = Q.extend("x1", "x2", "x3", "x4", "x5", "x6")
        c = sym(unit(F, 0), unit(F, 1), F)
        c = c.plus(sym(unit(F, 2), unit(F, 3), F))
        c = c.plus(sym(unit(F, 4), unit(F, 5), F))
        with pytest.raises(UnsupportedClassError):
            schur_index(c)


class TestAgainstForms:
    def test_symbol_triviality_matches_isotropy_battery(self):
        assert check_hilbert_cross(5, 120).passed

    def test_reciprocity_battery(self):
        assert check_hilbert_reciprocity(5, 150).passed

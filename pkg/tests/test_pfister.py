"""Pfister-form structure: expansion, similarity, neighbours, ascent and descent."""

import pytest

from quadforms.checks import check_pfister_round
from quadforms.errors import DimensionError, NotAnisotropicError
from quadforms.fields import FieldDesc, SquareClassElem, square_class
from quadforms.forms import QForm, is_isotropic, isometric, tensor
from quadforms.pfister import (
    PfisterSpec,
    complementary_form,
    dim5_neighbor_test,
    expand_pfister,
    generic_ascend,
    generic_descend,
    is_excellent,
    is_neighbor,
    round_check_sampled,
    similar_to_pfister,
)

Q = FieldDesc.rationals()
QX = Q.extend("x")
QXY = Q.extend("x", "y")


def unit(field, i):
    bits = [0] * field.depth
    bits[i] = 1
    return SquareClassElem(field, 1, tuple(bits))


def diag(coeffs, field=Q):
    return QForm.diagonal(coeffs, field)


def one_x(field):
    # the binary generic factor <1, x> over a one-variable tower
    return QForm(field, (square_class(1, field), unit(field, 0)))


class TestExpand:
    def test_two_fold_minus_ones(self):
        assert isometric(expand_pfister(PfisterSpec.of(Q, -1, -1)), diag([1, 1, 1, 1]))

    def test_one_fold_generic(self):
        x = unit(QX, 0)
        q = PfisterSpec(QX, (x.neg(),)).expand()
        assert [str(c) for c in q.coeffs] == ["1", "x"]

    def test_slot_one_gives_hyperbolic(self):
        q = expand_pfister(PfisterSpec.of(Q, 1))
        assert isometric(q, diag([1, -1])) and is_isotropic(q)

    def test_two_fold_generic_multiset(self):
        x, y = unit(QXY, 0), unit(QXY, 1)
        q = PfisterSpec(QXY, (x, y)).expand()
        want = {"1", "-x", "-y", "x*y"}
        assert {str(c) for c in q.coeffs} == want

    def test_dimension_is_power_of_fold(self):
        spec = PfisterSpec.of(Q, -1, 2, 3)
        assert expand_pfister(spec).dim == 8
        assert spec.fold == 3


class TestSimilarity:
    def test_four_dim_counterexample(self):
        assert similar_to_pfister(diag([1, 1, 1, 7])).status == "not_similar"

    def test_binary_scaled(self):
        res = similar_to_pfister(diag([3, 6]))
        assert res.status == "similar"
        assert isometric(res.spec.expand(), PfisterSpec.of(Q, -2).expand())
        assert isometric(res.spec.expand().scaled(res.scalar), diag([3, 6]))

    def test_sixteen_ones_with_candidate(self):
        q = diag([1] * 16)
        res = similar_to_pfister(q, candidate=PfisterSpec.of(Q, -1, -1, -1, -1))
        assert res.status == "similar"
        assert str(res.scalar) == "1"

    def test_odd_dimension_never_similar(self):
        assert similar_to_pfister(diag([1, 1, 1])).status == "not_similar"

    def test_eight_dim_complete_without_candidate(self):
        q = tensor(PfisterSpec.of(Q, -1, -1).expand(), diag([1, 2]))
        res = similar_to_pfister(q)
        assert res.status == "similar"
        assert isometric(res.spec.expand().scaled(res.scalar), q)

    def test_sixteen_hint_free_is_unknown(self):
        assert similar_to_pfister(diag([1] * 16)).status == "unknown"

    def test_wrong_candidate_rejected(self):
        res = similar_to_pfister(diag([1, 1, 1, 7]), candidate=PfisterSpec.of(Q, -1, -1))
        assert res.status != "similar"


class TestNeighbors:
    def test_three_ones(self):
        wit = is_neighbor(diag([1, 1, 1]), PfisterSpec.of(Q, -1, -1))
        assert wit is not None
        assert [str(c) for c in wit.complementary.coeffs] == ["1"]

    def test_generic_five_dim(self):
        F = QXY
        x, y = unit(F, 0), unit(F, 1)
        one = square_class(1, F)
        tau = QForm(F, (one, one, x.neg(), y.neg(), x.times(y)))
        pi = PfisterSpec(F, (x, y, square_class(-1, F)))
        wit = is_neighbor(tau, pi)
        assert wit is not None
        comp = QForm(F, (x.neg(), y.neg(), x.times(y)))
        assert isometric(wit.complementary, comp)
        # the pieces really tile the scaled ambient
        assert isometric(tau.perp(wit.complementary), pi.expand().scaled(wit.scalar))

    def test_dimension_too_small(self):
        assert is_neighbor(diag([1, 1]), PfisterSpec.of(Q, -1, -1)) is None

    def test_complementary_form_raises_for_non_neighbor(self):
        from quadforms.errors import NotANeighborError
        with pytest.raises(NotANeighborError):
            complementary_form(diag([1, 1]), PfisterSpec.of(Q, -1, -1))

    def test_complementary_five_ones(self):
        comp = complementary_form(diag([1] * 5), PfisterSpec.of(Q, -1, -1, -1))
        assert isometric(comp, diag([1, 1, 1]))


class TestDim5:
    def test_generic_diagonal_fails(self):
        F = Q.extend("x1", "x2", "x3", "x4")
        one = square_class(1, F)
        q = QForm(F, (one,) + tuple(unit(F, i) for i in range(4)))
        assert dim5_neighbor_test(q) is False

    def test_five_ones(self):
        assert dim5_neighbor_test(diag([1] * 5)) is True

    def test_four_ones_and_seven(self):
        assert dim5_neighbor_test(diag([1, 1, 1, 1, 7])) is True

    def test_wrong_dimension(self):
        with pytest.raises(DimensionError):
            dim5_neighbor_test(diag([1, 1, 1]))


class TestExcellence:
    def test_three_ones_with_chain(self):
        rep = is_excellent(diag([1, 1, 1]), [PfisterSpec.of(Q, -1, -1)])
        assert rep.status == "verified"
        assert [str(c) for c in rep.witnesses[0].complementary.coeffs] == ["1"]

    def test_four_dim_refuted(self):
        assert is_excellent(diag([1, 1, 1, 7])).status == "refuted"

    def test_generic_five_chain(self):
        F = QXY
        x, y = unit(F, 0), unit(F, 1)
        one = square_class(1, F)
        tau = QForm(F, (one, one, x.neg(), y.neg(), x.times(y)))
        chain = [PfisterSpec(F, (x, y, square_class(-1, F))), PfisterSpec(F, (x, y))]
        assert is_excellent(tau, chain).status == "verified"


class TestRoundness:
    def test_four_ones(self):
        assert round_check_sampled(diag([1, 1, 1, 1]), [2, 3, 5, 7]).passed

    def test_scaled_binary_fails(self):
        chk = round_check_sampled(diag([3, 3]), [3])
        assert not chk.passed and str(chk.witness) == "3"

    def test_three_ones_fails_at_three(self):
        chk = round_check_sampled(diag([1, 1, 1]), [3, 2, 5])
        assert not chk.passed and str(chk.witness) == "3"

    def test_battery(self):
        assert check_pfister_round(11, 15).passed


class TestAscent:
    def test_one_step(self):
        Qm = generic_ascend(diag([1, 1, 1, 7]), 1)
        assert Qm.dim == 8
        assert Qm.field.depth == 1 and Qm.field.tower_vars == ("x1",)
        assert not is_isotropic(Qm)

    def test_zero_steps_identity(self):
        q = diag([1, 2, 5])
        assert generic_ascend(q, 0) is q

    def test_two_steps(self):
        Qm = generic_ascend(diag([1, 1, 1]), 2)
        assert Qm.dim == 12 and Qm.field.depth == 2

    def test_fresh_variables_skip_used_names(self):
        x1 = unit(Q.extend("x1"), 0)
        q = QForm(x1.field, (square_class(1, x1.field), x1))
        Qm = generic_ascend(q, 1)
        assert Qm.field.tower_vars == ("x1", "x2")

    def test_isotropic_input_rejected(self):
        with pytest.raises(NotAnisotropicError):
            generic_ascend(diag([1, -1]), 1)


def lift(q, field):
    return QForm(field, tuple(c.lift(field) for c in q.coeffs))


class TestDescent:
    def test_neighbor(self):
        q = tensor(lift(diag([1, 1, 1]), QX), one_x(QX))
        res = generic_descend(q, "neighbor", rho=PfisterSpec.of(Q, -1, -1))
        assert res.status == "yes"
        assert res.peeled_vars == ("x",)
        assert isometric(res.base_form, diag([1, 1, 1]))
        assert [str(c) for c in res.witness.coeffs] == ["1"]

    def test_multiple(self):
        base = tensor(diag([1, 2]), diag([1, 7]))
        q = tensor(lift(base, QX), one_x(QX))
        rho = PfisterSpec.of(Q, -7)
        res = generic_descend(q, "multiple", rho=rho)
        assert res.status == "yes"
        assert isometric(res.witness, diag([1, 2]))
        assert isometric(tensor(res.witness, rho.expand()), base)

    def test_round_failure(self):
        q = tensor(lift(diag([3, 3]), QX), one_x(QX))
        res = generic_descend(q, "round", samples=[3])
        assert res.status == "fail"
        assert str(res.witness) == "3"

    def test_excellent(self):
        q = tensor(lift(diag([1, 1, 1]), QX), one_x(QX))
        res = generic_descend(q, "excellent", chain=[PfisterSpec.of(Q, -1, -1)])
        assert res.status == "verified"

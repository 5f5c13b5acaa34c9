"""Expression grammar: parsing, elaboration, printing, and round trips."""

import random

import pytest

from quadforms.checks import check_expr_roundtrip
from quadforms.errors import (
    DegenerateElementError,
    FormSyntaxError,
    UnknownVariableError,
)
from quadforms.expr import (
    elaborate,
    parse_field,
    parse_form_expr,
    parse_pfister_spec,
    parse_qform,
    print_form,
    print_program,
)
from quadforms.fields import FieldDesc
from quadforms.forms import QForm, is_isotropic, isometric, tensor
from quadforms.pfister import PfisterSpec

Q = FieldDesc.rationals()


class TestFieldSyntax:
    def test_rationals(self):
        assert parse_field("Q") == Q

    def test_prime_field(self):
        assert parse_field("Fp(7)") == FieldDesc.prime_field(7)

    def test_tower(self):
        assert parse_field("Q[[x,y]]") == Q.extend("x", "y")
        assert parse_field("Fp(3)[[t]][[u]]") == FieldDesc.prime_field(3).extend("t").extend("u")

    def test_even_prime_rejected(self):
        from quadforms.errors import UnsupportedFieldError
        with pytest.raises(UnsupportedFieldError):
            parse_field("Fp(4)")


class TestParsing:
    def test_diagonal_literal(self):
        q = parse_qform("<1,1,1,7> over Q")
        assert q.dim == 4 and isometric(q, QForm.diagonal([1, 1, 1, 7], Q))

    def test_product_literal(self):
        q = parse_qform("pf(-1,-1) (*) <1,1,1,7> over Q")
        assert q.dim == 16
        assert isometric(q, tensor(PfisterSpec.of(Q, -1, -1).expand(),
                                   QForm.diagonal([1, 1, 1, 7], Q)))

    def test_five_dim_with_generic_slots(self):
        q = parse_qform("(<1> (+) pf(x,y)) over Q[[x,y]]")
        assert q.dim == 5 and not is_isotropic(q)
        want = {"1", "1", "-x", "-y", "x*y"}
        assert {str(c) for c in q.coeffs} == want

    def test_zero_coefficient(self):
        with pytest.raises(DegenerateElementError):
            parse_qform("<1,0> over Q")

    def test_unknown_variable(self):
        with pytest.raises(UnknownVariableError):
            parse_qform("<1,z> over Q[[x,y]]")

    def test_scalar_multiple_and_monomials(self):
        q = parse_qform("3*<1,x> (+) x*y*<2> over Q[[x,y]]")
        assert [str(c) for c in q.coeffs] == ["3", "3*x", "2*x*y"]

    def test_rational_and_power_coefficients(self):
        q = parse_qform("<1/2, x^2, x^-1> over Q[[x]]")
        # square classes: 1/2 ~ 2, x^2 ~ 1, x^-1 ~ x
        assert [str(c) for c in q.coeffs] == ["2", "1", "x"]

    def test_default_field(self):
        q = parse_qform("<1,2>", default_field=Q)
        assert q.field == Q

    def test_missing_field_rejected(self):
        with pytest.raises(FormSyntaxError):
            parse_qform("<1,2>")


class TestSyntaxErrors:
    def test_position_reported(self):
        with pytest.raises(FormSyntaxError) as exc:
            parse_form_expr("<1,,2> over Q")
        assert "position" in str(exc.value) or ":" in str(exc.value)

    def test_unbalanced(self):
        with pytest.raises(FormSyntaxError):
            parse_form_expr("<1,2 over Q")

    def test_reserved_word_as_variable(self):
        with pytest.raises(FormSyntaxError):
            parse_field("Q[[pf]]")

    def test_trailing_garbage(self):
        with pytest.raises(FormSyntaxError):
            parse_form_expr("<1> over Q extra")

    def test_empty_input(self):
        with pytest.raises(FormSyntaxError):
            parse_form_expr("")


class TestPrecedence:
    def test_tensor_binds_tighter_than_sum(self):
        q = parse_qform("<1> (+) <2> (*) <3> over Q")
        assert q.dim == 2
        assert isometric(q, QForm.diagonal([1, 6], Q))

    def test_parens_override(self):
        q = parse_qform("(<1> (+) <2>) (*) <3> over Q")
        assert q.dim == 2
        assert isometric(q, QForm.diagonal([3, 6], Q))

    def test_scalar_binds_tightest(self):
        q = parse_qform("2*<1> (+) <5> over Q")
        assert [str(c) for c in q.coeffs] == ["2", "5"]


class TestPfisterLiteral:
    def test_bare_literal(self):
        spec = parse_pfister_spec("pf(-1,-1) over Q")
        assert isinstance(spec, PfisterSpec)
        assert isometric(spec.expand(), QForm.diagonal([1, 1, 1, 1], Q))

    def test_non_literal_rejected(self):
        with pytest.raises(FormSyntaxError):
            parse_pfister_spec("<1,1> over Q")


class TestPrinting:
    def test_parse_print_identity(self):
        texts = [
            "<1,1,1,7> over Q",
            "pf(-1,-1) (*) <1,1,1,7> over Q",
            "(<1> (+) pf(x,y)) over Q[[x,y]]",
            "2*(3*<1,x>) over Q[[x]]",
            "<1/2,x^2,-x> (+) x*y*pf(-x) over Q[[x,y]]",
        ]
        for t in texts:
            prog = parse_form_expr(t)
            printed = print_program(prog)
            again = parse_form_expr(printed)
            assert print_program(again) == printed

    def test_print_form_reparses_isometric(self):
        q = QForm.diagonal([1, 1, 1, 7], Q)
        assert isometric(parse_qform(print_form(q)), q)

    def test_elaborate_print_round_trip(self):
        t = "pf(-1,-1) (*) <1,1,1,7> over Q"
        prog = parse_form_expr(t)
        q = elaborate(prog)
        assert isometric(parse_qform(print_form(q)), q)


class TestRoundTripProperty:
    def test_thousand_random_expressions(self):
        assert check_expr_roundtrip(97, 1000).passed

    def test_printed_forms_reparse_across_fields(self):
        rng = random.Random(12)
        fields = [Q, Q.extend("x"), Q.extend("x", "y"), FieldDesc.prime_field(5).extend("t")]
        for _ in range(50):
            field = rng.choice(fields)
            coeffs = []
            for _ in range(rng.randint(1, 5)):
                v = 0
                while v == 0 or (field.p is not None and v % field.p == 0):
                    v = rng.randint(-9, 9)
                coeffs.append(v)
            q = QForm.diagonal(coeffs, field)
            if field.depth:
                q = q.scaled(parse_qform("<" + field.tower_vars[0] + "> over " + str(field)).coeffs[0])
            assert isometric(parse_qform(print_form(q)), q)

"""Expression language for diagonal forms, Pfister literals, and fields.

Grammar, loosest binding first:

    program := sum ['over' field]
    sum     := prod ('(+)' prod)*
    prod    := unary ('(*)' unary)*
    unary   := atom | coeff '*' unary
    atom    := '<' coeff (',' coeff)* '>'
             | 'pf(' coeff (',' coeff)* ')'
             | '(' sum ')'
    coeff   := ['+'|'-'] cfactor ('*' cfactor)*
    cfactor := NUM ['/' NUM] | NAME ['^' ['-'] NUM]
    field   := ('Q' | 'Fp(' NUM ')') ('[[' NAME (',' NAME)* ']]')*

pf(a1,...,an) is the n-fold Pfister form <1,-a1> (x) ... (x) <1,-an>.
A '*' inside a coefficient stops before a token that opens a form, so
2*x*<1,1> is the scalar 2x applied to the binary form.  Parsing is
separate from elaboration: parse_form_expr builds a syntax tree, and
elaboration against a field turns it into a QForm, reporting zero
coefficients and undeclared variables at that stage.
"""

from __future__ import annotations

from dataclasses import dataclass

from .brauer import BrauerClass2
from .errors import FormSyntaxError, UnknownVariableError
from .fields import FieldDesc, SquareClassElem, canonical_square_class
from .forms import QForm, orthogonal_sum, tensor
from .pfister import PfisterSpec

__all__ = [
    "CoeffExpr",
    "DiagExpr",
    "PfisterExpr",
    "SumExpr",
    "TensorExpr",
    "ScaledExpr",
    "FormProgram",
    "parse_form_expr",
    "parse_qform",
    "parse_field",
    "parse_pfister_spec",
    "parse_brauer_class",
    "elaborate",
    "elaborate_coeff",
    "print_program",
    "print_form",
]

_RESERVED = {"pf", "over", "Q", "Fp"}


# ---------------------------------------------------------------- tokens

_MULTI = ("(+)", "(*)", "[[", "]]")
_SINGLE = "<>(),*/^+-"


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | name | symbol | end
    text: str
    pos: int


def _tokenize(text: str):
    toks = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        hit = next((s for s in _MULTI if text.startswith(s, i)), None)
        if hit:
            toks.append(_Tok("symbol", hit, i))
            i += len(hit)
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            toks.append(_Tok("num", text[i:j], i))
            i = j
            continue
        if ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            toks.append(_Tok("name", text[i:j], i))
            i = j
            continue
        if ch in _SINGLE:
            toks.append(_Tok("symbol", ch, i))
            i += 1
            continue
        raise FormSyntaxError(f"unexpected character {ch!r}", i)
    toks.append(_Tok("end", "", n))
    return toks


# ---------------------------------------------------------------- syntax tree


@dataclass(frozen=True)
class CoeffExpr:
    """Signed product of numeric and variable-power factors, order kept."""

    sign: int
    factors: tuple  # ("num", numerator, denominator) | ("var", name, exponent)

    def __str__(self) -> str:
        parts = []
        for f in self.factors:
            if f[0] == "num":
                parts.append(str(f[1]) if f[2] == 1 else f"{f[1]}/{f[2]}")
            else:
                parts.append(f[1] if f[2] == 1 else f"{f[1]}^{f[2]}")
        return ("-" if self.sign < 0 else "") + "*".join(parts)


@dataclass(frozen=True)
class DiagExpr:
    coeffs: tuple


@dataclass(frozen=True)
class PfisterExpr:
    coeffs: tuple


@dataclass(frozen=True)
class SumExpr:
    left: object
    right: object


@dataclass(frozen=True)
class TensorExpr:
    left: object
    right: object


@dataclass(frozen=True)
class ScaledExpr:
    coeff: CoeffExpr
    inner: object


@dataclass(frozen=True)
class FormProgram:
    expr: object
    field: FieldDesc | None


# ---------------------------------------------------------------- parser


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.peek()
        if t.text != text:
            raise FormSyntaxError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)
        return self.take()

    def _opens_form(self) -> bool:
        t = self.peek()
        return t.text in ("<", "(") or (t.kind == "name" and t.text == "pf")

    def parse_program(self) -> FormProgram:
        expr = self.parse_sum()
        fld = None
        if self.peek().text == "over":
            self.take()
            fld = self.parse_field()
        t = self.peek()
        if t.kind != "end":
            raise FormSyntaxError(f"unexpected trailing input {t.text!r}", t.pos)
        return FormProgram(expr, fld)

    def parse_sum(self):
        node = self.parse_prod()
        while self.peek().text == "(+)":
            self.take()
            node = SumExpr(node, self.parse_prod())
        return node

    def parse_prod(self):
        node = self.parse_unary()
        while self.peek().text == "(*)":
            self.take()
            node = TensorExpr(node, self.parse_unary())
        return node

    def parse_unary(self):
        if self._opens_form():
            return self.parse_atom()
        c = self.parse_coeff()
        self.expect("*")
        return ScaledExpr(c, self.parse_unary())

    def parse_atom(self):
        t = self.peek()
        if t.text == "<":
            self.take()
            coeffs = [self.parse_coeff()]
            while self.peek().text == ",":
                self.take()
                coeffs.append(self.parse_coeff())
            self.expect(">")
            return DiagExpr(tuple(coeffs))
        if t.text == "pf":
            self.take()
            self.expect("(")
            coeffs = [self.parse_coeff()]
            while self.peek().text == ",":
                self.take()
                coeffs.append(self.parse_coeff())
            self.expect(")")
            return PfisterExpr(tuple(coeffs))
        if t.text == "(":
            self.take()
            node = self.parse_sum()
            self.expect(")")
            return node
        raise FormSyntaxError(f"form expected, found {t.text or 'end of input'!r}", t.pos)

    def parse_coeff(self) -> CoeffExpr:
        sign = 1
        t = self.peek()
        if t.text in ("+", "-"):
            self.take()
            if t.text == "-":
                sign = -1
        factors = [self.parse_cfactor()]
        while self.peek().text == "*":
            mark = self.i
            self.take()
            if self._opens_form():
                self.i = mark  # the '*' belongs to a scalar multiple
                break
            factors.append(self.parse_cfactor())
        return CoeffExpr(sign, tuple(factors))

    def parse_cfactor(self):
        t = self.peek()
        if t.kind == "num":
            self.take()
            num = int(t.text)
            den = 1
            if self.peek().text == "/":
                self.take()
                d = self.peek()
                if d.kind != "num":
                    raise FormSyntaxError("denominator expected after '/'", d.pos)
                self.take()
                den = int(d.text)
            return ("num", num, den)
        if t.kind == "name":
            if t.text in _RESERVED:
                raise FormSyntaxError(f"{t.text!r} is reserved", t.pos)
            self.take()
            exp = 1
            if self.peek().text == "^":
                self.take()
                neg = False
                if self.peek().text == "-":
                    self.take()
                    neg = True
                e = self.peek()
                if e.kind != "num":
                    raise FormSyntaxError("exponent expected after '^'", e.pos)
                self.take()
                exp = -int(e.text) if neg else int(e.text)
            return ("var", t.text, exp)
        raise FormSyntaxError(f"coefficient expected, found {t.text or 'end of input'!r}", t.pos)

    def parse_field(self) -> FieldDesc:
        t = self.peek()
        if t.text == "Q":
            self.take()
            fld = FieldDesc.rationals()
        elif t.text == "Fp":
            self.take()
            self.expect("(")
            p = self.peek()
            if p.kind != "num":
                raise FormSyntaxError("prime expected in Fp(...)", p.pos)
            self.take()
            self.expect(")")
            fld = FieldDesc.prime_field(int(p.text))
        else:
            raise FormSyntaxError("field must be Q or Fp(p)", t.pos)
        while self.peek().text == "[[":
            self.take()
            names = [self._tower_var()]
            while self.peek().text == ",":
                self.take()
                names.append(self._tower_var())
            self.expect("]]")
            fld = fld.extend(*names)
        return fld

    def _tower_var(self) -> str:
        v = self.peek()
        if v.kind != "name":
            raise FormSyntaxError("variable name expected", v.pos)
        if v.text in _RESERVED:
            raise FormSyntaxError(f"{v.text!r} is reserved", v.pos)
        self.take()
        return v.text


def parse_form_expr(text: str) -> FormProgram:
    """Text to syntax tree; field elaboration happens separately."""
    return _Parser(text).parse_program()


def parse_field(text: str) -> FieldDesc:
    p = _Parser(text)
    fld = p.parse_field()
    t = p.peek()
    if t.kind != "end":
        raise FormSyntaxError(f"unexpected trailing input {t.text!r}", t.pos)
    return fld


# ---------------------------------------------------------------- elaboration


def elaborate_coeff(c: CoeffExpr, field: FieldDesc) -> SquareClassElem:
    num, den = c.sign, 1
    exps = [0] * field.depth
    for f in c.factors:
        if f[0] == "num":
            num *= f[1]
            den *= f[2]
        else:
            name = f[1]
            if name not in field.tower_vars:
                raise UnknownVariableError(f"variable {name!r} is not declared in {field}")
            exps[field.tower_vars.index(name)] += f[2]
    return canonical_square_class(num, den, tuple(exps), field)


def elaborate(prog: FormProgram, default_field: FieldDesc | None = None) -> QForm:
    field = prog.field or default_field
    if field is None:
        raise FormSyntaxError("no field: add an 'over' clause or supply a default", 0)

    def walk(node) -> QForm:
        if isinstance(node, DiagExpr):
            return QForm(field, tuple(elaborate_coeff(c, field) for c in node.coeffs))
        if isinstance(node, PfisterExpr):
            slots = tuple(elaborate_coeff(c, field) for c in node.coeffs)
            return PfisterSpec(field, slots).expand()
        if isinstance(node, SumExpr):
            return orthogonal_sum(walk(node.left), walk(node.right))
        if isinstance(node, TensorExpr):
            return tensor(walk(node.left), walk(node.right))
        if isinstance(node, ScaledExpr):
            return walk(node.inner).scaled(elaborate_coeff(node.coeff, field))
        raise FormSyntaxError(f"unknown node {type(node).__name__}", 0)

    return walk(prog.expr)


def parse_qform(text: str, default_field: FieldDesc | None = None) -> QForm:
    return elaborate(parse_form_expr(text), default_field)


def parse_pfister_spec(text: str, default_field: FieldDesc | None = None) -> PfisterSpec:
    """A bare pf(...) literal, as needed for ambient and candidate hints."""
    prog = parse_form_expr(text)
    if not isinstance(prog.expr, PfisterExpr):
        raise FormSyntaxError("a bare pf(...) literal is required here", 0)
    field = prog.field or default_field
    if field is None:
        raise FormSyntaxError("no field: add an 'over' clause or supply a default", 0)
    slots = tuple(elaborate_coeff(c, field) for c in prog.expr.coeffs)
    return PfisterSpec(field, slots)


def parse_brauer_class(text: str, field: FieldDesc) -> BrauerClass2:
    """Sums of quaternion symbols: (a,b) + (c,d) + ..."""
    p = _Parser(text)
    pairs = []
    while True:
        p.expect("(")
        a = p.parse_coeff()
        p.expect(",")
        b = p.parse_coeff()
        p.expect(")")
        pairs.append((elaborate_coeff(a, field), elaborate_coeff(b, field)))
        if p.peek().text != "+":
            break
        p.take()
    t = p.peek()
    if t.kind != "end":
        raise FormSyntaxError(f"unexpected trailing input {t.text!r}", t.pos)
    return BrauerClass2(field, pairs)


# ---------------------------------------------------------------- printing

_PREC = {SumExpr: 0, TensorExpr: 1, ScaledExpr: 2, DiagExpr: 3, PfisterExpr: 3}


def _print_node(node, parent_prec: int) -> str:
    prec = _PREC[type(node)]
    if isinstance(node, DiagExpr):
        txt = "<" + ",".join(str(c) for c in node.coeffs) + ">"
    elif isinstance(node, PfisterExpr):
        txt = "pf(" + ",".join(str(c) for c in node.coeffs) + ")"
    elif isinstance(node, SumExpr):
        txt = _print_node(node.left, 0) + " (+) " + _print_node(node.right, 1)
    elif isinstance(node, TensorExpr):
        txt = _print_node(node.left, 1) + " (*) " + _print_node(node.right, 2)
    else:
        # nested scalars parenthesize so the coefficient stays unambiguous
        txt = str(node.coeff) + "*" + _print_node(node.inner, 3)
    return "(" + txt + ")" if prec < parent_prec else txt


def print_program(prog: FormProgram) -> str:
    txt = _print_node(prog.expr, 0)
    if prog.field is not None:
        txt += f" over {prog.field}"
    return txt


def print_form(q: QForm) -> str:
    """Canonical printout; parse_qform inverts it."""
    return str(q) + f" over {q.field}"

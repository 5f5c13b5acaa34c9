"""Exact multivariate Laurent polynomials used as concrete field elements.

A value is a finite sum of terms c * x1^e1 * ... * xn^en with integer
exponents (negative allowed), one exponent slot per tower variable,
innermost variable first.  Coefficients are Fractions over a rational base
and residues mod p over F_p.  These polynomials are dense enough to witness
isotropy and to sample represented values; full Laurent series are never
needed because every computation here terminates after finitely many terms.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DegenerateElementError, FieldMismatchError, ShapeError
from .fields import FieldDesc, SquareClassElem, canonical_square_class

__all__ = ["LaurentPoly"]


class LaurentPoly:
    """Immutable Laurent polynomial over a tower field."""

    __slots__ = ("field", "terms")

    def __init__(self, field: FieldDesc, terms: dict | None = None):
        clean = {}
        p = field.p
        for exps, c in (terms or {}).items():
            if len(exps) != field.depth:
                raise ShapeError(
                    f"exponent tuple {exps} over depth-{field.depth} tower"
                )
            if field.base == "Fp":
                c = int(c) % p
            else:
                c = Fraction(c)
            if c:
                clean[tuple(int(e) for e in exps)] = c
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def constant(cls, value, field: FieldDesc) -> "LaurentPoly":
        return cls(field, {(0,) * field.depth: value})

    @classmethod
    def variable(cls, name: str, field: FieldDesc) -> "LaurentPoly":
        if name not in field.tower_vars:
            raise ShapeError(f"{name!r} is not a variable of {field}")
        exps = tuple(1 if v == name else 0 for v in field.tower_vars)
        return cls(field, {exps: 1})

    @classmethod
    def from_square_class(cls, a: SquareClassElem) -> "LaurentPoly":
        """The canonical monomial representative of a square class."""
        return cls(a.field, {a.exps: a.base_part})

    def _check(self, other: "LaurentPoly"):
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPoly(self.field, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.field, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                key = tuple(a + b for a, b in zip(e1, e2))
                out[key] = out.get(key, 0) + c1 * c2
        return LaurentPoly(self.field, out)

    def scale(self, c) -> "LaurentPoly":
        return LaurentPoly(self.field, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.field == other.field
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        return hash((self.field, tuple(sorted(self.terms.items()))))

    def leading_term(self):
        """(exps, coeff) of minimal valuation, top variable most significant."""
        if not self.terms:
            raise DegenerateElementError("zero has no leading term")
        key = min(self.terms, key=lambda e: tuple(reversed(e)))
        return key, self.terms[key]

    def square_class(self) -> SquareClassElem:
        """Square class of a nonzero value.

        The class is that of the leading monomial: the quotient by it is one
        plus something of positive valuation, hence a square by Hensel since
        the residue characteristic is not 2.
        """
        exps, c = self.leading_term()
        if self.field.base == "Fp":
            return canonical_square_class(int(c), 1, exps, self.field)
        f = Fraction(c)
        return canonical_square_class(f.numerator, f.denominator, exps, self.field)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        bits = []
        for exps in sorted(self.terms, key=lambda e: tuple(reversed(e))):
            c = self.terms[exps]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.field.tower_vars, exps)
                if e
            )
            if mono:
                head = "" if c == 1 else ("-" if c == -1 else f"{c}*")
                bits.append(head + mono)
            else:
                bits.append(str(c))
        return " + ".join(bits).replace("+ -", "- ")

    __repr__ = __str__

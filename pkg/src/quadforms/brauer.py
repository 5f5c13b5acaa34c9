"""2-torsion Brauer classes as sums of quaternion symbols.

A class is a multiset of symbol pairs (a, b) of square classes, reduced by
the symbol identities (1,b) = 1, (a,-a) = 1, (a,a) = (a,-1), symmetry, and
even-multiplicity cancellation.  Equality is semantic: two classes are equal
when their sum is trivial, decided by local invariants over Q and by residue
splitting over towers.  Symbol normalization alone is not a normal form.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import FieldMismatchError, UnsupportedClassError
from .fields import (
    FieldDesc,
    Place,
    SquareClassElem,
    hilbert_symbol_int,
    relevant_odd_primes,
    square_class,
)
from .forms import QForm, is_isotropic

__all__ = [
    "BrauerClass2",
    "CanonicalClass",
    "hasse_invariant",
    "clifford_invariant",
    "canonicalize_class",
    "is_trivial",
    "schur_index",
]


def _as_class(v, field: FieldDesc) -> SquareClassElem:
    if isinstance(v, SquareClassElem):
        if v.field != field:
            raise FieldMismatchError(f"{v.field} vs {field}")
        return v
    return square_class(int(v), field)


def _normalize(field: FieldDesc, pairs):
    kept = []
    for a, b in pairs:
        a = _as_class(a, field)
        b = _as_class(b, field)
        if a.is_one or b.is_one:
            continue
        if a == b:
            b = square_class(-1, field)  # (a,a) = (a,-1)
        if b == a.neg():
            continue
        if b.sort_key() < a.sort_key():
            a, b = b, a
        kept.append((a, b))
    counts = Counter(kept)
    out = [s for s, k in counts.items() if k % 2]
    out.sort(key=lambda s: (s[0].sort_key(), s[1].sort_key()))
    return tuple(out)


class BrauerClass2:
    """A sum of quaternion symbols over a fixed field; its own inverse."""

    __slots__ = ("field", "symbols")

    def __init__(self, field: FieldDesc, pairs=()):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "symbols", _normalize(field, pairs))

    def __setattr__(self, name, value):
        raise AttributeError("BrauerClass2 is immutable")

    @classmethod
    def trivial(cls, field: FieldDesc) -> "BrauerClass2":
        return cls(field)

    @classmethod
    def symbol(cls, a, b, field: FieldDesc) -> "BrauerClass2":
        return cls(field, [(a, b)])

    def plus(self, other: "BrauerClass2") -> "BrauerClass2":
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return BrauerClass2(self.field, self.symbols + other.symbols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BrauerClass2):
            return NotImplemented
        return is_trivial(self.plus(other))

    __hash__ = None

    def __str__(self) -> str:
        if not self.symbols:
            return "trivial"
        return " + ".join(f"({a},{b})" for a, b in self.symbols)

    __repr__ = __str__


def hasse_invariant(q: QForm) -> BrauerClass2:
    """Sum of (a_i, a_j) over i < j."""
    pairs = []
    cs = q.coeffs
    for i in range(len(cs)):
        for j in range(i + 1, len(cs)):
            pairs.append((cs[i], cs[j]))
    return BrauerClass2(q.field, pairs)


def clifford_invariant(q: QForm) -> BrauerClass2:
    """Brauer class of the Clifford algebra (even Clifford for odd dimension).

    Computed from the Hasse invariant s and determinant d by the residue of
    the dimension mod 8: r in {1,2}: s; {3,4}: s+(-1,-d); {5,6}: s+(-1,-1);
    {7,0}: s+(-1,d).
    """
    s = hasse_invariant(q)
    d = q.det()
    minus_one = square_class(-1, q.field)
    r = q.dim % 8
    if r in (1, 2):
        return s
    if r in (3, 4):
        return s.plus(BrauerClass2(q.field, [(minus_one, d.neg())]))
    if r in (5, 6):
        return s.plus(BrauerClass2(q.field, [(minus_one, minus_one)]))
    return s.plus(BrauerClass2(q.field, [(minus_one, d)]))


def _split_top(c: BrauerClass2):
    """Write c = C0 + (x_top, ram) with C0 and ram free of the top variable."""
    down = c.field.drop_top()
    ram = square_class(1, down)
    syms = []
    for a, b in c.symbols:
        u = SquareClassElem(down, a.base_part, a.exps[:-1])
        v = SquareClassElem(down, b.base_part, b.exps[:-1])
        ea, eb = a.exps[-1], b.exps[-1]
        if ea and eb:
            # (ux, vx) = (ux, -uv) = (u, -uv) + (x, -uv)
            m = u.times(v).neg()
            syms.append((u, m))
            ram = ram.times(m)
        elif ea:
            syms.append((u, v))
            ram = ram.times(v)
        elif eb:
            syms.append((u, v))
            ram = ram.times(u)
        else:
            syms.append((u, v))
    return BrauerClass2(down, syms), ram


@dataclass(frozen=True)
class CanonicalClass:
    """Residue decomposition of a Brauer class down the whole tower.

    ramifications[k] is the unit ramification class attached to tower
    variable k (innermost first) and lives over the depth-k field; base is
    the fully split class over the depth-0 field.
    """

    field: FieldDesc
    base: BrauerClass2
    ramifications: tuple[SquareClassElem, ...]

    def top(self):
        """(C0 over the one-shallower field, top ramification)."""
        down = self.field.drop_top()
        sub = CanonicalClass(down, self.base, self.ramifications[:-1])
        return sub.to_class(), self.ramifications[-1]

    def to_class(self) -> BrauerClass2:
        pairs = [
            (a.lift(self.field), b.lift(self.field)) for a, b in self.base.symbols
        ]
        for k, ram in enumerate(self.ramifications):
            if not ram.is_one:
                bits = tuple(1 if i == k else 0 for i in range(self.field.depth))
                xk = SquareClassElem(self.field, 1, bits)
                pairs.append((xk, ram.lift(self.field)))
        return BrauerClass2(self.field, pairs)


def canonicalize_class(c: BrauerClass2) -> CanonicalClass:
    """Split off one ramification class per tower variable, outermost first."""
    rams = []
    cur = c
    while cur.field.depth > 0:
        cur, ram = _split_top(cur)
        rams.append(ram)
    return CanonicalClass(c.field, cur, tuple(reversed(rams)))


def _trivial_rational(c: BrauerClass2) -> bool:
    ints = [x.base_part for s in c.symbols for x in s]
    places = [Place.real(), Place.prime(2)]
    places += [Place.prime(p) for p in relevant_odd_primes(ints)]
    for v in places:
        inv = 1
        for a, b in c.symbols:
            inv *= hilbert_symbol_int(a.base_part, b.base_part, v)
        if inv != 1:
            return False
    return True


def is_trivial(c: BrauerClass2) -> bool:
    """Does c vanish in the Brauer group?

    Over towers the group splits as (base classes) + (square classes of
    ramification), so c is trivial iff the residue class is and the top
    ramification is a square; finite base fields contribute nothing.
    """
    if c.field.depth > 0:
        c0, ram = _split_top(c)
        return ram.is_one and is_trivial(c0)
    if c.field.base == "Fp":
        return True
    return _trivial_rational(c)


def _albert_form(sym1, sym2, field: FieldDesc) -> QForm:
    a, b = sym1
    c, d = sym2
    return QForm(
        field,
        (a, b, a.times(b).neg(), c.neg(), d.neg(), c.times(d)),
    )


def schur_index(c: BrauerClass2) -> int:
    """Index of the division algebra in the class: 1, 2, or 4.

    Nontrivial 2-torsion classes over Q always have index 2.  Over towers a
    one-symbol class is a division quaternion algebra; a two-symbol class is
    settled by Albert's criterion (index 4 iff the associated 6-dimensional
    form is anisotropic).  A class whose presentation cannot be brought down
    to two symbols is out of scope.
    """
    if is_trivial(c):
        return 1
    if c.field.depth == 0:
        return 2
    syms = c.symbols
    if len(syms) == 1:
        return 2
    if len(syms) == 2:
        albert = _albert_form(syms[0], syms[1], c.field)
        return 2 if is_isotropic(albert) else 4
    redone = canonicalize_class(c).to_class()
    if len(redone.symbols) < len(syms):
        return schur_index(redone)
    raise UnsupportedClassError(
        f"class with {len(syms)} symbols does not reduce to a two-symbol presentation"
    )

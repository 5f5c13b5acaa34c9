"""Square-class arithmetic over the supported ground fields.

Supported fields are Q, prime fields F_p for odd p, and iterated Laurent
series towers over either base.  A nonzero element is tracked up to squares
only:

* over Q a class is named by its squarefree integer part;
* over F_p by 1 or by a fixed least positive non-residue;
* each tower variable contributes one exponent bit.

Hensel's lemma (valid in residue characteristic 0 or odd) makes every unit
series with square residue a square, so the residue class together with the
bit vector determines the square class completely.  All operations below are
exact integer arithmetic; nothing is ever approximated.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from sympy import factorint, isprime

from .errors import (
    DegenerateElementError,
    FieldMismatchError,
    NoOrderingError,
    NotATowerError,
    NotAUnitError,
    ShapeError,
    UnsupportedFieldError,
)

__all__ = [
    "FieldDesc",
    "SquareClassElem",
    "Ordering",
    "Place",
    "canonical_square_class",
    "square_class",
    "legendre_symbol",
    "least_nonresidue",
    "hilbert_symbol",
    "hilbert_symbol_int",
    "hilbert_symbol_oracle",
    "residue_split",
    "sign_at",
    "all_orderings",
    "relevant_odd_primes",
    "squarefree_part",
]


@dataclass(frozen=True)
class FieldDesc:
    """A computable field: base Q or F_p plus a tuple of Laurent variables.

    ``tower_vars`` is ordered innermost first, so ``FieldDesc("Q", None,
    ("x", "y"))`` denotes Q((x))((y)) and the top (outermost) variable is
    ``y``.
    """

    base: str
    p: int | None = None
    tower_vars: tuple[str, ...] = ()

    def __post_init__(self):
        if self.base not in ("Q", "Fp"):
            raise UnsupportedFieldError(f"unknown base field kind {self.base!r}")
        if self.base == "Fp":
            if self.p is None or self.p == 2 or not isprime(self.p):
                raise UnsupportedFieldError(f"base F_p needs an odd prime, got {self.p}")
        elif self.p is not None:
            raise UnsupportedFieldError("rational base takes no characteristic")
        if len(set(self.tower_vars)) != len(self.tower_vars):
            raise UnsupportedFieldError("tower variables must be distinct")
        for v in self.tower_vars:
            if not v or not (v[0].isalpha() or v[0] == "_"):
                raise UnsupportedFieldError(f"bad variable name {v!r}")

    @classmethod
    def rationals(cls) -> "FieldDesc":
        return cls("Q")

    @classmethod
    def prime_field(cls, p: int) -> "FieldDesc":
        return cls("Fp", p)

    @property
    def depth(self) -> int:
        return len(self.tower_vars)

    @property
    def top_var(self) -> str:
        if not self.tower_vars:
            raise NotATowerError("field has no Laurent variables")
        return self.tower_vars[-1]

    @property
    def rational_base(self) -> bool:
        return self.base == "Q"

    def extend(self, *names: str) -> "FieldDesc":
        return FieldDesc(self.base, self.p, self.tower_vars + tuple(names))

    def drop_top(self) -> "FieldDesc":
        if not self.tower_vars:
            raise NotATowerError("field has no Laurent variables")
        return FieldDesc(self.base, self.p, self.tower_vars[:-1])

    def extends(self, other: "FieldDesc") -> bool:
        """True when self is other with zero or more extra outer variables."""
        return (
            self.base == other.base
            and self.p == other.p
            and self.tower_vars[: len(other.tower_vars)] == other.tower_vars
        )

    def __str__(self) -> str:
        txt = "Q" if self.base == "Q" else f"Fp({self.p})"
        if self.tower_vars:
            txt += "[[" + ",".join(self.tower_vars) + "]]"
        return txt


@lru_cache(maxsize=None)
def least_nonresidue(p: int) -> int:
    """Least positive quadratic non-residue mod an odd prime."""
    for k in range(2, p):
        if pow(k, (p - 1) // 2, p) == p - 1:
            return k
    raise NotAUnitError(f"{p} has no non-residue; not an odd prime")


def legendre_symbol(a: int, p: int) -> int:
    """Legendre symbol (a|p) in {+1, -1} via Euler's criterion; p must not divide a."""
    if not isprime(p) or p == 2:
        raise NotAUnitError(f"legendre symbol needs an odd prime, got {p}")
    if a % p == 0:
        raise NotAUnitError(f"{a} is not a unit mod {p}")
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def squarefree_part(n: int) -> int:
    """Squarefree part of a nonzero integer, sign preserved."""
    if n == 0:
        raise DegenerateElementError("zero has no square class")
    out = -1 if n < 0 else 1
    for q, e in factorint(abs(n)).items():
        if e % 2:
            out *= q
    return out


def _mul_squarefree(a: int, b: int) -> int:
    # For squarefree a, b the squarefree part of a*b is (a//g)*(b//g), g = gcd.
    g = gcd(a, b)
    return (a // g) * (b // g)


@dataclass(frozen=True)
class SquareClassElem:
    """A nonzero square class: canonical base part plus one bit per variable."""

    field: FieldDesc
    base_part: int
    exps: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.exps) != self.field.depth:
            raise ShapeError(
                f"exponent vector of length {len(self.exps)} over depth-{self.field.depth} tower"
            )
        if any(e not in (0, 1) for e in self.exps):
            raise ShapeError("exponent bits must be 0 or 1")
        if self.base_part == 0:
            raise DegenerateElementError("zero has no square class")

    @property
    def is_one(self) -> bool:
        return self.base_part == 1 and not any(self.exps)

    def times(self, other: "SquareClassElem") -> "SquareClassElem":
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        bits = tuple(a ^ b for a, b in zip(self.exps, other.exps))
        if self.field.base == "Q":
            base = _mul_squarefree(self.base_part, other.base_part)
        else:
            p = self.field.p
            v = (self.base_part * other.base_part) % p
            base = 1 if legendre_symbol(v, p) == 1 else least_nonresidue(p)
        return SquareClassElem(self.field, base, bits)

    def neg(self) -> "SquareClassElem":
        return self.times(square_class(-1, self.field))

    def lift(self, field: FieldDesc) -> "SquareClassElem":
        """Embed into a tower extending this element's field by outer variables."""
        if not field.extends(self.field):
            raise FieldMismatchError(f"{field} does not extend {self.field}")
        pad = field.depth - self.field.depth
        return SquareClassElem(field, self.base_part, self.exps + (0,) * pad)

    def sort_key(self):
        return (self.exps, self.base_part)

    def __str__(self) -> str:
        names = [v for v, e in zip(self.field.tower_vars, self.exps) if e]
        if not names:
            return str(self.base_part)
        head = "" if self.base_part == 1 else ("-" if self.base_part == -1 else f"{self.base_part}*")
        return head + "*".join(names)


def canonical_square_class(
    numerator: int,
    denominator: int = 1,
    monomial: tuple[int, ...] = (),
    field: FieldDesc = FieldDesc("Q"),
) -> SquareClassElem:
    """Canonicalize numerator/denominator * (monomial in the tower variables).

    The monomial is an integer exponent vector, one entry per tower variable,
    reduced mod 2.  Raises DegenerateElementError when the value is zero in
    the field (including p | numerator over F_p).
    """
    if denominator == 0:
        raise DegenerateElementError("zero denominator")
    if numerator == 0:
        raise DegenerateElementError("zero has no square class")
    if len(monomial) != field.depth:
        raise ShapeError(
            f"monomial of length {len(monomial)} over depth-{field.depth} tower"
        )
    bits = tuple(e % 2 for e in monomial)
    if field.base == "Q":
        base = squarefree_part(numerator * denominator)
    else:
        p = field.p
        if denominator % p == 0:
            raise DegenerateElementError(f"denominator vanishes mod {p}")
        if numerator % p == 0:
            raise DegenerateElementError(f"value vanishes mod {p}")
        v = (numerator * pow(denominator, -1, p)) % p
        base = 1 if legendre_symbol(v, p) == 1 else least_nonresidue(p)
    return SquareClassElem(field, base, bits)


def square_class(n: int, field: FieldDesc = FieldDesc("Q")) -> SquareClassElem:
    """Shorthand for the class of a plain integer over ``field``."""
    return canonical_square_class(n, 1, (0,) * field.depth, field)


def residue_split(a: SquareClassElem) -> tuple[SquareClassElem, int]:
    """Split off the top variable: returns (unit part one level down, top bit)."""
    if a.field.depth < 1:
        raise NotATowerError("residue_split needs at least one Laurent variable")
    down = a.field.drop_top()
    return SquareClassElem(down, a.base_part, a.exps[:-1]), a.exps[-1]


@dataclass(frozen=True)
class Ordering:
    """A field ordering: the unique one on Q plus a sign choice per variable.

    Each Laurent variable is an infinitesimal whose sign may be chosen
    freely; that enumerates all orderings of the tower.
    """

    field: FieldDesc
    var_signs: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.field.rational_base:
            raise NoOrderingError(f"{self.field} has no orderings")
        if len(self.var_signs) != self.field.depth:
            raise ShapeError("one sign per tower variable required")
        if any(s not in (1, -1) for s in self.var_signs):
            raise ShapeError("signs must be +1 or -1")


def all_orderings(field: FieldDesc):
    """Yield every ordering of a rational-base tower (2^depth of them)."""
    if not field.rational_base:
        raise NoOrderingError(f"{field} has no orderings")
    for signs in itertools.product((1, -1), repeat=field.depth):
        yield Ordering(field, signs)


def sign_at(a: SquareClassElem, ordering: Ordering) -> int:
    """Sign of a square class at an ordering; well defined since squares are positive."""
    if a.field != ordering.field:
        raise FieldMismatchError(f"{a.field} vs {ordering.field}")
    s = 1 if a.base_part > 0 else -1
    for bit, vs in zip(a.exps, ordering.var_signs):
        if bit:
            s *= vs
    return s


@dataclass(frozen=True)
class Place:
    """A place of Q: the real place or a prime (2 allowed)."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind not in ("real", "prime"):
            raise UnsupportedFieldError(f"unknown place kind {self.kind!r}")
        if self.kind == "prime" and (self.p is None or not isprime(self.p)):
            raise UnsupportedFieldError(f"{self.p} is not prime")
        if self.kind == "real" and self.p is not None:
            raise UnsupportedFieldError("the real place has no prime")

    @classmethod
    def real(cls) -> "Place":
        return cls("real")

    @classmethod
    def prime(cls, p: int) -> "Place":
        return cls("prime", p)

    def __str__(self) -> str:
        return "Real" if self.kind == "real" else f"p={self.p}"


def _two_adic_split(n: int) -> tuple[int, int]:
    a = 0
    while n % 2 == 0:
        n //= 2
        a += 1
    return a, n


def hilbert_symbol_int(a: int, b: int, place: Place) -> int:
    """Hilbert symbol (a,b) at a place of Q for nonzero integers.

    Closed form: the sign rule at the real place, the tame formula at odd p,
    and the epsilon/omega mod-8 formula at p = 2.
    """
    if a == 0 or b == 0:
        raise DegenerateElementError("hilbert symbol of zero")
    a = squarefree_part(a)
    b = squarefree_part(b)
    if place.kind == "real":
        return -1 if (a < 0 and b < 0) else 1
    p = place.p
    if p == 2:
        alpha, u = _two_adic_split(a)
        beta, w = _two_adic_split(b)

        def eps(n):
            return ((n - 1) // 2) % 2

        def omega(n):
            return ((n * n - 1) // 8) % 2

        e = eps(u) * eps(w) + alpha * omega(w) + beta * omega(u)
        return -1 if e % 2 else 1
    alpha = 1 if a % p == 0 else 0
    beta = 1 if b % p == 0 else 0
    u = a // p if alpha else a
    w = b // p if beta else b
    out = 1
    if alpha and beta and ((p - 1) // 2) % 2:
        out = -out
    if beta:
        out *= legendre_symbol(u, p)
    if alpha:
        out *= legendre_symbol(w, p)
    return out


def hilbert_symbol(a: SquareClassElem, b: SquareClassElem, place: Place) -> int:
    """Hilbert symbol of two rational square classes at a place of Q."""
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if a.field.depth > 0 or not a.field.rational_base:
        raise UnsupportedFieldError("hilbert symbols are computed over the rational base only")
    return hilbert_symbol_int(a.base_part, b.base_part, place)


@lru_cache(maxsize=256)
def _square_sets(modulus: int, p: int):
    squares = set()
    unit_squares = set()
    for z in range(modulus):
        s = (z * z) % modulus
        squares.add(s)
        if z % p:
            unit_squares.add(s)
    return squares, unit_squares


def hilbert_symbol_oracle(a: int, b: int, place: Place) -> int:
    """Independent Hilbert symbol by exhaustive solvability of z^2 = a x^2 + b y^2.

    Over Q_p a primitive solution mod p^k certifies solvability once k is
    past the Newton bound for the quadratic: k = 3 at odd p, k = 5 at p = 2
    (coefficients are squarefree, so every partial derivative at a primitive
    point has valuation at most 1 + v_p(2)).  Enumerates all (x, y) mod p^k
    and tests membership in the precomputed square sets, so it shares no code
    with the closed-form symbol.  Meant for small primes; cost is p^(2k).
    """
    if a == 0 or b == 0:
        raise DegenerateElementError("hilbert symbol of zero")
    a = squarefree_part(a)
    b = squarefree_part(b)
    if place.kind == "real":
        return -1 if (a < 0 and b < 0) else 1
    p = place.p
    if p > 50:
        raise ResourceWarning("oracle enumeration is only meant for small primes")
    k = 5 if p == 2 else 3
    modulus = p**k
    squares, unit_squares = _square_sets(modulus, p)
    am = a % modulus
    bm = b % modulus
    for x in range(modulus):
        ax = (am * x * x) % modulus
        x_unit = x % p != 0
        for y in range(modulus):
            val = (ax + bm * y * y) % modulus
            if x_unit or y % p:
                if val in squares:
                    return 1
            elif val in unit_squares:
                return 1
    return -1


def relevant_odd_primes(values) -> list[int]:
    """Odd primes dividing any of the given nonzero integers, sorted."""
    out: set[int] = set()
    for v in values:
        for q in factorint(abs(v)):
            if q != 2:
                out.add(q)
    return sorted(out)

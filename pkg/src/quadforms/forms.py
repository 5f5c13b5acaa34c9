"""Diagonal quadratic forms: composition, isotropy, Witt decomposition.

Isotropy and Witt indices are computed by closed-form theory wherever one
exists (finite fields; Hasse-Minkowski over Q; Springer recursion over
Laurent towers).  Anisotropic parts over Q are produced constructively by
isotropic-vector search and hyperbolic splitting, so the output is always a
concrete diagonal form.  A separate brute-force searcher acts as an
independent oracle for the structural algorithms.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import (
    DegenerateElementError,
    FieldMismatchError,
    ResourceExceededError,
    ShapeError,
)
from .fields import (
    FieldDesc,
    Ordering,
    Place,
    SquareClassElem,
    hilbert_symbol_int,
    legendre_symbol,
    relevant_odd_primes,
    sign_at,
    square_class,
    squarefree_part,
)
from .laurent import LaurentPoly

__all__ = [
    "QForm",
    "WittDecomp",
    "SearchBudget",
    "orthogonal_sum",
    "tensor",
    "determinant",
    "signed_det",
    "is_isotropic",
    "witt_index",
    "witt_decompose",
    "anisotropic_part",
    "isometric",
    "is_subform",
    "subform_complement",
    "represents",
    "signature",
    "hyperbolic",
    "brute_force_isotropy",
]


@dataclass(frozen=True)
class QForm:
    """A regular diagonal form a1 X1^2 + ... + an Xn^2 given by square classes."""

    field: FieldDesc
    coeffs: tuple[SquareClassElem, ...]

    def __post_init__(self):
        for c in self.coeffs:
            if c.field != self.field:
                raise FieldMismatchError(f"coefficient over {c.field} in form over {self.field}")

    @classmethod
    def diagonal(cls, values, field: FieldDesc) -> "QForm":
        """Build a form from integers or square classes; integers are canonicalized."""
        out = []
        for v in values:
            if isinstance(v, SquareClassElem):
                if v.field != field:
                    raise FieldMismatchError(f"{v.field} vs {field}")
                out.append(v)
            else:
                out.append(square_class(int(v), field))
        return cls(field, tuple(out))

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    @property
    def is_empty(self) -> bool:
        return not self.coeffs

    def perp(self, other: "QForm") -> "QForm":
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return QForm(self.field, self.coeffs + other.coeffs)

    def tensor(self, other: "QForm") -> "QForm":
        if self.field != other.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return QForm(
            self.field,
            tuple(a.times(b) for a in self.coeffs for b in other.coeffs),
        )

    def scaled(self, c) -> "QForm":
        if not isinstance(c, SquareClassElem):
            c = square_class(int(c), self.field)
        if c.field != self.field:
            raise FieldMismatchError(f"{c.field} vs {self.field}")
        return QForm(self.field, tuple(c.times(a) for a in self.coeffs))

    def neg(self) -> "QForm":
        return QForm(self.field, tuple(a.neg() for a in self.coeffs))

    def det(self) -> SquareClassElem:
        out = square_class(1, self.field)
        for c in self.coeffs:
            out = out.times(c)
        return out

    def __str__(self) -> str:
        return "<" + ",".join(str(c) for c in self.coeffs) + ">"

    __repr__ = __str__


def orthogonal_sum(p: QForm, q: QForm) -> QForm:
    return p.perp(q)


def tensor(p: QForm, q: QForm) -> QForm:
    return p.tensor(q)


def determinant(q: QForm) -> SquareClassElem:
    # dim 0: det is 1 by convention
    return q.det()


def signed_det(q: QForm) -> SquareClassElem:
    """(-1)^(n(n-1)/2) times the determinant."""
    n = q.dim
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return q.det().times(square_class(sign, q.field))


def hyperbolic(n: int, field: FieldDesc) -> QForm:
    """n orthogonal copies of the hyperbolic plane <1,-1>."""
    one = square_class(1, field)
    return QForm(field, (one, one.neg()) * n)


def signature(q: QForm, P: Ordering) -> int:
    if P.field != q.field:
        raise FieldMismatchError(f"{P.field} vs {q.field}")
    return sum(sign_at(c, P) for c in q.coeffs)


@dataclass(frozen=True)
class WittDecomp:
    witt_index: int
    anisotropic_part: QForm


# Hasse-Minkowski machinery over the rational base (tower depth 0).
# Coefficients are handled as squarefree integers throughout.


def _mul_sf(a: int, b: int) -> int:
    from math import gcd

    g = gcd(a, b)
    return (a // g) * (b // g)


def _places_for(ints) -> tuple[Place, ...]:
    places = [Place.real(), Place.prime(2)]
    places += [Place.prime(p) for p in relevant_odd_primes(ints)]
    return tuple(places)


def _hasse_symbols(ints, places) -> dict:
    # s_v = product over i<j of (a_i, a_j)_v, computed via prefix products
    out = {v: 1 for v in places}
    prefix = 1
    for j, a in enumerate(ints):
        if j:
            for v in places:
                out[v] *= hilbert_symbol_int(prefix, a, v)
        prefix = _mul_sf(prefix, a)
    return out


def _square_locally(d: int, place: Place) -> bool:
    # d squarefree
    if d == 1:
        return True
    if place.kind == "real":
        return d > 0
    if place.p == 2:
        return d % 2 == 1 and d % 8 == 1
    return d % place.p != 0 and legendre_symbol(d, place.p) == 1


def _invariant_isotropic(n: int, d: int, hasse: dict, sgn: int, places) -> bool:
    """Isotropy over Q from (dim, det, Hasse symbols, signature)."""
    if n <= 1:
        return False
    if n == 2:
        return d == -1
    if n == 3:
        return all(hasse[v] == hilbert_symbol_int(-1, -d, v) for v in places)
    if n == 4:
        return all(
            (not _square_locally(d, v)) or hasse[v] == hilbert_symbol_int(-1, -1, v)
            for v in places
        )
    return abs(sgn) < n


def _witt_index_rational(ints) -> int:
    """Witt index over Q by invariant iteration: peel hyperbolic planes
    on the level of (dim, det, Hasse, signature) only."""
    n = len(ints)
    if n == 0:
        return 0
    places = _places_for(ints)
    hasse = _hasse_symbols(ints, places)
    d = 1
    for a in ints:
        d = _mul_sf(d, a)
    sgn = sum(1 if a > 0 else -1 for a in ints)
    i = 0
    while _invariant_isotropic(n, d, hasse, sgn, places):
        n -= 2
        d = squarefree_part(-d)
        # s(q') = s(q) * (-1, det q')_v after removing one hyperbolic plane
        for v in places:
            hasse[v] *= hilbert_symbol_int(-1, d, v)
        i += 1
    return i


def _is_isotropic_rational(ints) -> bool:
    n = len(ints)
    if n <= 1:
        return False
    places = _places_for(ints)
    hasse = _hasse_symbols(ints, places)
    d = 1
    for a in ints:
        d = _mul_sf(d, a)
    sgn = sum(1 if a > 0 else -1 for a in ints)
    return _invariant_isotropic(n, d, hasse, sgn, places)


# Finite prime fields: regular forms are classified by (dim, det).


def _fp_is_isotropic(q: QForm) -> bool:
    if q.dim >= 3:
        return True
    if q.dim == 2:
        return q.det().neg().is_one
    return False


def _fp_decompose(q: QForm) -> WittDecomp:
    n = q.dim
    field = q.field
    if n == 0:
        return WittDecomp(0, q)
    D = q.det()
    minus_one = square_class(-1, field)

    def power(k):
        out = square_class(1, field)
        for _ in range(k % 2):
            out = out.times(minus_one)
        return out

    if n % 2:
        i = (n - 1) // 2
        a = D.times(power(i))
        return WittDecomp(i, QForm(field, (a,)))
    if D == power(n // 2):
        return WittDecomp(n // 2, QForm(field, ()))
    a = D.times(power(n // 2 - 1))
    return WittDecomp(n // 2 - 1, QForm(field, (square_class(1, field), a)))


def _residue_forms(q: QForm) -> tuple[QForm, QForm]:
    """Springer split by the top variable: q = q0 perp x*q1, both one level down."""
    down = q.field.drop_top()
    c0, c1 = [], []
    for c in q.coeffs:
        elem = SquareClassElem(down, c.base_part, c.exps[:-1])
        (c1 if c.exps[-1] else c0).append(elem)
    return QForm(down, tuple(c0)), QForm(down, tuple(c1))


def _lift(q: QForm, field: FieldDesc, top_bit: int) -> QForm:
    return QForm(
        field,
        tuple(SquareClassElem(field, c.base_part, c.exps + (top_bit,)) for c in q.coeffs),
    )


@lru_cache(maxsize=8192)
def is_isotropic(q: QForm) -> bool:
    """Does q represent zero nontrivially?

    Towers recurse through Springer residue forms; base cases are the finite
    field classification and Hasse-Minkowski over Q.
    """
    if q.field.depth > 0:
        q0, q1 = _residue_forms(q)
        return is_isotropic(q0) or is_isotropic(q1)
    if q.field.base == "Fp":
        return _fp_is_isotropic(q)
    return _is_isotropic_rational([c.base_part for c in q.coeffs])


@lru_cache(maxsize=8192)
def witt_index(q: QForm) -> int:
    """Witt index, computed without constructing any splitting."""
    if q.field.depth > 0:
        q0, q1 = _residue_forms(q)
        return witt_index(q0) + witt_index(q1)
    if q.field.base == "Fp":
        return _fp_decompose(q).witt_index
    return _witt_index_rational([c.base_part for c in q.coeffs])


# Constructive splitting over Q.


def _bil(diag, u, w):
    return sum(a * x * y for a, x, y in zip(diag, u, w))


def _find_isotropic_vector(ints, max_evals):
    """A nonzero integer vector with sum a_i v_i^2 = 0, by staged search.

    Searches coordinate subsets of size <= 6 on max-norm shells of growing
    height, then full shells for moderate dimensions.  Only called when a
    vector is known to exist; the evaluation cap guards against witnesses
    lying beyond any practical height.
    """
    n = len(ints)
    evals = 0

    def scan(subset, h):
        nonlocal evals
        k = len(subset)
        for v in itertools.product(range(-h, h + 1), repeat=k):
            if max(abs(c) for c in v) != h:
                continue
            evals += 1
            if evals > max_evals:
                raise ResourceExceededError(
                    f"isotropic-vector search exceeded {max_evals} evaluations"
                )
            if sum(ints[i] * c * c for i, c in zip(subset, v)) == 0:
                out = [0] * n
                for i, c in zip(subset, v):
                    out[i] = c
                return out
        return None

    for h in itertools.count(1):
        for k in range(2, min(n, 6) + 1):
            for subset in itertools.combinations(range(n), k):
                hit = scan(subset, h)
                if hit:
                    return hit
        if 6 < n <= 12:
            hit = scan(tuple(range(n)), h)
            if hit:
                return hit


def _complement_diagonal(ints, v):
    """Diagonal of the orthogonal complement of the hyperbolic plane through v."""
    n = len(ints)
    diag = [Fraction(a) for a in ints]
    vv = [Fraction(c) for c in v]
    j = next(i for i, c in enumerate(vv) if c)
    w0 = [Fraction(0)] * n
    w0[j] = 1 / (diag[j] * vv[j])
    c = _bil(diag, w0, w0) / 2
    w = [a - c * b for a, b in zip(w0, vv)]
    # project the standard basis onto the complement of span(v, w)
    projected = []
    for k in range(n):
        e = [Fraction(0)] * n
        e[k] = Fraction(1)
        bw = _bil(diag, e, w)
        bv = _bil(diag, e, v)
        projected.append([a - bw * p - bv * r for a, p, r in zip(e, vv, w)])
    # extract n-2 independent vectors by Gaussian elimination
    basis = []
    rows = []
    for u in projected:
        row = list(u)
        for piv, r in rows:
            if row[piv]:
                f = row[piv] / r[piv]
                row = [a - f * b for a, b in zip(row, r)]
        piv = next((i for i, a in enumerate(row) if a), None)
        if piv is not None:
            rows.append((piv, row))
            basis.append(u)
        if len(basis) == n - 2:
            break
    # Gram-Schmidt with respect to the bilinear form
    out = []
    vecs = [list(b) for b in basis]
    for i in range(len(vecs)):
        norm = _bil(diag, vecs[i], vecs[i])
        if norm == 0:
            # restricted form is regular, so some later partner pairs nontrivially
            for jj in range(i + 1, len(vecs)):
                if _bil(diag, vecs[i], vecs[jj]):
                    cand = [a + b for a, b in zip(vecs[i], vecs[jj])]
                    if _bil(diag, cand, cand) == 0:
                        cand = [a - b for a, b in zip(vecs[i], vecs[jj])]
                    vecs[i] = cand
                    break
            norm = _bil(diag, vecs[i], vecs[i])
        for jj in range(i + 1, len(vecs)):
            f = _bil(diag, vecs[jj], vecs[i]) / norm
            vecs[jj] = [a - f * b for a, b in zip(vecs[jj], vecs[i])]
        out.append(norm)
    return out


def _decompose_rational(q: QForm, max_evals: int) -> WittDecomp:
    target = _witt_index_rational([c.base_part for c in q.coeffs])
    ints = [c.base_part for c in q.coeffs]
    done = 0
    while done < target:
        # cheap split: <a, -a> is already a hyperbolic plane
        pair = None
        for i in range(len(ints)):
            for j in range(i + 1, len(ints)):
                if ints[j] == -ints[i]:
                    pair = (i, j)
                    break
            if pair:
                break
        if pair:
            i, j = pair
            ints = ints[:i] + ints[i + 1 : j] + ints[j + 1 :]
            done += 1
            continue
        v = _find_isotropic_vector(ints, max_evals)
        norms = _complement_diagonal(ints, v)
        new_ints = []
        for f in norms:
            cls = squarefree_part(f.numerator * f.denominator)
            new_ints.append(cls)
        ints = new_ints
        done += 1
    return WittDecomp(target, QForm.diagonal(ints, q.field))


def witt_decompose(q: QForm, max_evals: int = 4_000_000) -> WittDecomp:
    """Split q as (anisotropic part) perp (witt_index hyperbolic planes).

    The anisotropic part is a concrete diagonal form.  Over Q the splitting
    is found by explicit isotropic vectors; ResourceExceededError signals
    that the evaluation cap was hit before a vector appeared.
    """
    if q.field.depth > 0:
        q0, q1 = _residue_forms(q)
        d0 = witt_decompose(q0, max_evals)
        d1 = witt_decompose(q1, max_evals)
        an = _lift(d0.anisotropic_part, q.field, 0).perp(
            _lift(d1.anisotropic_part, q.field, 1)
        )
        return WittDecomp(d0.witt_index + d1.witt_index, an)
    if q.field.base == "Fp":
        return _fp_decompose(q)
    return _decompose_rational(q, max_evals)


def anisotropic_part(q: QForm, max_evals: int = 4_000_000) -> QForm:
    return witt_decompose(q, max_evals).anisotropic_part


def isometric(q1: QForm, q2: QForm) -> bool:
    """Witt's criterion: equal dimension and q1 perp -q2 split completely."""
    if q1.field != q2.field:
        raise FieldMismatchError(f"{q1.field} vs {q2.field}")
    if q1.dim != q2.dim:
        return False
    return witt_index(q1.perp(q2.neg())) == q1.dim


def is_subform(p: QForm, q: QForm) -> bool:
    """Does q contain p as an orthogonal summand?  Witt cancellation test."""
    if p.field != q.field:
        raise FieldMismatchError(f"{p.field} vs {q.field}")
    return witt_index(q.perp(p.neg())) >= p.dim


def subform_complement(p: QForm, q: QForm, max_evals: int = 4_000_000) -> QForm:
    """A form r with q isometric to p perp r; requires is_subform(p, q)."""
    if not is_subform(p, q):
        raise ShapeError("not a subform; no complement exists")
    d = witt_decompose(q.perp(p.neg()), max_evals)
    return d.anisotropic_part.perp(hyperbolic(d.witt_index - p.dim, q.field))


def represents(q: QForm, c: SquareClassElem) -> bool:
    """Membership of c in the value set D(q)."""
    if c.field != q.field:
        raise FieldMismatchError(f"{c.field} vs {q.field}")
    if q.dim == 0:
        return False
    if is_isotropic(q):
        return True
    return is_isotropic(q.perp(QForm(q.field, (c.neg(),))))


# Independent brute-force isotropy oracle.


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for brute_force_isotropy.

    max_height bounds integer entries over a rational base; exponent_window
    bounds variable exponents per entry ([0, window) in each variable, so
    window 1 means constant entries); max_evals caps total work.  Window 1
    with full residue enumeration already decides isotropy over F_p towers:
    coefficients are monomial square classes, terms with distinct exponent
    patterns cannot cancel, and a cancelling pattern group admits a witness
    with constant entries.
    """

    max_height: int = 3
    exponent_window: int = 1
    max_evals: int = 500_000


class _Counter:
    __slots__ = ("used", "cap")

    def __init__(self, cap):
        self.used = 0
        self.cap = cap

    def spend(self, k=1) -> bool:
        self.used += k
        return self.used <= self.cap


def _blocks_by_pattern(q: QForm):
    """Group coordinate indices by the mod-2 exponent pattern of the coefficient."""
    order = []
    groups = {}
    for i, c in enumerate(q.coeffs):
        if c.exps not in groups:
            groups[c.exps] = []
            order.append(c.exps)
        groups[c.exps].append(i)
    return [(pat, groups[pat]) for pat in order]


def _fp_block_witness(units, p, counter):
    """Lexicographically least nonzero t in [0,p)^k with sum u_i t_i^2 = 0 mod p,
    by meet-in-the-middle over the two halves."""
    k = len(units)
    half = k // 2
    left, right = units[:half], units[half:]
    best = {}
    best_nonzero_for_zero = None
    for t in itertools.product(range(p), repeat=len(right)):
        if not counter.spend():
            return None, True
        s = sum(u * c * c for u, c in zip(right, t)) % p
        if s not in best:
            best[s] = t
        if s == 0 and any(t) and best_nonzero_for_zero is None:
            best_nonzero_for_zero = t
    for t in itertools.product(range(p), repeat=half):
        if not counter.spend():
            return None, True
        s = sum(u * c * c for u, c in zip(left, t)) % p
        need = (-s) % p
        if any(t):
            if need in best:
                return t + best[need], False
        elif need == 0 and best_nonzero_for_zero is not None:
            return t + best_nonzero_for_zero, False
    return None, False


def _fp_block_witness_windowed(units, p, depth, window, counter):
    """Exhaustive windowed search: entries t * x^e with e in [0, window)^depth."""
    k = len(units)
    entry_space = [
        (t, e)
        for t in range(p)
        for e in itertools.product(range(window), repeat=depth)
    ]
    for vec in itertools.product(entry_space, repeat=k):
        if not counter.spend():
            return None, True
        if not any(t for t, _ in vec):
            continue
        acc = {}
        for (t, e), u in zip(vec, units):
            if t:
                key = tuple(2 * a for a in e)
                acc[key] = (acc.get(key, 0) + u * t * t) % p
        if all(v == 0 for v in acc.values()):
            return vec, False
    return None, False


def _q_block_witness(units, max_height, counter):
    for h in range(1, max_height + 1):
        for v in itertools.product(range(-h, h + 1), repeat=len(units)):
            if max(abs(c) for c in v) != h:
                continue
            if not counter.spend():
                return None, True
            if sum(u * c * c for u, c in zip(units, v)) == 0:
                return v, False
    return None, False


def brute_force_isotropy(q: QForm, budget: SearchBudget | None = None):
    """Search for an explicit zero of q; None when the budget finds nothing.

    The witness is a vector of Laurent polynomials with q(w) = 0 exactly.
    Coordinates are grouped into residue blocks (terms from different blocks
    cannot cancel); blocks are scanned in first-appearance order and the
    least witness within a block is returned, so results are deterministic.
    An exhausted budget is inconclusive, not a proof of anisotropy.
    """
    budget = budget or SearchBudget()
    counter = _Counter(budget.max_evals)
    field = q.field
    depth = field.depth
    for pattern, idxs in _blocks_by_pattern(q):
        units = [q.coeffs[i].base_part for i in idxs]
        if field.base == "Fp":
            p = field.p
            if budget.exponent_window <= 1 or depth == 0:
                t, out_of_budget = _fp_block_witness(units, p, counter)
                shifts = None if t is None else [(0,) * depth] * len(t)
            else:
                hit, out_of_budget = _fp_block_witness_windowed(
                    units, p, depth, budget.exponent_window, counter
                )
                t = None if hit is None else [c for c, _ in hit]
                shifts = None if hit is None else [e for _, e in hit]
        else:
            t, out_of_budget = _q_block_witness(units, budget.max_height, counter)
            shifts = None if t is None else [(0,) * depth] * len(t)
        if t is not None:
            witness = [LaurentPoly(field) for _ in range(q.dim)]
            for pos, c, e in zip(idxs, t, shifts):
                witness[pos] = LaurentPoly(field, {tuple(e): c})
            value = LaurentPoly(field)
            for c, w in zip(q.coeffs, witness):
                value = value + LaurentPoly.from_square_class(c) * w * w
            if not value.is_zero:
                raise DegenerateElementError("search produced a non-zero witness")
            return witness
        if out_of_budget:
            return None
    return None

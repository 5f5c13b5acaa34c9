"""Pfister forms: recognition, neighbours, excellence, roundness, and the
generic ascent/descent constructions over fresh Laurent variables.

Recognition of forms similar to a Pfister form is complete in dimensions 1,
2, 4 and 8 (determinant and Clifford criteria); other dimensions need a
candidate.  Neighbour detection without an ambient witness is complete up
to dimension 5, where the even-Clifford Schur index decides.  Everything
constructive is verified by exact isometry checks before being returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .brauer import BrauerClass2, clifford_invariant, is_trivial, schur_index
from .errors import (
    DimensionError,
    FieldMismatchError,
    NoGenericFactorError,
    NotANeighborError,
    NotAnisotropicError,
    UnsupportedClassError,
    WitnessError,
)
from .fields import FieldDesc, SquareClassElem, square_class
from .forms import (
    QForm,
    is_isotropic,
    is_subform,
    isometric,
    represents,
    subform_complement,
)

__all__ = [
    "PfisterSpec",
    "SimilarityResult",
    "NeighborWitness",
    "ExcellenceReport",
    "RoundCheck",
    "DescentResult",
    "expand_pfister",
    "similar_to_pfister",
    "is_neighbor",
    "dim5_neighbor_test",
    "complementary_form",
    "is_excellent",
    "round_check_sampled",
    "generic_ascend",
    "generic_descend",
]


@dataclass(frozen=True)
class PfisterSpec:
    """Slot list a1..an of an n-fold Pfister form <<a1,...,an>>."""

    field: FieldDesc
    slots: tuple[SquareClassElem, ...]

    def __post_init__(self):
        for s in self.slots:
            if s.field != self.field:
                raise FieldMismatchError(f"slot over {s.field} in spec over {self.field}")

    @classmethod
    def of(cls, field: FieldDesc, *values) -> "PfisterSpec":
        out = []
        for v in values:
            out.append(v if isinstance(v, SquareClassElem) else square_class(int(v), field))
        return cls(field, tuple(out))

    @property
    def fold(self) -> int:
        return len(self.slots)

    def expand(self) -> QForm:
        """<<a1,...,an>> = <1,-a1> (x) ... (x) <1,-an>, dimension 2^n."""
        out = QForm.diagonal([1], self.field)
        for a in self.slots:
            out = out.tensor(QForm(self.field, (square_class(1, self.field), a.neg())))
        return out

    def __str__(self) -> str:
        return "<<" + ",".join(str(s) for s in self.slots) + ">>"

    __repr__ = __str__


def expand_pfister(spec: PfisterSpec) -> QForm:
    return spec.expand()


@dataclass(frozen=True)
class SimilarityResult:
    status: str  # similar | not_similar | unknown
    spec: PfisterSpec | None = None
    scalar: SquareClassElem | None = None


def _divide_by_pfister(q: QForm, rho: QForm):
    """Multiplier diagonal m with q isometric to rho (x) m, or None.

    Greedy peeling: any represented value d of an anisotropic multiple of a
    Pfister form splits off d*rho with a multiple as complement, so failure
    at any step refutes divisibility for anisotropic q.
    """
    if rho.dim == 0 or q.dim % rho.dim:
        return None
    rem = q
    mult = []
    while rem.dim:
        d = rem.coeffs[0]
        if not is_subform(rho.scaled(d), rem):
            return None
        rem = subform_complement(rho.scaled(d), rem)
        mult.append(d)
    return QForm(q.field, tuple(mult))


def similar_to_pfister(q: QForm, candidate: PfisterSpec | None = None) -> SimilarityResult:
    """Is q = c * (Pfister form)?  Decided outright in dims 1, 2, 4, 8.

    With a candidate, the scalar c is the first coefficient of q; roundness
    of Pfister forms makes that single choice exhaustive.  Dimensions other
    than 1, 2, 4, 8 without a candidate: non-powers of two are refuted by
    dimension, the rest are unknown.
    """
    if candidate is not None:
        if candidate.field != q.field:
            raise FieldMismatchError(f"{candidate.field} vs {q.field}")
        if q.dim != 2**candidate.fold or q.dim == 0:
            return SimilarityResult("not_similar")
        c = q.coeffs[0]
        if isometric(q, candidate.expand().scaled(c)):
            return SimilarityResult("similar", candidate, c)
        return SimilarityResult("not_similar")
    n = q.dim
    if n == 0 or n & (n - 1):
        return SimilarityResult("not_similar")
    a1 = q.coeffs[0]
    if n == 1:
        return SimilarityResult("similar", PfisterSpec(q.field, ()), a1)
    if n == 2:
        spec = PfisterSpec(q.field, (a1.times(q.coeffs[1]).neg(),))
        return SimilarityResult("similar", spec, a1)
    if n == 4:
        if not q.det().is_one:
            return SimilarityResult("not_similar")
        spec = PfisterSpec(
            q.field,
            (a1.times(q.coeffs[1]).neg(), a1.times(q.coeffs[2]).neg()),
        )
        return SimilarityResult("similar", spec, a1)
    if n == 8:
        if not q.det().is_one or not is_trivial(clifford_invariant(q.scaled(a1))):
            return SimilarityResult("not_similar")
        if is_isotropic(q):
            # determinant and Clifford conditions force hyperbolicity here
            one = square_class(1, q.field)
            return SimilarityResult("similar", PfisterSpec(q.field, (one, one, one)), a1)
        qn = q.scaled(a1)
        pure = subform_complement(QForm.diagonal([1], q.field), qn)
        c = pure.coeffs[0]
        binary = PfisterSpec(q.field, (c.neg(),)).expand()
        sigma = _divide_by_pfister(qn, binary)
        if sigma is None:
            raise WitnessError("slot recovery failed on a form certified similar")
        sub = similar_to_pfister(sigma.scaled(sigma.coeffs[0]))
        if sub.status != "similar":
            raise WitnessError("slot recovery failed on a form certified similar")
        spec = PfisterSpec(q.field, (c.neg(),) + sub.spec.slots)
        if not isometric(q, spec.expand().scaled(a1)):
            raise WitnessError("slot recovery produced a non-isometric candidate")
        return SimilarityResult("similar", spec, a1)
    return SimilarityResult("unknown")


@dataclass(frozen=True)
class NeighborWitness:
    ambient: PfisterSpec
    scalar: SquareClassElem
    complementary: QForm


def is_neighbor(q: QForm, pi: PfisterSpec) -> NeighborWitness | None:
    """Neighbour test against a given ambient Pfister form.

    Succeeds when dim q exceeds half the ambient dimension and q embeds in
    scalar * pi with scalar the first coefficient of q; the complementary
    form is the anisotropic remainder, padded hyperbolically if the ambient
    splits."""
    if pi.field != q.field:
        raise FieldMismatchError(f"{pi.field} vs {q.field}")
    if q.dim == 0 or 2 * q.dim <= 2**pi.fold:
        return None
    scalar = q.coeffs[0]
    ambient = pi.expand().scaled(scalar)
    if not is_subform(q, ambient):
        return None
    return NeighborWitness(pi, scalar, subform_complement(q, ambient))


def complementary_form(q: QForm, pi: PfisterSpec) -> QForm:
    wit = is_neighbor(q, pi)
    if wit is None:
        raise NotANeighborError(f"{q} is not a neighbour of {pi}")
    return wit.complementary


def dim5_neighbor_test(q: QForm) -> bool:
    """Five-dimensional neighbour criterion: even Clifford Schur index <= 2.

    The even Clifford class of <a1,...,a5> is presented directly as the
    two-symbol class (-b2,-b3) + (-b4 b5, b2 b3 b5) with b_i = a1 a_i, which
    equals the mod-8 table value and keeps the Schur index computable over
    towers."""
    if q.dim != 5:
        raise DimensionError(f"dimension-5 test on a {q.dim}-dimensional form")
    a1 = q.coeffs[0]
    b2, b3, b4, b5 = (a1.times(q.coeffs[i]) for i in range(1, 5))
    cls = BrauerClass2(
        q.field,
        [
            (b2.neg(), b3.neg()),
            (b4.times(b5).neg(), b2.times(b3).times(b5)),
        ],
    )
    return schur_index(cls) <= 2


def _auto_ambient(q: QForm) -> PfisterSpec | None:
    """An explicit ambient Pfister form for small dimensions, if one is forced."""
    a1 = q.coeffs[0]
    if q.dim == 2:
        return PfisterSpec(q.field, (a1.times(q.coeffs[1]).neg(),))
    if q.dim == 3:
        return PfisterSpec(
            q.field,
            (a1.times(q.coeffs[1]).neg(), a1.times(q.coeffs[2]).neg()),
        )
    if q.dim in (4, 8):
        sim = similar_to_pfister(q)
        return sim.spec if sim.status == "similar" else None
    return None


@dataclass(frozen=True)
class ExcellenceReport:
    status: str  # verified | refuted | unknown
    witnesses: tuple[NeighborWitness, ...] = ()
    note: str = ""


def is_excellent(q: QForm, witness_chain=None) -> ExcellenceReport:
    """Excellence: dimension <= 1, or a neighbour with excellent complement.

    A supplied chain of ambient Pfister forms is consumed level by level and
    must fit exactly.  Without a chain, detection uses the forced ambients in
    dimensions 2-4 and 8, the Schur-index criterion in dimension 5 (whose
    complement has dimension 3 and is automatically excellent), and reports
    unknown elsewhere."""
    chain = list(witness_chain or [])
    witnesses = []
    cur = q
    while True:
        if cur.dim <= 1:
            if chain:
                raise WitnessError(f"{len(chain)} unused chain entries past dimension 1")
            return ExcellenceReport("verified", tuple(witnesses))
        if chain:
            head = chain.pop(0)
            if not isinstance(head, PfisterSpec) or head.field != cur.field:
                raise WitnessError("chain entry is not a Pfister spec over the right field")
            wit = is_neighbor(cur, head)
            if wit is None:
                raise WitnessError(f"chain ambient {head} does not contain the level form {cur}")
            witnesses.append(wit)
            cur = wit.complementary
            continue
        d = cur.dim
        if d in (2, 3):
            wit = is_neighbor(cur, _auto_ambient(cur))
            witnesses.append(wit)
            cur = wit.complementary
            continue
        if d in (4, 8):
            pi = _auto_ambient(cur)
            if pi is None:
                return ExcellenceReport("refuted", tuple(witnesses))
            wit = is_neighbor(cur, pi)
            witnesses.append(wit)
            cur = wit.complementary
            continue
        if d == 5:
            try:
                ok = dim5_neighbor_test(cur)
            except UnsupportedClassError:
                return ExcellenceReport("unknown", tuple(witnesses))
            if not ok:
                return ExcellenceReport("refuted", tuple(witnesses))
            return ExcellenceReport(
                "verified",
                tuple(witnesses),
                "dimension-5 neighbour; every complement of dimension <= 3 is excellent",
            )
        return ExcellenceReport("unknown", tuple(witnesses))


@dataclass(frozen=True)
class RoundCheck:
    passed: bool
    witness: SquareClassElem | None = None


def round_check_sampled(q: QForm, samples) -> RoundCheck:
    """Compare D(q) with G(q) on the given sample classes.

    A sample c fails when exactly one of 'q represents c' and 'cq is
    isometric to q' holds; afterwards 1 in D(q) is required since 1 is
    always a similarity factor.  Passing is relative to the samples only."""
    for c in samples:
        if not isinstance(c, SquareClassElem):
            c = square_class(int(c), q.field)
        if represents(q, c) != isometric(q.scaled(c), q):
            return RoundCheck(False, c)
    if q.dim and not represents(q, square_class(1, q.field)):
        return RoundCheck(False, square_class(1, q.field))
    return RoundCheck(True)


def _fresh_vars(field: FieldDesc, m: int) -> list[str]:
    taken = set(field.tower_vars)
    out = []
    for k in itertools.count(1):
        if len(out) == m:
            break
        name = f"x{k}"
        if name not in taken:
            out.append(name)
            taken.add(name)
    return out


def generic_ascend(q: QForm, m: int) -> QForm:
    """Tensor an anisotropic q with the generic m-fold Pfister form
    <<-v1,...,-vm>> in fresh tower variables; anisotropy is preserved."""
    if is_isotropic(q):
        raise NotAnisotropicError("generic ascent is defined for anisotropic forms")
    if m == 0:
        return q
    names = _fresh_vars(q.field, m)
    field = q.field.extend(*names)
    lifted = QForm(field, tuple(c.lift(field) for c in q.coeffs))
    out = lifted
    for name in names:
        bits = tuple(1 if v == name else 0 for v in field.tower_vars)
        x = SquareClassElem(field, 1, bits)
        out = out.tensor(QForm(field, (square_class(1, field), x)))
    return out


def _peel_once(q: QForm) -> QForm:
    """Invert the top-variable product shape q = q' (x) <1, x_top>."""
    down = q.field.drop_top()
    part0, part1 = [], []
    for c in q.coeffs:
        target = part1 if c.exps[-1] else part0
        target.append(SquareClassElem(down, c.base_part, c.exps[:-1]))
    key = lambda e: (e.exps, e.base_part)
    if not part0 or sorted(part0, key=key) != sorted(part1, key=key):
        raise NoGenericFactorError(
            f"{q} does not split as q' (x) <1,{q.field.top_var}>"
        )
    return QForm(down, tuple(part0))


def _peel(q: QForm, target_field: FieldDesc | None) -> tuple[QForm, tuple[str, ...]]:
    peeled = []
    cur = q
    if target_field is not None:
        if not q.field.extends(target_field):
            raise FieldMismatchError(f"{q.field} does not extend {target_field}")
        while cur.field != target_field:
            peeled.append(cur.field.top_var)
            cur = _peel_once(cur)
    else:
        while cur.field.depth > 0:
            try:
                nxt = _peel_once(cur)
            except NoGenericFactorError:
                break
            peeled.append(cur.field.top_var)
            cur = nxt
    if not peeled:
        raise NoGenericFactorError(
            f"{q} has no generic factor <1,{q.field.top_var if q.field.depth else '?'}> to remove"
        )
    return cur, tuple(peeled)


@dataclass(frozen=True)
class DescentResult:
    property: str
    status: str
    peeled_vars: tuple[str, ...]
    base_form: QForm
    witness: object | None = None
    scalar: SquareClassElem | None = None
    note: str = ""


def generic_descend(
    Q: QForm,
    property: str,
    rho: PfisterSpec | None = None,
    chain=None,
    samples=None,
) -> DescentResult:
    """Transfer a structural property of Q = q (x) <1,x> ... down to its base.

    Peels the syntactic generic factors (all the way to rho's field when rho
    is given, else as far as the shape allows) and decides the property on
    the base form; the corresponding tower-level statement follows from the
    ascent/descent equivalences.  Properties: 'neighbor' (ambient rho
    optional; without it, detection is complete through dimension 5),
    'multiple' (of expand(rho), rho required), 'round' (sampled), and
    'excellent' (optional chain over the base field)."""
    if property == "multiple" and rho is None:
        raise WitnessError("divisibility descent needs the Pfister divisor rho")
    target = rho.field if rho is not None else None
    base, peeled = _peel(Q, target)

    if property == "neighbor":
        if rho is not None:
            wit = is_neighbor(base, rho)
            if wit is None:
                return DescentResult(property, "no", peeled, base)
            return DescentResult(
                property, "yes", peeled, base, wit.complementary, wit.scalar
            )
        d = base.dim
        if d in (2, 3) or (d in (4, 8) and _auto_ambient(base) is not None):
            pi = _auto_ambient(base)
            wit = is_neighbor(base, pi)
            return DescentResult(
                property, "yes", peeled, base, wit.complementary, wit.scalar
            )
        if d in (4, 8):
            return DescentResult(
                property, "no", peeled, base, note="similarity obstruction"
            )
        if d == 5:
            try:
                ok = dim5_neighbor_test(base)
            except UnsupportedClassError:
                return DescentResult(property, "unknown", peeled, base)
            if ok:
                return DescentResult(
                    property, "yes", peeled, base, note="Schur index of the even Clifford class is 2"
                )
            return DescentResult(
                property, "no", peeled, base, note="even Clifford class has Schur index 4"
            )
        return DescentResult(property, "unknown", peeled, base)

    if property == "multiple":
        mult = _divide_by_pfister(base, rho.expand())
        if mult is not None:
            return DescentResult(property, "yes", peeled, base, mult)
        if is_isotropic(base):
            return DescentResult(
                property, "unknown", peeled, base, note="greedy division is only complete for anisotropic forms"
            )
        return DescentResult(property, "no", peeled, base)

    if property == "round":
        if samples is None:
            seen = []
            for c in base.coeffs:
                if c not in seen:
                    seen.append(c)
            samples = seen + [square_class(1, base.field)]
        check = round_check_sampled(base, samples)
        if check.passed:
            return DescentResult(property, "pass", peeled, base)
        return DescentResult(property, "fail", peeled, base, check.witness)

    if property == "excellent":
        report = is_excellent(base, chain)
        return DescentResult(
            property, report.status, peeled, base, report.witnesses, note=report.note
        )

    raise WitnessError(f"unknown descent property {property!r}")

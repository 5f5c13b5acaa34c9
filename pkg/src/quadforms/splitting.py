"""Certified bounds on the first Witt index.

A small rule engine.  Each rule contributes an interval cap, a floor, a
divisibility certificate, or an exact value for i1 of an anisotropic
form, together with a record of why it fired.  The merge intersects
intervals, takes lcms of divisors, and insists that exact values agree,
so every answer carries a checkable trail and inconsistent inputs fail
loudly instead of averaging.

Function fields of forms are never constructed.  Everything the rules
need from them arrives as an inequality or equality on i1, so the engine
works with integers, invariants, and verified isometries only.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .brauer import clifford_invariant, is_trivial
from .errors import (
    DimensionError,
    FieldMismatchError,
    IncompleteHypothesisError,
    InconsistentCertificateError,
    NoGenericFactorError,
    NotAnisotropicError,
    UnsupportedClassError,
    WitnessError,
)
from .fields import all_orderings
from .forms import QForm, is_isotropic, is_subform, isometric, signature, tensor, witt_index
from .pfister import (
    PfisterSpec,
    _auto_ambient,
    _peel_once,
    dim5_neighbor_test,
    is_neighbor,
    similar_to_pfister,
)

__all__ = [
    "RuleFiring",
    "I1Bounds",
    "StructureHints",
    "ConditionalHypothesis",
    "MaxSplitStatus",
    "WittDivisibilityReport",
    "ConditionalRecord",
    "ConditionalConclusion",
    "i1_bounds",
    "max_splitting_status",
    "verify_witt_divisibility",
    "i2_conditional",
]


RULE_LABELS = {
    "R0": "Hoffmann separation bound",
    "R1": "similar to a Pfister form",
    "R2": "Pfister neighbour",
    "R3": "Pfister multiple floor and divisibility",
    "R4": "Pfister multiple of a maximal-splitting form",
    "R5": "signature cap at an indefinite ordering",
    "R6": "quaternary form not similar to a Pfister form",
    "R7": "generic Pfister factor",
    "R8": "neighbour-times-form index formula",
    "R9": "near-power dimension obstruction",
    "H": "caller-supplied hypothesis",
    "collapse": "divisor certificate collapses the interval",
}


@dataclass(frozen=True)
class RuleFiring:
    rule_id: str
    label: str
    effect: str
    premises: tuple = ()

    def __str__(self) -> str:
        return f"{self.rule_id} ({self.label}): {self.effect}"


@dataclass(frozen=True)
class I1Bounds:
    """Certified interval for the first Witt index.

    exact means lo == hi with a rule chain behind it; divisor is a
    certified divisor of i1, 1 when no divisibility rule fired.
    """

    lo: int
    hi: int
    exact: bool
    divisor: int
    rules_fired: tuple
    notes: tuple = ()

    @property
    def value(self):
        return self.lo if self.exact else None

    def rule_ids(self) -> tuple:
        seen = []
        for f in self.rules_fired:
            if f.rule_id not in seen:
                seen.append(f.rule_id)
        return tuple(seen)


@dataclass(frozen=True)
class StructureHints:
    """Caller-supplied structure, always verified before use.

    pfister: candidate spec for the form itself.  neighbor_ambient: a
    claimed ambient Pfister form.  product: a pair (factor, base) with
    the claim q = factor (x) base.  factor_ambient: ambient witness for
    the product factor when the factor is a proper Pfister neighbour.
    A claim that fails verification raises WitnessError; an unverifiable
    candidate is silently unused.
    """

    pfister: PfisterSpec | None = None
    neighbor_ambient: PfisterSpec | None = None
    product: tuple | None = None
    factor_ambient: PfisterSpec | None = None


@dataclass(frozen=True)
class ConditionalHypothesis:
    """Assertions about objects the engine cannot compute.

    The splitting fields F1, F2 and the kernel forms q1, q2 of a form
    live over function fields and are never materialized; statements
    about them enter here and are tagged unverified in every output.
    """

    first_witt_index: int | None = None
    second_witt_index: int | None = None
    product_anisotropic_level1: bool = False
    product_anisotropic_level2: bool = False


@dataclass(frozen=True)
class MaxSplitStatus:
    status: str  # yes | no | unknown
    bounds: I1Bounds
    detail: str


def _is_power_of_two(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


def _largest_power_below(n: int) -> int:
    # largest 2^k strictly below n, n >= 2
    p = 1
    while 2 * p < n:
        p *= 2
    return p


class _Merge:
    """Mutable rule-merge state; order of rule firings never matters."""

    def __init__(self, dim):
        self.dim = dim
        self.lo = 1
        self.hi = dim // 2
        self.divisor = 1
        self.exacts = []
        self.fired = []
        self.notes = []
        self.product_floor = None

    def fire(self, rule_id, effect, premises=()):
        self.fired.append(
            RuleFiring(rule_id, RULE_LABELS[rule_id], effect, tuple(premises))
        )

    def cap(self, v):
        self.hi = min(self.hi, v)

    def floor(self, v):
        self.lo = max(self.lo, v)

    def divides(self, d):
        self.divisor = lcm(self.divisor, d)

    def exact(self, v, rule_id):
        self.exacts.append((v, rule_id))

    def trail(self) -> str:
        return "; ".join(str(f) for f in self.fired)

    def inconsistent(self, why):
        raise InconsistentCertificateError(f"{why} [trail: {self.trail()}]")

    def finish(self) -> I1Bounds:
        for v, rid in self.exacts:
            w, sid = self.exacts[0]
            if v != w:
                self.inconsistent(f"exact values disagree: {sid} gives {w}, {rid} gives {v}")
        exact_value = self.exacts[0][0] if self.exacts else None
        if exact_value is not None:
            if not self.lo <= exact_value <= self.hi:
                self.inconsistent(
                    f"exact value {exact_value} falls outside [{self.lo},{self.hi}]"
                )
            self.lo = self.hi = exact_value
        if self.lo > self.hi:
            self.inconsistent(f"empty interval [{self.lo},{self.hi}]")
        d = self.divisor
        if d > 1:
            if exact_value is not None and exact_value % d:
                self.inconsistent(f"certified divisor {d} does not divide exact value {exact_value}")
            lo2 = ((self.lo + d - 1) // d) * d
            hi2 = (self.hi // d) * d
            if lo2 > hi2:
                self.inconsistent(f"no multiple of {d} in [{self.lo},{self.hi}]")
            if (lo2, hi2) != (self.lo, self.hi):
                if lo2 == hi2 and exact_value is None:
                    self.fire(
                        "collapse",
                        f"i1 = {lo2}",
                        (f"only one multiple of {d} survives in [{self.lo},{self.hi}]",),
                    )
                self.lo, self.hi = lo2, hi2
        exact_flag = exact_value is not None or self.lo == self.hi
        if exact_flag and self.product_floor is not None and self.product_floor < self.lo:
            self.notes.append(
                f"exact value {self.lo} strictly exceeds the product floor {self.product_floor}"
            )
        return I1Bounds(
            self.lo, self.hi, exact_flag, self.divisor, tuple(self.fired), tuple(self.notes)
        )


def _rule_r0(q, m):
    L = _largest_power_below(q.dim)
    cap = q.dim - L
    m.cap(cap)
    m.fire(
        "R0",
        f"i1 <= {cap}",
        (f"dim {q.dim}; anisotropic subforms of dimension {L} stay anisotropic over the function field",),
    )


def _all_minus_one_spec(field, fold):
    return PfisterSpec.of(field, *([-1] * fold))


def _rule_r1(q, hints, m):
    """Returns the hint-free similarity result for reuse by R6."""
    auto = similar_to_pfister(q)
    best, how = None, None
    if hints is not None and hints.pfister is not None:
        attempt = similar_to_pfister(q, hints.pfister)
        if attempt.status == "similar":
            best, how = attempt, "supplied candidate verified by isometry"
    if best is None and auto.status == "similar":
        best, how = auto, "decided from the coefficient invariants"
    if best is None and auto.status == "unknown" and _is_power_of_two(q.dim):
        cand = _all_minus_one_spec(q.field, q.dim.bit_length() - 1)
        attempt = similar_to_pfister(q, cand)
        if attempt.status == "similar":
            best, how = attempt, "all-minus-one candidate verified by isometry"
    if best is not None:
        v = q.dim // 2
        m.exact(v, "R1")
        m.fire("R1", f"i1 = {v}", (f"q = {best.scalar} * {best.spec}", how))
    return auto


def _rule_r2(q, hints, m):
    amb, wit, how = None, None, None
    if hints is not None and hints.neighbor_ambient is not None:
        wit = is_neighbor(q, hints.neighbor_ambient)
        if wit is None:
            raise WitnessError(
                f"{q} is not a neighbour of the supplied ambient {hints.neighbor_ambient}"
            )
        amb = hints.neighbor_ambient
        how = "supplied ambient verified by subform containment"
    if wit is None and q.dim == 3:
        amb = _auto_ambient(q)
        if is_subform(q, amb.expand().scaled(q.coeffs[0])):
            wit = True
            how = "every ternary form neighbours the 2-fold Pfister form it generates"
    if wit is None and q.dim == 5:
        try:
            passed = dim5_neighbor_test(q)
        except UnsupportedClassError:
            passed = False
        if passed:
            m.exact(1, "R2")
            m.fire(
                "R2",
                "i1 = 1",
                ("five-dimensional neighbour criterion: even Clifford Schur index <= 2",),
            )
            return
    if wit is None and not _is_power_of_two(q.dim):
        # cheap sound attempt: embed q in a scaled sum of squares; an
        # isotropic ambient can never contain an anisotropic neighbour,
        # so a successful containment check is a genuine witness.  The
        # check stays on the invariant path: materializing the
        # complementary form can exhaust the vector-search budget.
        cand = _all_minus_one_spec(q.field, (q.dim - 1).bit_length())
        if is_subform(q, cand.expand().scaled(q.coeffs[0])):
            wit = True
            amb = cand
            how = "all-minus-one ambient verified by subform containment"
    if wit is None:
        return
    half = 2 ** (amb.fold - 1)
    v = q.dim - half
    m.exact(v, "R2")
    m.fire("R2", f"i1 = {v}", (f"neighbour of {amb}, ambient dimension {2 * half}", how))


def _recognize_pfister_factor(factor):
    """(spec, scalar) when the factor is certified similar to a Pfister form."""
    sim = similar_to_pfister(factor)
    if sim.status == "similar":
        return sim.spec, sim.scalar
    if sim.status == "unknown" and _is_power_of_two(factor.dim):
        cand = _all_minus_one_spec(factor.field, factor.dim.bit_length() - 1)
        sim = similar_to_pfister(factor, cand)
        if sim.status == "similar":
            return sim.spec, sim.scalar
    return None


def _rule_products(q, hints, m):
    """R3, R4 and R8: everything driven by a verified product factorization."""
    if hints is None or hints.product is None:
        return
    factor, base = hints.product
    if factor.field != q.field or base.field != q.field:
        raise FieldMismatchError("product hint over a different field")
    if not isometric(q, tensor(factor, base)):
        raise WitnessError("product hint fails: q is not isometric to factor (x) base")
    if base.dim < 2 or factor.dim < 1:
        return
    sub = i1_bounds(base)
    base_maxsplit = sub.exact and _is_power_of_two(base.dim - sub.lo)
    recog = _recognize_pfister_factor(factor)
    if recog is not None:
        spec, scalar = recog
        flo = factor.dim * sub.lo
        m.floor(flo)
        m.divides(factor.dim)
        if m.product_floor is None or flo > m.product_floor:
            m.product_floor = flo
        m.fire(
            "R3",
            f"i1 >= {flo}; divisor {factor.dim}",
            (
                f"factor is {scalar} * {spec}",
                f"base interval [{sub.lo},{sub.hi}] via {','.join(sub.rule_ids())}",
            ),
        )
        if base_maxsplit:
            v = factor.dim * sub.lo
            m.exact(v, "R4")
            m.fire(
                "R4",
                f"i1 = {v}",
                (f"base has maximal splitting: {base.dim} - {sub.lo} = {base.dim - sub.lo}",),
            )
        return
    # factor not Pfister-similar: try the neighbour-product formula
    amb = hints.factor_ambient
    wit = None
    if amb is not None:
        wit = is_neighbor(factor, amb)
        if wit is None:
            raise WitnessError("factor_ambient hint fails: the factor is not a neighbour of it")
    else:
        amb = _auto_ambient(factor)
        if amb is not None:
            wit = is_neighbor(factor, amb)
    if wit is None or not base_maxsplit:
        return
    dimpi = 2 ** amb.fold
    i1b = sub.lo
    if is_isotropic(tensor(amb.expand(), base)):
        return
    # dim tau > dim pi - (dim pi * i1(base)) / dim base, cross-multiplied
    if factor.dim * base.dim <= dimpi * base.dim - dimpi * i1b:
        return
    v = dimpi * i1b - base.dim * (dimpi - factor.dim)
    m.exact(v, "R8")
    m.fire(
        "R8",
        f"i1 = {v}",
        (
            f"factor is a neighbour of {amb} with ambient dimension {dimpi}",
            f"base has maximal splitting with i1 = {i1b}",
            "the full ambient product stays anisotropic",
            f"codimension condition {factor.dim}*{base.dim} > {dimpi}*({base.dim} - {i1b}) holds",
        ),
    )


def _ordering_str(P) -> str:
    if not P.var_signs:
        return "the rational ordering"
    return ",".join(
        f"{v}{'+' if s > 0 else '-'}" for v, s in zip(P.field.tower_vars, P.var_signs)
    )


def _rule_r5(q, m):
    if not q.field.rational_base:
        return
    best, best_ord, best_sgn = None, None, None
    for P in all_orderings(q.field):
        s = abs(signature(q, P))
        if s == q.dim:
            continue  # definite orderings extend nowhere useful, skip
        cap = (q.dim - s) // 2
        if best is None or cap < best:
            best, best_ord, best_sgn = cap, P, s
    if best is None:
        return
    m.cap(best)
    m.fire(
        "R5",
        f"i1 <= {best}",
        (f"ordering {_ordering_str(best_ord)} gives |signature| = {best_sgn}",),
    )


def _rule_r6(q, auto_sim, m):
    if q.dim != 4 or auto_sim.status != "not_similar":
        return
    m.exact(1, "R6")
    m.fire(
        "R6",
        "i1 = 1",
        (
            "the determinant is not a square, so the form is not similar to a 2-fold Pfister form",
            "i1 = 2 would make the form hyperbolic over its function field, forcing similarity",
        ),
    )


def _rule_r7(q, m):
    cur, peeled = q, []
    while cur.field.depth > 0 and cur.dim >= 2:
        try:
            nxt = _peel_once(cur)
        except NoGenericFactorError:
            break
        peeled.append(cur.field.top_var)
        cur = nxt
    if not peeled:
        return
    k = 2 ** len(peeled)
    factor_s = "<<" + ",".join("-" + v for v in reversed(peeled)) + ">>"
    if cur.dim == 1:
        v = q.dim // 2
        m.exact(v, "R7")
        m.fire(
            "R7",
            f"i1 = {v}",
            (f"q = {cur} (x) {factor_s} is a scaled generic Pfister form",),
        )
        return
    sub = i1_bounds(cur)
    # i1 scales exactly by the generic factor dimension, so the whole
    # certificate transfers, not only exact values
    m.floor(k * sub.lo)
    m.cap(k * sub.hi)
    m.divides(k * sub.divisor)
    detail = f"base over {cur.field}: interval [{sub.lo},{sub.hi}]"
    if sub.exact:
        m.exact(k * sub.lo, "R7")
        effect = f"i1 = {k * sub.lo}"
        detail = f"base over {cur.field}: exact {sub.lo}"
    else:
        effect = f"i1 in {k} * [{sub.lo},{sub.hi}]; divisor {k * sub.divisor}"
    m.fire(
        "R7",
        effect,
        (
            f"generic factor {factor_s} of dimension {k}",
            detail + f" via {','.join(sub.rule_ids())}",
        ),
    )


def _rule_r9(q, m):
    n = q.dim
    if n < 7:
        return
    if _is_power_of_two(n):
        k = n.bit_length() - 1
        obstruction = None
        if not q.det().is_one:
            obstruction = "the determinant is not a square"
        elif not is_trivial(clifford_invariant(q)):
            obstruction = "the Clifford invariant is nontrivial"
        if obstruction is None:
            return
        cap = n // 2 - 1
        m.cap(cap)
        m.fire(
            "R9",
            f"i1 <= {cap}",
            (
                f"dimension {n} = 2^{k}",
                f"maximal splitting would make the form similar to a {k}-fold Pfister form",
                obstruction,
            ),
        )
        return
    if not _is_power_of_two(n + 1):
        return
    k = (n + 1).bit_length() - 1
    aug = q.perp(QForm(q.field, (q.det(),)))
    if is_trivial(clifford_invariant(aug)):
        return
    cap = n - (n + 1) // 2 - 1
    m.cap(cap)
    m.fire(
        "R9",
        f"i1 <= {cap}",
        (
            f"dimension {n} = 2^{k} - 1",
            f"maximal splitting would force a neighbour of a {k}-fold Pfister form",
            "the Clifford invariant of q perp <det q> is nontrivial",
        ),
    )


def _rule_h(hypotheses, m):
    if hypotheses is None or hypotheses.first_witt_index is None:
        return
    v = int(hypotheses.first_witt_index)
    m.exact(v, "H")
    m.fire("H", f"i1 = {v}", (f"unverified: caller asserts i1 = {v}",))


def i1_bounds(q: QForm, hints: StructureHints | None = None,
              hypotheses: ConditionalHypothesis | None = None) -> I1Bounds:
    """Certified interval, divisor, and possibly exact value for i1(q).

    q must be anisotropic of dimension at least 2.  Hints are verified
    claims about structure (a wrong claim raises WitnessError, a mere
    candidate that fails is dropped).  Hypotheses enter as an exact value
    tagged unverified; if they clash with a computed certificate the
    result is InconsistentCertificateError carrying the rule trail.
    """
    if q.dim < 2:
        raise DimensionError("first Witt index needs dimension at least 2")
    if is_isotropic(q):
        raise NotAnisotropicError(f"{q} is isotropic, i1 applies to anisotropic forms")
    m = _Merge(q.dim)
    _rule_r0(q, m)
    auto_sim = _rule_r1(q, hints, m)
    _rule_r2(q, hints, m)
    _rule_products(q, hints, m)
    _rule_r5(q, m)
    _rule_r6(q, auto_sim, m)
    _rule_r7(q, m)
    _rule_r9(q, m)
    _rule_h(hypotheses, m)
    return m.finish()


def max_splitting_status(q: QForm, hints: StructureHints | None = None,
                         hypotheses: ConditionalHypothesis | None = None) -> MaxSplitStatus:
    """Does dim q - i1(q) hit a power of two?  yes / no / unknown.

    An R9 firing refutes maximal splitting even without an exact i1: the
    obstruction excludes precisely the index value that would reach a
    power of two at these dimensions.
    """
    bounds = i1_bounds(q, hints, hypotheses)
    if bounds.exact:
        v = bounds.lo
        rem = q.dim - v
        if _is_power_of_two(rem):
            return MaxSplitStatus(
                "yes", bounds, f"i1 = {v} and dim - i1 = {rem} is a power of two"
            )
        return MaxSplitStatus(
            "no", bounds, f"i1 = {v} and dim - i1 = {rem} is not a power of two"
        )
    for f in bounds.rules_fired:
        if f.rule_id == "R9":
            return MaxSplitStatus(
                "no", bounds, "maximal splitting refuted: " + "; ".join(f.premises)
            )
    return MaxSplitStatus(
        "unknown",
        bounds,
        f"interval [{bounds.lo},{bounds.hi}] without an exactness certificate",
    )


@dataclass(frozen=True)
class WittDivisibilityReport:
    product_witt_index: int
    required_divisor: int
    divisible: bool
    detail: str


def verify_witt_divisibility(pi: PfisterSpec, q: QForm) -> WittDivisibilityReport:
    """Check 2^n | i(pi (x) q) for an n-fold pi; reports, never raises.

    The index of the product is computed by the exact decomposition
    machinery.  For an isotropic (hence hyperbolic) Pfister factor or a
    base of dimension below two the divisibility theorem does not apply
    and the report says so.
    """
    if pi.field != q.field:
        raise FieldMismatchError(f"{pi.field} vs {q.field}")
    expanded = pi.expand()
    product = tensor(expanded, q)
    idx = witt_index(product) if product.dim else 0
    want = 2 ** pi.fold
    divisible = idx % want == 0
    bits = [f"i({pi} (x) q) = {idx}", f"required divisor {want}"]
    if q.dim and is_isotropic(expanded):
        bits.append("warning: the Pfister factor is hyperbolic, the divisibility theorem does not apply")
    if q.dim < 2:
        bits.append("warning: base dimension below two, the divisibility theorem does not apply")
    return WittDivisibilityReport(idx, want, divisible, "; ".join(bits))


@dataclass(frozen=True)
class ConditionalRecord:
    statement: str
    premises: tuple
    verified: bool = False


@dataclass(frozen=True)
class ConditionalConclusion:
    records: tuple
    contradiction: str | None
    product_bounds: I1Bounds | None


def i2_conditional(q: QForm, pi: PfisterSpec, hyp: ConditionalHypothesis | None) -> ConditionalConclusion:
    """Conditional first and second index of pi (x) q from splitting-field hypotheses.

    The statements "pi (x) q1 is anisotropic over F1" and "pi (x) q2 is
    anisotropic over F2" concern fields the engine never builds, so they
    must come in through hyp and are echoed as unverified premises.  The
    i1(q) input may be supplied, or is filled in when unconditionally
    computable.  The conclusion is cross-checked against the certificates
    available for the actual product over the ground field; a clash is
    reported as a contradiction, demonstrating that some hypothesis fails.
    """
    if q.dim < 2:
        raise DimensionError("the conditional rules need dim q >= 2")
    if pi.field != q.field:
        raise FieldMismatchError(f"{pi.field} vs {q.field}")
    if hyp is None or not hyp.product_anisotropic_level1:
        raise IncompleteHypothesisError(
            "the level-1 anisotropy assertion (pi (x) q1 anisotropic over F1) is required"
        )
    i1q = hyp.first_witt_index
    if i1q is None:
        base = i1_bounds(q)
        if not base.exact:
            raise IncompleteHypothesisError("i1(q) is neither supplied nor computable")
        i1q = base.lo
        i1_src = f"i1(q) = {i1q} computed unconditionally"
    else:
        i1_src = f"unverified: caller asserts i1(q) = {i1q}"
    dimpi = 2 ** pi.fold
    v1 = dimpi * i1q
    records = [
        ConditionalRecord(
            f"i1(pi (x) q) = {v1}",
            (i1_src, "unverified: pi (x) q1 is anisotropic over the first splitting field F1"),
        )
    ]
    if hyp.second_witt_index is not None and hyp.product_anisotropic_level2:
        v2 = dimpi * hyp.second_witt_index
        records.append(
            ConditionalRecord(
                f"i2(pi (x) q) <= {v2}",
                (
                    f"unverified: caller asserts i2(q) = {hyp.second_witt_index}",
                    "unverified: pi (x) q2 is anisotropic over the second splitting field F2",
                    "unverified: q is not a Pfister neighbour of codimension at most one",
                    "unverified: pi (x) q is not similar to a Pfister form",
                ),
            )
        )
    contradiction = None
    bounds = None
    product = tensor(pi.expand(), q)
    if is_isotropic(product):
        contradiction = (
            "pi (x) q is isotropic over the ground field, so the standing anisotropy hypothesis already fails"
        )
    else:
        try:
            bounds = i1_bounds(product, hints=StructureHints(product=(pi.expand(), q)))
        except InconsistentCertificateError as err:
            contradiction = f"unconditional certificates are already inconsistent: {err}"
        else:
            if bounds.exact and bounds.lo != v1:
                contradiction = (
                    f"unconditional engine certifies i1(pi (x) q) = {bounds.lo}, "
                    f"the hypotheses force {v1}, so some hypothesis fails"
                )
            elif not (bounds.lo <= v1 <= bounds.hi) or v1 % bounds.divisor:
                contradiction = (
                    f"hypothetical value {v1} falls outside the certified interval "
                    f"[{bounds.lo},{bounds.hi}] with divisor {bounds.divisor}"
                )
    return ConditionalConclusion(tuple(records), contradiction, bounds)

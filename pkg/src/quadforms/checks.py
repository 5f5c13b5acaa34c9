"""Seeded property batteries, shared by the test suite and the CLI.

Every battery is deterministic given (seed, cases); the default seed is
DEFAULT_SEED and the CLI lets QUADFORMS_SEED override it.  Each battery
returns a PropertyResult whose failures tuple holds human-readable
counterexample descriptions, empty on success.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .brauer import BrauerClass2, is_trivial
from .errors import QuadFormsError
from .expr import parse_form_expr, parse_qform, print_form, print_program
from .expr import CoeffExpr, DiagExpr, FormProgram, PfisterExpr, ScaledExpr, SumExpr, TensorExpr
from .fields import (
    FieldDesc,
    Place,
    SquareClassElem,
    canonical_square_class,
    hilbert_symbol_int,
    relevant_odd_primes,
    square_class,
)
from .forms import (
    QForm,
    brute_force_isotropy,
    hyperbolic,
    is_isotropic,
    isometric,
    orthogonal_sum,
    witt_decompose,
    witt_index,
)
from .pfister import PfisterSpec, generic_ascend
from .splitting import i1_bounds, verify_witt_divisibility

__all__ = ["DEFAULT_SEED", "PropertyResult", "BATTERIES", "run_all", "render_report"]

DEFAULT_SEED = 1729


@dataclass(frozen=True)
class PropertyResult:
    name: str
    cases: int
    failures: tuple
    seconds: float

    @property
    def passed(self) -> bool:
        return not self.failures


def _rng(seed: int, name: str) -> random.Random:
    return random.Random(f"{seed}:{name}")


def _nonzero(rng: random.Random, height: int) -> int:
    n = 0
    while n == 0:
        n = rng.randint(-height, height)
    return n


_FIELD_POOL = (
    FieldDesc.rationals(),
    FieldDesc.rationals().extend("x"),
    FieldDesc.rationals().extend("x", "y"),
    FieldDesc.prime_field(3),
    FieldDesc.prime_field(5).extend("t"),
    FieldDesc.prime_field(7).extend("t", "u"),
)


def _rand_class(rng: random.Random, field: FieldDesc, height: int = 10) -> SquareClassElem:
    if field.base == "Fp":
        num = rng.randint(1, field.p - 1)
        den = 1
    else:
        num = _nonzero(rng, height)
        den = rng.randint(1, 4)
    exps = tuple(rng.randint(0, 1) for _ in range(field.depth))
    return canonical_square_class(num, den, exps, field)


def _rand_form(rng: random.Random, field: FieldDesc, dim: int, height: int = 10) -> QForm:
    return QForm(field, tuple(_rand_class(rng, field, height) for _ in range(dim)))


def _rand_anisotropic(rng: random.Random, field: FieldDesc, dim: int,
                      height: int = 10, tries: int = 60) -> QForm | None:
    # indefinite rational forms of dim >= 5 are always isotropic, so the
    # rational-base search at high dimension sticks to definite candidates
    definite = field.base == "Q" and field.depth == 0 and dim >= 5
    for _ in range(tries):
        if definite:
            q = QForm(field, tuple(
                canonical_square_class(rng.randint(1, height), 1, (), field)
                for _ in range(dim)))
        else:
            q = _rand_form(rng, field, dim, height)
        if not is_isotropic(q):
            return q
    return None


# ---------------------------------------------------------------- batteries


def check_square_class_laws(seed: int, cases: int = 300) -> PropertyResult:
    t0 = time.perf_counter()
    rng = _rng(seed, "square-class-laws")
    fails = []
    for i in range(cases):
        field = rng.choice(_FIELD_POOL)
        a = _rand_class(rng, field)
        b = _rand_class(rng, field)
        one = square_class(1, field)
        if a.times(a) != one:
            fails.append(f"case {i}: {a} squared is {a.times(a)}, not the unit class")
        if a.times(b) != b.times(a):
            fails.append(f"case {i}: product of {a} and {b} is not commutative")
        if a.neg().neg() != a:
            fails.append(f"case {i}: double negation moved {a}")
        if field.base == "Q":
            # canonicalization respects multiplication of representatives
            fa = Fraction(_nonzero(rng, 30), rng.randint(1, 9))
            fb = Fraction(_nonzero(rng, 30), rng.randint(1, 9))
            ca = canonical_square_class(fa.numerator, fa.denominator, (0,) * field.depth, field)
            cb = canonical_square_class(fb.numerator, fb.denominator, (0,) * field.depth, field)
            fab = fa * fb
            cab = canonical_square_class(fab.numerator, fab.denominator, (0,) * field.depth, field)
            if ca.times(cb) != cab:
                fails.append(f"case {i}: canonical({fa})*canonical({fb}) != canonical({fab})")
    return PropertyResult("square-class-laws", cases, tuple(fails), time.perf_counter() - t0)


def check_witt_roundtrip(seed: int, cases: int = 120) -> PropertyResult:
    t0 = time.perf_counter()
    rng = _rng(seed, "witt-roundtrip")
    fails = []
    for i in range(cases):
        field = rng.choice(_FIELD_POOL)
        dim = rng.randint(1, 5)
        q = _rand_form(rng, field, dim, height=8)
        d = witt_decompose(q)
        if d.witt_index != witt_index(q):
            fails.append(f"case {i}: decompose index {d.witt_index} != invariant index {witt_index(q)} for {q}")
            continue
        if not d.anisotropic_part.is_empty and is_isotropic(d.anisotropic_part):
            fails.append(f"case {i}: claimed anisotropic part of {q} is isotropic")
            continue
        back = orthogonal_sum(hyperbolic(d.witt_index, field), d.anisotropic_part)
        if not isometric(back, q):
            fails.append(f"case {i}: reassembled decomposition of {q} is not isometric to it")
    return PropertyResult("witt-roundtrip", cases, tuple(fails), time.perf_counter() - t0)


def check_springer_oracle(seed: int, cases: int = 120,
                          primes=(3, 5, 7), max_dim: int = 6) -> PropertyResult:
    """Residue-form isotropy decision vs explicit zero search over F_p towers."""
    t0 = time.perf_counter()
    rng = _rng(seed, "springer-oracle")
    fails = []
    for i in range(cases):
        p = rng.choice(list(primes))
        depth = rng.randint(1, 2)
        field = FieldDesc.prime_field(p).extend(*["t", "u"][:depth])
        q = _rand_form(rng, field, rng.randint(2, max_dim))
        fast = is_isotropic(q)
        witness = brute_force_isotropy(q)
        if fast != (witness is not None):
            fails.append(f"case {i}: residue decision {fast} but search witness {witness} for {q}")
    return PropertyResult("springer-oracle", cases, tuple(fails), time.perf_counter() - t0)


def check_hilbert_cross(seed: int, cases: int = 200, height: int = 200) -> PropertyResult:
    """Quaternion symbol triviality vs 2-fold isotropy, two independent routes."""
    t0 = time.perf_counter()
    rng = _rng(seed, "hilbert-cross")
    Q = FieldDesc.rationals()
    fails = []
    for i in range(cases):
        a, b = _nonzero(rng, height), _nonzero(rng, height)
        via_brauer = is_trivial(BrauerClass2.symbol(square_class(a, Q), square_class(b, Q), Q))
        via_forms = is_isotropic(PfisterSpec.of(Q, a, b).expand())
        if via_brauer != via_forms:
            fails.append(f"case {i}: symbol ({a},{b}) trivial={via_brauer} but <<{a},{b}>> isotropic={via_forms}")
    return PropertyResult("hilbert-cross", cases, tuple(fails), time.perf_counter() - t0)


def check_hilbert_reciprocity(seed: int, cases: int = 300, height: int = 10_000) -> PropertyResult:
    t0 = time.perf_counter()
    rng = _rng(seed, "hilbert-reciprocity")
    fails = []
    for i in range(cases):
        a, b = _nonzero(rng, height), _nonzero(rng, height)
        places = [Place.real(), Place.prime(2)] + [Place.prime(p) for p in relevant_odd_primes((a, b))]
        prod = 1
        for pl in places:
            prod *= hilbert_symbol_int(a, b, pl)
        if prod != 1:
            fails.append(f"case {i}: product of local symbols for ({a},{b}) is {prod}")
    return PropertyResult("hilbert-reciprocity", cases, tuple(fails), time.perf_counter() - t0)


def check_pfister_round(seed: int, specs: int = 40, values: int = 6) -> PropertyResult:
    """Represented values of a Pfister form are similarity factors."""
    t0 = time.perf_counter()
    rng = _rng(seed, "pfister-round")
    fails = []
    for i in range(specs):
        field = rng.choice(_FIELD_POOL[:3])
        fold = rng.randint(1, 3)
        spec = PfisterSpec(field, tuple(_rand_class(rng, field, 6) for _ in range(fold)))
        pi = spec.expand()
        # every diagonal coefficient is represented, so each must scale pi to itself
        for c in pi.coeffs[:values]:
            if not isometric(pi.scaled(c), pi):
                fails.append(f"case {i}: {spec} times represented {c} is not isometric to it")
    return PropertyResult("pfister-round", specs, tuple(fails), time.perf_counter() - t0)


def check_ws_divisibility(seed: int, cases: int = 60, max_fold: int = 2,
                          q_dims=(2, 4), height: int = 8) -> PropertyResult:
    """dim(pi) divides the Witt index of pi tensor q for anisotropic Pfister pi."""
    t0 = time.perf_counter()
    rng = _rng(seed, "ws-divisibility")
    fails = []
    done = 0
    attempts = 0
    while done < cases and attempts < cases * 40:
        attempts += 1
        field = rng.choice(_FIELD_POOL[:3])
        fold = rng.randint(1, max_fold)
        spec = PfisterSpec(field, tuple(_rand_class(rng, field, height) for _ in range(fold)))
        if is_isotropic(spec.expand()):
            continue  # the divisibility statement needs an anisotropic factor
        q = _rand_form(rng, field, rng.randint(q_dims[0], q_dims[1]), height)
        rep = verify_witt_divisibility(spec, q)
        if not rep.divisible:
            fails.append(
                f"attempt {attempts}: index {rep.product_witt_index} of {spec} tensor {q} "
                f"is not divisible by {rep.required_divisor}")
        done += 1
    return PropertyResult("ws-divisibility", done, tuple(fails), time.perf_counter() - t0)


def _rand_coeff_expr(rng: random.Random, names) -> CoeffExpr:
    factors = []
    for _ in range(rng.randint(1, 2)):
        if names and rng.random() < 0.5:
            factors.append(("var", rng.choice(names), rng.choice((1, 2, 3))))
        else:
            factors.append(("num", rng.randint(1, 9), rng.choice((1, 1, 2, 3))))
    return CoeffExpr(rng.choice((1, -1)), tuple(factors))


def _rand_expr(rng: random.Random, names, depth: int):
    if depth == 0 or rng.random() < 0.4:
        k = rng.randint(1, 3)
        coeffs = tuple(_rand_coeff_expr(rng, names) for _ in range(k))
        return PfisterExpr(coeffs[:2]) if rng.random() < 0.25 else DiagExpr(coeffs)
    r = rng.random()
    if r < 0.35:
        return SumExpr(_rand_expr(rng, names, depth - 1), _rand_expr(rng, names, depth - 1))
    if r < 0.7:
        return TensorExpr(_rand_expr(rng, names, depth - 1), _rand_expr(rng, names, depth - 1))
    return ScaledExpr(_rand_coeff_expr(rng, names), _rand_expr(rng, names, depth - 1))


def check_expr_roundtrip(seed: int, cases: int = 250) -> PropertyResult:
    t0 = time.perf_counter()
    rng = _rng(seed, "expr-roundtrip")
    fails = []
    for i in range(cases):
        field = rng.choice(_FIELD_POOL[:3])
        names = list(field.tower_vars)
        prog = FormProgram(_rand_expr(rng, names, rng.randint(0, 2)), field)
        text = print_program(prog)
        try:
            back = parse_form_expr(text)
        except QuadFormsError as e:
            fails.append(f"case {i}: printout {text!r} failed to reparse: {e}")
            continue
        if back != prog:
            fails.append(f"case {i}: reparse of {text!r} changed the tree")
            continue
        try:
            q = parse_qform(text)
        except QuadFormsError:
            continue  # a zero coefficient is a legitimate elaboration failure
        q2 = parse_qform(print_form(q))
        if q2 != q:
            fails.append(f"case {i}: canonical printout of {q} reparses to {q2}")
    return PropertyResult("expr-roundtrip", cases, tuple(fails), time.perf_counter() - t0)


def check_i1_sanity(seed: int, cases: int = 80) -> PropertyResult:
    t0 = time.perf_counter()
    rng = _rng(seed, "i1-sanity")
    fails = []
    done = 0
    attempts = 0
    while done < cases and attempts < cases * 30:
        attempts += 1
        field = rng.choice(_FIELD_POOL[:3])
        dim = rng.randint(2, 6)
        q = _rand_anisotropic(rng, field, dim, height=8, tries=25)
        if q is None:
            continue
        done += 1
        b = i1_bounds(q)
        largest = 1 << (dim - 1).bit_length() - 1  # largest power of two below dim
        if not (1 <= b.lo <= b.hi <= dim - largest):
            fails.append(f"attempt {attempts}: interval [{b.lo},{b.hi}] out of range for {q}")
            continue
        if b.exact and b.lo != b.hi:
            fails.append(f"attempt {attempts}: exact flag with open interval for {q}")
        if b.divisor < 1 or not any(n % b.divisor == 0 for n in range(b.lo, b.hi + 1)):
            fails.append(f"attempt {attempts}: divisor {b.divisor} excludes the whole interval for {q}")
        if dim == largest + 1 and not b.exact:
            fails.append(f"attempt {attempts}: dimension {dim} forces first index 1 for {q}")
    return PropertyResult("i1-sanity", done, tuple(fails), time.perf_counter() - t0)


def check_ascent_doubling(seed: int, cases: int = 30) -> PropertyResult:
    """A generic binary ascent exactly doubles a known first Witt index."""
    t0 = time.perf_counter()
    rng = _rng(seed, "ascent-doubling")
    fails = []
    done = 0
    attempts = 0
    while done < cases and attempts < cases * 30:
        attempts += 1
        field = rng.choice(_FIELD_POOL[:2])
        q = _rand_anisotropic(rng, field, rng.randint(2, 4), height=6, tries=25)
        if q is None:
            continue
        b = i1_bounds(q)
        if not b.exact:
            continue
        done += 1
        up = i1_bounds(generic_ascend(q, 1))
        if not (up.exact and up.value == 2 * b.value):
            fails.append(
                f"attempt {attempts}: ascent of {q} gives [{up.lo},{up.hi}] "
                f"exact={up.exact}, wanted exact {2 * b.value}")
    return PropertyResult("ascent-doubling", done, tuple(fails), time.perf_counter() - t0)


BATTERIES = (
    check_square_class_laws,
    check_witt_roundtrip,
    check_springer_oracle,
    check_hilbert_cross,
    check_hilbert_reciprocity,
    check_pfister_round,
    check_ws_divisibility,
    check_expr_roundtrip,
    check_i1_sanity,
    check_ascent_doubling,
)


def run_all(seed: int = DEFAULT_SEED, cases: int | None = None) -> tuple[PropertyResult, ...]:
    """Run every battery; cases overrides each battery's default count."""
    out = []
    for battery in BATTERIES:
        out.append(battery(seed) if cases is None else battery(seed, cases))
    return tuple(out)


def render_report(results) -> str:
    lines = []
    for r in results:
        mark = "PASS" if r.passed else "FAIL"
        lines.append(f"{mark} {r.name} ({r.cases} cases, {r.seconds:.2f}s)")
        for f in r.failures[:5]:
            lines.append(f"    {f}")
        if len(r.failures) > 5:
            lines.append(f"    ... {len(r.failures) - 5} more")
    npass = sum(1 for r in results if r.passed)
    lines.append(f"pass={npass} fail={len(results) - npass}")
    return "\n".join(lines) + "\n"

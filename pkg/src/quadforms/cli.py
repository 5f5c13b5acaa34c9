"""Command line surface.

Exit codes: 0 success (all checks passed), 1 a computation or verification
reported failure, 2 usage, syntax, or corpus-format errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .brauer import clifford_invariant, hasse_invariant, is_trivial, schur_index
from .checks import DEFAULT_SEED, render_report, run_all
from .corpus import run_corpus
from .errors import (
    CorpusFormatError,
    DegenerateElementError,
    FormSyntaxError,
    QuadFormsError,
    UnknownVariableError,
    UnsupportedClassError,
)
from .expr import parse_field, parse_pfister_spec, parse_qform, print_form
from .forms import signed_det, witt_decompose, witt_index
from .pfister import is_neighbor
from .splitting import StructureHints, i1_bounds, max_splitting_status

_USAGE_ERRORS = (FormSyntaxError, CorpusFormatError, UnknownVariableError, DegenerateElementError)


def _default_field(args):
    return parse_field(args.field) if getattr(args, "field", None) else None


def _form(args, attr="expr"):
    return parse_qform(getattr(args, attr), _default_field(args))


def _print_trail(b):
    for f in b.rules_fired:
        line = f"  {f.rule_id} {f.label}: {f.effect}"
        print(line)
        for p in f.premises:
            print(f"      {p}")
    for n in b.notes:
        print(f"  note: {n}")


def _cmd_eval(args) -> int:
    q = _form(args)
    print(f"form: {print_form(q)}")
    print(f"dim: {q.dim}")
    print(f"det: {q.det()}")
    print(f"signed_det: {signed_det(q)}")
    return 0


def _cmd_witt(args) -> int:
    q = _form(args)
    d = witt_decompose(q)
    print(f"witt_index: {d.witt_index}")
    print(f"anisotropic_part: {d.anisotropic_part}")
    return 0


def _cmd_invariants(args) -> int:
    q = _form(args)
    print(f"dim: {q.dim}")
    print(f"det: {q.det()}")
    print(f"signed_det: {signed_det(q)}")
    c = clifford_invariant(q)
    print(f"clifford: {c}")
    h = hasse_invariant(q)
    print(f"hasse: {h}")
    try:
        print(f"clifford_trivial: {'true' if is_trivial(c) else 'false'}")
        print(f"schur_index: {schur_index(c)}")
    except UnsupportedClassError as e:
        print(f"schur_index: undecided ({e})")
    print(f"witt_index: {witt_index(q)}")
    return 0


def _cmd_isometric(args) -> int:
    fld = _default_field(args)
    q1 = parse_qform(args.left, fld)
    q2 = parse_qform(args.right, fld)
    from .forms import isometric

    ok = isometric(q1, q2)
    print("true" if ok else "false")
    return 0


def _cmd_neighbor(args) -> int:
    fld = _default_field(args)
    q = parse_qform(args.expr, fld)
    pi = parse_pfister_spec(args.ambient, fld or q.field)
    wit = is_neighbor(q, pi)
    if wit is None:
        print("not_neighbor")
        return 0
    print("neighbor")
    print(f"scalar: {wit.scalar}")
    print(f"complementary: {wit.complementary}")
    return 0


def _hints(args) -> StructureHints | None:
    fld = _default_field(args)

    def spec(text, q_field):
        return parse_pfister_spec(text, fld or q_field)

    q = parse_qform(args.expr, fld)
    product = None
    if args.product_pfister or args.product_base:
        if not (args.product_pfister and args.product_base):
            raise FormSyntaxError("a product hint needs both --product-pfister and --product-base")
        product = (
            spec(args.product_pfister, q.field).expand(),
            parse_qform(args.product_base, fld or q.field),
        )
    if not (args.pfister or args.neighbor_ambient or product or args.factor_ambient):
        return None
    return StructureHints(
        pfister=spec(args.pfister, q.field) if args.pfister else None,
        neighbor_ambient=spec(args.neighbor_ambient, q.field) if args.neighbor_ambient else None,
        product=product,
        factor_ambient=spec(args.factor_ambient, q.field) if args.factor_ambient else None,
    )


def _cmd_i1_bounds(args) -> int:
    q = _form(args)
    b = i1_bounds(q, hints=_hints(args))
    if b.exact:
        print(f"i1: {b.value}")
    else:
        print(f"i1: [{b.lo},{b.hi}]")
    print(f"divisor: {b.divisor}")
    print(f"rules: {','.join(b.rule_ids())}")
    _print_trail(b)
    return 0


def _cmd_maxsplit(args) -> int:
    q = _form(args)
    ms = max_splitting_status(q, hints=_hints(args))
    print(f"maxsplit: {ms.status}")
    if ms.detail:
        print(f"detail: {ms.detail}")
    print(f"rules: {','.join(ms.bounds.rule_ids())}")
    _print_trail(ms.bounds)
    return 0


def _cmd_verify_corpus(args) -> int:
    report, code = run_corpus(args.path, args.format)
    sys.stdout.write(report)
    return code


def _cmd_verify_properties(args) -> int:
    seed = args.seed
    if seed is None:
        env = os.environ.get("QUADFORMS_SEED")
        seed = int(env) if env else DEFAULT_SEED
    results = run_all(seed, args.cases)
    sys.stdout.write(f"property report seed={seed}\n")
    sys.stdout.write(render_report(results))
    return 0 if all(r.passed for r in results) else 1


def _add_hint_flags(sp):
    sp.add_argument("--pfister", help="pf(...) similarity candidate hint")
    sp.add_argument("--neighbor-ambient", help="pf(...) ambient hint for the neighbour rule")
    sp.add_argument("--product-pfister", help="pf(...) factor of a product presentation")
    sp.add_argument("--product-base", help="base form of a product presentation")
    sp.add_argument("--factor-ambient", help="pf(...) ambient for a non-Pfister product factor")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="quadforms",
        description="Exact quadratic form computations over Q, F_p, and Laurent towers.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def with_field(sp):
        sp.add_argument("--field", help="default field for expressions without an over clause")
        return sp

    sp = with_field(sub.add_parser("eval", help="parse a form expression and print basics"))
    sp.add_argument("expr")
    sp.set_defaults(fn=_cmd_eval)

    sp = with_field(sub.add_parser("witt", help="Witt index and anisotropic part"))
    sp.add_argument("expr")
    sp.set_defaults(fn=_cmd_witt)

    sp = with_field(sub.add_parser("invariants", help="dimension, determinants, Brauer invariants"))
    sp.add_argument("expr")
    sp.set_defaults(fn=_cmd_invariants)

    sp = with_field(sub.add_parser("isometric", help="decide isometry of two forms"))
    sp.add_argument("left")
    sp.add_argument("right")
    sp.set_defaults(fn=_cmd_isometric)

    sp = with_field(sub.add_parser("neighbor", help="verify a Pfister neighbour embedding"))
    sp.add_argument("expr")
    sp.add_argument("ambient", help="pf(...) ambient candidate")
    sp.set_defaults(fn=_cmd_neighbor)

    sp = with_field(sub.add_parser("i1-bounds", help="certified first Witt index bounds"))
    sp.add_argument("expr")
    _add_hint_flags(sp)
    sp.set_defaults(fn=_cmd_i1_bounds)

    sp = with_field(sub.add_parser("maxsplit", help="maximal splitting status"))
    sp.add_argument("expr")
    _add_hint_flags(sp)
    sp.set_defaults(fn=_cmd_maxsplit)

    vp = sub.add_parser("verify", help="run the corpus or the property batteries")
    vsub = vp.add_subparsers(dest="what", required=True)

    sp = vsub.add_parser("corpus", help="run a corpus file ('builtin' for the packaged one)")
    sp.add_argument("path")
    sp.add_argument("--format", choices=("text", "machine"), default="text")
    sp.set_defaults(fn=_cmd_verify_corpus)

    sp = vsub.add_parser("properties", help="run the seeded property batteries")
    sp.add_argument("--seed", type=int, default=None,
                    help=f"override the battery seed (default {DEFAULT_SEED}, or QUADFORMS_SEED)")
    sp.add_argument("--cases", type=int, default=None,
                    help="case count per battery instead of the defaults")
    sp.set_defaults(fn=_cmd_verify_properties)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except _USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except QuadFormsError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

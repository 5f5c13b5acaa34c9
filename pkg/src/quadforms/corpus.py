"""Regression corpus: parse record files, run queries, emit reports.

A corpus file is a sequence of records separated by blank lines.  Lines
whose first nonblank character is '#' are comments.  Each record line is
`key: value`; keys are

    id       unique record name (required)
    field    field expression, e.g. Q[[x,y]] (required)
    form     form expression, elaborated over the field (required)
    form2    second form, for the two-form queries
    class    Brauer class literal, for clifford_class
    query    operation name plus arguments (required)
    expect   expected outcome literal (required)
    note     free text, ignored by the runner
    hint_pfister          pf(...) similarity candidate for the bound engine
    hint_neighbor_ambient pf(...) ambient for the neighbour bound
    hint_product_pfister  pf(...) factor of a product presentation
    hint_product_base     base form of a product presentation
    hint_factor_ambient   pf(...) ambient for a non-Pfister product factor

Queries: anisotropic, isotropic, witt, dim, isometric, subform,
represents <coeff>, i1_exact, i1_interval, i1_contains <n>, maxsplit,
clifford_trivial, clifford_class, schur, dim5_neighbor, neighbor,
descend_neighbor, similar_pfister.  Outcome rendering is space-free so
the machine report stays line-oriented key=value.
"""

from __future__ import annotations

from dataclasses import dataclass

from .brauer import clifford_invariant, is_trivial, schur_index
from .errors import CorpusFormatError, QuadFormsError
from .expr import (
    elaborate_coeff,
    parse_brauer_class,
    parse_field,
    parse_form_expr,
    parse_pfister_spec,
    parse_qform,
)
from .forms import is_isotropic, is_subform, isometric, represents, witt_index
from .pfister import dim5_neighbor_test, generic_descend, is_neighbor, similar_to_pfister
from .splitting import StructureHints, i1_bounds, max_splitting_status

__all__ = [
    "CorpusRecord",
    "RecordResult",
    "parse_corpus",
    "run_record",
    "run_records",
    "emit_report",
    "run_corpus",
    "builtin_corpus_text",
]

_HINT_KEYS = (
    "hint_pfister",
    "hint_neighbor_ambient",
    "hint_product_pfister",
    "hint_product_base",
    "hint_factor_ambient",
)
_KEYS = ("id", "field", "form", "form2", "class", "query", "expect", "note") + _HINT_KEYS

_QUERY_ARGS = {
    "anisotropic": 0,
    "isotropic": 0,
    "witt": 0,
    "dim": 0,
    "isometric": 0,
    "subform": 0,
    "represents": 1,
    "i1_exact": 0,
    "i1_interval": 0,
    "i1_contains": 1,
    "maxsplit": 0,
    "clifford_trivial": 0,
    "clifford_class": 0,
    "schur": 0,
    "dim5_neighbor": 0,
    "neighbor": 0,
    "descend_neighbor": 0,
    "similar_pfister": 0,
}
_NEEDS_FORM2 = {"isometric", "subform"}


@dataclass(frozen=True)
class CorpusRecord:
    id: str
    field_text: str
    form_text: str
    query: str
    args: tuple
    expect: str
    form2_text: str | None = None
    class_text: str | None = None
    note: str = ""
    hints: tuple = ()  # (key, text) pairs, file order
    line: int = 0


@dataclass(frozen=True)
class RecordResult:
    record: CorpusRecord
    status: str  # pass | fail
    expected: str
    got: str
    rules: tuple = ()
    detail: tuple = ()  # rule trail lines for the text report


def parse_corpus(text: str, source: str = "<corpus>") -> tuple[CorpusRecord, ...]:
    records = []
    seen_ids = set()
    block: dict[str, str] = {}
    block_line = 0

    def flush(at_line: int):
        nonlocal block, block_line
        if not block:
            return
        for req in ("id", "field", "form", "query", "expect"):
            if req not in block:
                raise CorpusFormatError(
                    f"{source}:{block_line}: record is missing {req!r}"
                )
        rid = block["id"]
        if rid in seen_ids:
            raise CorpusFormatError(f"{source}:{block_line}: duplicate id {rid!r}")
        seen_ids.add(rid)
        qparts = block["query"].split()
        qname, qargs = qparts[0], tuple(qparts[1:])
        if qname not in _QUERY_ARGS:
            raise CorpusFormatError(
                f"{source}:{block_line}: unknown query {qname!r}"
            )
        if len(qargs) != _QUERY_ARGS[qname]:
            raise CorpusFormatError(
                f"{source}:{block_line}: query {qname!r} takes "
                f"{_QUERY_ARGS[qname]} argument(s), got {len(qargs)}"
            )
        if qname in _NEEDS_FORM2 and "form2" not in block:
            raise CorpusFormatError(
                f"{source}:{block_line}: query {qname!r} needs form2"
            )
        if qname == "clifford_class" and "class" not in block:
            raise CorpusFormatError(
                f"{source}:{block_line}: query clifford_class needs a class line"
            )
        if qname == "neighbor" and "hint_neighbor_ambient" not in block:
            raise CorpusFormatError(
                f"{source}:{block_line}: query neighbor needs hint_neighbor_ambient"
            )
        records.append(
            CorpusRecord(
                id=rid,
                field_text=block["field"],
                form_text=block["form"],
                query=qname,
                args=qargs,
                expect=block["expect"],
                form2_text=block.get("form2"),
                class_text=block.get("class"),
                note=block.get("note", ""),
                hints=tuple((k, block[k]) for k in _HINT_KEYS if k in block),
                line=block_line,
            )
        )
        block = {}
        block_line = 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            flush(lineno)
            continue
        if line.startswith("#"):
            continue
        if ":" not in line:
            raise CorpusFormatError(f"{source}:{lineno}: expected 'key: value'")
        key, _, value = line.partition(":")
        key = key.strip()
        value = value.strip()
        if key not in _KEYS:
            raise CorpusFormatError(f"{source}:{lineno}: unknown key {key!r}")
        if key in block:
            raise CorpusFormatError(f"{source}:{lineno}: duplicate key {key!r}")
        if not block:
            block_line = lineno
        block[key] = value
    flush(len(text.splitlines()) + 1)
    return tuple(records)


def _build_hints(rec: CorpusRecord, fld) -> StructureHints | None:
    kv = dict(rec.hints)
    if not kv:
        return None
    product = None
    if "hint_product_pfister" in kv or "hint_product_base" in kv:
        if not ("hint_product_pfister" in kv and "hint_product_base" in kv):
            raise CorpusFormatError(
                f"record {rec.id!r}: a product hint needs both the pfister "
                "factor and the base form"
            )
        pf = parse_pfister_spec(kv["hint_product_pfister"], fld)
        base = parse_qform(kv["hint_product_base"], fld)
        product = (pf.expand(), base)
    return StructureHints(
        pfister=parse_pfister_spec(kv["hint_pfister"], fld) if "hint_pfister" in kv else None,
        neighbor_ambient=parse_pfister_spec(kv["hint_neighbor_ambient"], fld)
        if "hint_neighbor_ambient" in kv
        else None,
        product=product,
        factor_ambient=parse_pfister_spec(kv["hint_factor_ambient"], fld)
        if "hint_factor_ambient" in kv
        else None,
    )


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _trail(firings) -> tuple:
    out = []
    for f in firings:
        line = f"{f.rule_id} {f.label}: {f.effect}"
        if f.premises:
            line += " [" + "; ".join(f.premises) + "]"
        out.append(line)
    return tuple(out)


def run_record(rec: CorpusRecord) -> RecordResult:
    """Evaluate one record; engine errors fail the record, they do not stop the run."""
    try:
        fld = parse_field(rec.field_text)
        q = parse_qform(rec.form_text, fld)
        got = ""
        rules: tuple = ()
        detail: tuple = ()
        name = rec.query
        if name == "anisotropic":
            got = _bool(not is_isotropic(q))
        elif name == "isotropic":
            got = _bool(is_isotropic(q))
        elif name == "witt":
            got = str(witt_index(q))
        elif name == "dim":
            got = str(q.dim)
        elif name == "isometric":
            got = _bool(isometric(q, parse_qform(rec.form2_text, fld)))
        elif name == "subform":
            got = _bool(is_subform(q, parse_qform(rec.form2_text, fld)))
        elif name == "represents":
            prog = parse_form_expr(f"<{rec.args[0]}>")
            c = elaborate_coeff(prog.expr.coeffs[0], fld)
            got = _bool(represents(q, c))
        elif name in ("i1_exact", "i1_interval", "i1_contains"):
            b = i1_bounds(q, hints=_build_hints(rec, fld))
            rules = b.rule_ids()
            detail = _trail(b.rules_fired)
            if name == "i1_exact":
                got = str(b.value) if b.exact else f"[{b.lo},{b.hi}]"
            elif name == "i1_interval":
                got = f"[{b.lo},{b.hi}]"
            else:
                n = int(rec.args[0])
                got = _bool(b.lo <= n <= b.hi and n % b.divisor == 0)
        elif name == "maxsplit":
            ms = max_splitting_status(q, hints=_build_hints(rec, fld))
            got = ms.status
            rules = ms.bounds.rule_ids()
            detail = _trail(ms.bounds.rules_fired)
        elif name == "clifford_trivial":
            got = _bool(is_trivial(clifford_invariant(q)))
        elif name == "clifford_class":
            expected_class = parse_brauer_class(rec.class_text, fld)
            got = _bool(is_trivial(clifford_invariant(q).plus(expected_class)))
        elif name == "schur":
            got = str(schur_index(clifford_invariant(q)))
        elif name == "dim5_neighbor":
            got = _bool(dim5_neighbor_test(q))
        elif name == "neighbor":
            amb = parse_pfister_spec(dict(rec.hints)["hint_neighbor_ambient"], fld)
            got = _bool(is_neighbor(q, amb) is not None)
        elif name == "descend_neighbor":
            got = generic_descend(q, "neighbor").status
        elif name == "similar_pfister":
            kv = dict(rec.hints)
            cand = parse_pfister_spec(kv["hint_pfister"], fld) if "hint_pfister" in kv else None
            got = similar_to_pfister(q, cand).status
        else:  # pragma: no cover - parse_corpus rejects unknown queries
            raise CorpusFormatError(f"unknown query {name!r}")
    except QuadFormsError as e:
        got = f"error:{type(e).__name__}"
        rules = ()
        detail = (str(e),)
    status = "pass" if got == rec.expect else "fail"
    return RecordResult(rec, status, rec.expect, got, rules, detail)


def run_records(records) -> tuple[RecordResult, ...]:
    return tuple(run_record(r) for r in records)


def emit_report(results, format: str = "text") -> str:
    """Deterministic report; 'machine' is line-oriented key=value, LF only."""
    npass = sum(1 for r in results if r.status == "pass")
    nfail = len(results) - npass
    if format == "machine":
        lines = []
        for r in results:
            lines.append(
                f"record={r.record.id} status={r.status} "
                f"expected={r.expected.replace(' ', '')} "
                f"got={r.got.replace(' ', '')} rules={','.join(r.rules)}"
            )
        lines.append(f"pass={npass} fail={nfail}")
        return "\n".join(lines) + "\n"
    if format != "text":
        raise ValueError(f"unknown report format {format!r}")
    lines = ["corpus report"]
    for r in results:
        if r.status == "pass":
            lines.append(f"PASS {r.record.id} ({r.record.query}) expected={r.expected}")
        else:
            lines.append(
                f"FAIL {r.record.id} ({r.record.query}) "
                f"expected={r.expected} got={r.got}"
            )
            for d in r.detail:
                lines.append(f"    {d}")
    lines.append(f"pass={npass} fail={nfail}")
    return "\n".join(lines) + "\n"


def builtin_corpus_text() -> str:
    from importlib.resources import files

    return files("quadforms").joinpath("data/examples.corpus").read_text("utf-8")


def run_corpus(path: str, format: str = "text") -> tuple[str, int]:
    """Run a corpus file; returns (report, exit_code 0 or 1).

    Raises CorpusFormatError (exit code 2 territory) on malformed input.
    The path 'builtin' runs the packaged example corpus.
    """
    if path == "builtin":
        text, source = builtin_corpus_text(), "builtin"
    else:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        source = path
    results = run_records(parse_corpus(text, source))
    report = emit_report(results, format)
    code = 0 if all(r.status == "pass" for r in results) else 1
    return report, code

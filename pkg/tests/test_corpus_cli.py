"""Corpus file format, record runner, report emitter, and the command line."""

import re
import subprocess
import sys

import pytest

from quadforms import cli
from quadforms.corpus import (
    builtin_corpus_text,
    emit_report,
    parse_corpus,
    run_corpus,
    run_record,
    run_records,
)
from quadforms.errors import CorpusFormatError

GOOD = """\
id: sample-pass
field: Q
form: <1,1,1,7>
query: i1_exact
expect: 1
"""


def record(text, name="<t>"):
    recs = parse_corpus(text, name)
    assert len(recs) == 1
    return recs[0]


class TestParseCorpus:
    def test_single_record(self):
        rec = record(GOOD)
        assert rec.id == "sample-pass" and rec.query == "i1_exact"
        assert rec.expect == "1" and rec.args == ()

    def test_comments_and_blank_lines(self):
        text = "# leading comment\n\n" + GOOD + "\n# trailing\n"
        assert record(text).id == "sample-pass"

    def test_query_argument(self):
        rec = record(GOOD.replace("i1_exact\nexpect: 1", "represents 7\nexpect: true"))
        assert rec.query == "represents" and rec.args == ("7",)

    def test_missing_required_key(self):
        bad = GOOD.replace("expect: 1\n", "")
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "f.corpus" in str(exc.value) and "expect" in str(exc.value)

    def test_duplicate_key(self):
        bad = GOOD + "expect: 2\n"
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "duplicate" in str(exc.value)

    def test_duplicate_id_across_records(self):
        bad = GOOD + "\n" + GOOD
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "sample-pass" in str(exc.value)

    def test_unknown_key(self):
        bad = GOOD + "shape: round\n"
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "shape" in str(exc.value)

    def test_unknown_query(self):
        bad = GOOD.replace("i1_exact", "discriminant")
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "discriminant" in str(exc.value)

    def test_wrong_argument_count(self):
        bad = GOOD.replace("i1_exact", "i1_exact 3")
        with pytest.raises(CorpusFormatError):
            parse_corpus(bad, "f.corpus")

    def test_missing_second_form(self):
        bad = GOOD.replace("i1_exact", "isometric")
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "form2" in str(exc.value)

    def test_missing_class(self):
        bad = GOOD.replace("i1_exact", "clifford_class")
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "class" in str(exc.value)

    def test_line_without_colon(self):
        bad = GOOD + "stray\n"
        with pytest.raises(CorpusFormatError) as exc:
            parse_corpus(bad, "f.corpus")
        assert "6" in str(exc.value)


class TestRunRecord:
    def test_pass(self):
        res = run_record(record(GOOD))
        assert res.status == "pass" and res.got == "1"

    def test_wrong_expectation_reports_computed_value(self):
        # a record claiming the product splits only 4 at the first step
        text = """\
id: wrong-product-claim
field: Q
form: pf(-1,-1) (*) <1,1,1,7>
query: i1_exact
expect: 4
"""
        res = run_record(record(text))
        assert res.status == "fail"
        assert res.expected == "4" and res.got == "8"
        assert res.rules

    def test_engine_error_becomes_failure(self):
        text = GOOD.replace("<1,1,1,7>", "<1,-1,3>")
        res = run_record(record(text))
        assert res.status == "fail" and res.got.startswith("error:")


class TestEmitReport:
    def test_empty_text(self):
        assert emit_report([], "text") == "corpus report\npass=0 fail=0\n"

    def test_empty_machine(self):
        assert emit_report([], "machine") == "pass=0 fail=0\n"

    def test_single_pass_machine_line(self):
        out = emit_report(run_records(parse_corpus(GOOD)), "machine")
        lines = out.splitlines()
        assert re.fullmatch(
            r"record=sample-pass status=pass expected=1 got=1 rules=[A-Z0-9,]*", lines[0]
        )
        assert lines[1] == "pass=1 fail=0"

    def test_counts_exactly_once(self):
        both = GOOD + "\n" + GOOD.replace("sample-pass", "sample-fail").replace(
            "expect: 1", "expect: 3"
        )
        out = emit_report(run_records(parse_corpus(both)), "text")
        assert out.count("pass=1 fail=1") == 1
        assert "FAIL sample-fail" in out and "got=3" not in out

    def test_machine_values_space_free(self):
        text = """\
id: class-query
field: Q[[x,y]]
form: <1,1,1,x,y>
query: clifford_class
class: (-x,-y) + (-x*y, x*y)
expect: true
"""
        out = emit_report(run_records(parse_corpus(text)), "machine")
        head = out.splitlines()[0]
        for chunk in head.split(" "):
            assert "=" in chunk

    def test_lf_only(self):
        out = emit_report(run_records(parse_corpus(GOOD)), "machine")
        assert "\r" not in out and out.endswith("\n")


class TestRunCorpus:
    def test_builtin_all_pass(self):
        report, code = run_corpus("builtin", "machine")
        assert code == 0
        assert re.search(r"pass=(\d+) fail=0\n$", report)
        n = int(re.search(r"pass=(\d+)", report).group(1))
        assert n >= 12

    def test_builtin_covers_stated_examples(self):
        text = builtin_corpus_text()
        for needle in ("i1_exact", "schur", "maxsplit", "dim5_neighbor", "subform"):
            assert needle in text

    def test_determinism(self):
        r1, _ = run_corpus("builtin", "machine")
        r2, _ = run_corpus("builtin", "machine")
        assert r1 == r2

    def test_file_path(self, tmp_path):
        p = tmp_path / "one.corpus"
        p.write_text(GOOD)
        report, code = run_corpus(str(p), "text")
        assert code == 0 and "PASS sample-pass" in report

    def test_failing_file_exits_one(self, tmp_path):
        p = tmp_path / "bad.corpus"
        p.write_text(GOOD.replace("expect: 1", "expect: 2"))
        report, code = run_corpus(str(p), "text")
        assert code == 1 and "FAIL" in report


class TestCli:
    def test_eval(self, capsys):
        assert cli.main(["eval", "<1,1,1,7> over Q"]) == 0
        assert "1,1,1,7" in capsys.readouterr().out.replace(" ", "")

    def test_witt(self, capsys):
        assert cli.main(["witt", "<1,-1,3> over Q"]) == 0
        out = capsys.readouterr().out
        assert "1" in out

    def test_i1_bounds_exact(self, capsys):
        assert cli.main(["i1-bounds", "<1,1,1,7> over Q"]) == 0
        assert "1" in capsys.readouterr().out

    def test_i1_bounds_with_hints(self, capsys):
        code = cli.main([
            "i1-bounds", "pf(-1,-1) (*) <1,1,1,7> over Q",
            "--pfister", "pf(-1,-1,-1,-1)",
            "--product-pfister", "pf(-1,-1)", "--product-base", "<1,1,1,7>",
        ])
        assert code == 0
        out = capsys.readouterr().out
        assert "8" in out and "R1" in out

    def test_isometric(self, capsys):
        code = cli.main(["isometric", "pf(-1,-1) (*) <1,1,1,7> over Q", "<1> (*) " + "<" + ",".join(["1"] * 16) + "> over Q"])
        assert code == 0
        assert "true" in capsys.readouterr().out

    def test_default_field_flag(self, capsys):
        assert cli.main(["eval", "<1,2>", "--field", "Q"]) == 0

    def test_maxsplit(self, capsys):
        assert cli.main(["maxsplit", "<1,1,1,1,7> over Q"]) == 0
        assert "yes" in capsys.readouterr().out

    def test_usage_error_exit_two(self, capsys):
        assert cli.main(["eval", "<1,> over Q"]) == 2

    def test_engine_error_exit_one(self, capsys):
        # isotropic input: the bounds engine refuses, an engine error not usage
        assert cli.main(["i1-bounds", "<1,-1> over Q"]) == 1

    def test_verify_corpus_builtin(self, capsys):
        assert cli.main(["verify", "corpus", "builtin", "--format", "machine"]) == 0
        out = capsys.readouterr().out
        assert re.search(r"pass=\d+ fail=0\n$", out)

    def test_verify_corpus_malformed_exit_two(self, tmp_path, capsys):
        p = tmp_path / "bad.corpus"
        p.write_text("id only\n")
        assert cli.main(["verify", "corpus", str(p)]) == 2

    def test_verify_properties_small(self, capsys):
        assert cli.main(["verify", "properties", "--seed", "5", "--cases", "3"]) == 0
        out = capsys.readouterr().out
        assert "square-class-laws" in out

    def test_seed_env_fallback(self, capsys, monkeypatch):
        monkeypatch.setenv("QUADFORMS_SEED", "99")
        assert cli.main(["verify", "properties", "--cases", "2"]) == 0
        assert "seed=99" in capsys.readouterr().out

    def test_explicit_seed_beats_env(self, capsys, monkeypatch):
        monkeypatch.setenv("QUADFORMS_SEED", "99")
        assert cli.main(["verify", "properties", "--seed", "7", "--cases", "2"]) == 0
        assert "seed=7" in capsys.readouterr().out


class TestInstalledScript:
    def test_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "quadforms.cli", "eval", "<1,2> over Q"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0 and proc.stdout.strip()

    def test_console_script(self):
        proc = subprocess.run(
            ["quadforms", "i1-bounds", "<1,1,1,7> over Q"], capture_output=True, text=True
        )
        assert proc.returncode == 0

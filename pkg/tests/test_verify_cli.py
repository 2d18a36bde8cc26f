import json

import pytest

from enrcov.cli import EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL, EXIT_OK, main
from enrcov.examples import BUILTIN_FILES, Predicate, PredicateError, builtin, builtin_registry
from enrcov.grammar import ParseError
from enrcov.gf2k import gf
from enrcov.inputfmt import parse_input
from enrcov.singclass import parse_multiset
from enrcov.verify import SCHEMA, Options, emit_report, emit_summary, run_example, verify_all

NAMES = ["12A1", "8A1+D4", "6A1+D6", "5A1+E7", "3D4", "D4+D8", "D4+E8", "D12",
         "D4D8-same-fiber", "E12"]


def _source(name):
    return builtin(name).source


# --- registry ------------------------------------------------------------------

def test_registry_has_ten_examples_in_order():
    assert [s.name for s in builtin_registry()] == NAMES
    assert len(BUILTIN_FILES) == 10


def test_registry_expectations(registry):
    assert parse_multiset(registry["12A1"].expect["sing-lifted"]) == parse_multiset("12*A(1)")
    assert registry["E12"].expect["verdict"] == "supersingular"
    assert registry["D4D8-same-fiber"].expect["tangent-fibers"] == "e1*t^2"


def test_lookup_by_file_stem():
    assert builtin("AD0").name == "8A1+D4"
    with pytest.raises(KeyError):
        builtin("nope")


def test_shipped_source_reparses_to_same_spec():
    s = builtin("D12")
    again = parse_input(s.source, "copy")
    assert [c.name for c in again.atlas.charts] == [c.name for c in s.atlas.charts]
    assert again.expect == s.expect
    for a, b in zip(again.atlas.charts, s.atlas.charts):
        assert a.relations == b.relations


# --- input errors ------------------------------------------------------------------

def test_undeclared_variable_has_position():
    text = _source("D12").replace("relation main : y^2", "relation main : q^2", 1)
    with pytest.raises(ParseError) as err:
        parse_input(text)
    line = next(i for i, l in enumerate(text.splitlines(), 1) if "q^2" in l)
    assert err.value.line == line and err.value.col > 0


def test_transition_with_non_member_relation_fails_c1():
    text = _source("D12").replace("x0 = t^2/x;", "x0 = t^3/x;", 1)
    report = run_example(parse_input(text, "bad"))
    c1 = report.check("C1")
    assert c1.status == "fail"
    rel = str(builtin("D12").atlas.chart("x0").relations[0])
    assert any(f"relation {rel} does not pull back" in w for w in c1.witness)


# --- single runs ----------------------------------------------------------------------

def test_3d4_passes_with_three_d4():
    r = run_example(builtin("3D4"))
    assert r.passed
    assert r.check("C6").detail == "3*D(4,0)"


def test_12a1_verdict_rows():
    r = run_example(builtin("12A1"))
    c10 = r.check("C10")
    assert c10.status == "pass" and r.verdict == "mixed"
    assert c10.witness[0] == "[0:1]: lambda=0, additive, supersingular"
    assert all(w.endswith("multiplicative, classical") for w in c10.witness[1:])
    assert len(c10.witness) == 3


def test_corrupted_derivation_fails_c2():
    text = _source("D12").replace("y0 = t^2*x0^2 + 1;", "y0 = t^2*x0^2;", 1)
    r = run_example(parse_input(text, "bad"))
    c2 = r.check("C2")
    assert not r.passed and c2.status == "fail"
    assert c2.witness


def test_small_extension_is_diagnosed():
    r = run_example(builtin("12A1"), Options(max_ext_degree=1))
    c4 = r.check("C4")
    assert c4.status == "fail" and "extension too small" in c4.detail
    assert {r.check(c).status for c in ("C5", "C6", "C7", "C9")} == {"skip"}


# --- reports ---------------------------------------------------------------------------

def test_text_report_has_one_row_per_check():
    r = run_example(builtin("D12"))
    lines = emit_report(r, "text").decode().splitlines()
    assert lines[0] == "== D12: PASS"
    assert [l.split()[0] for l in lines[1:len(r.checks) + 1]] == [c.id for c in r.checks]


def test_json_report_schema_and_witnesses():
    text = _source("D12").replace("y0 = t^2*x0^2 + 1;", "y0 = t^2*x0^2;", 1)
    doc = json.loads(emit_report(run_example(parse_input(text, "bad")), "json"))
    assert doc["schema"] == SCHEMA and doc["report"]["passed"] is False
    c2 = next(c for c in doc["report"]["checks"] if c["id"] == "C2")
    assert c2["witness"]


def test_empty_report_is_valid():
    doc = json.loads(emit_report(None, "json"))
    assert doc["report"]["checks"] == []
    assert emit_report(None, "text")


def test_reports_are_byte_stable_across_seeds():
    specs = [builtin("12A1"), builtin("D12")]
    a = emit_summary(verify_all(Options(seed=0), specs), "json")
    b = emit_summary(verify_all(Options(seed=5), specs), "json")
    assert a == b


def test_timings_only_on_request():
    r = run_example(builtin("D12"))
    assert b"seconds" not in emit_report(r, "json")
    assert b"seconds" in emit_report(r, "json", timings=True)


# --- predicates ----------------------------------------------------------------------------

def test_predicate_evaluation():
    W = gf(2)
    p = Predicate("e1 != e2 and e2 != 0")
    assert p(W, 1, 2) and not p(W, 1, 1) and not p(W, 1, 0)
    q = Predicate("e2 = 0 or sqrt(e2) = w*e1^2")
    assert q(W, 3, 0)


@pytest.mark.parametrize("text", ["e1 < e2", "foo != 0", "e1^e2 = 0", "e1 +"])
def test_bad_predicates(text):
    with pytest.raises(PredicateError):
        Predicate(text)


# --- command line ------------------------------------------------------------------------

def test_cli_verify_builtin(capsys):
    assert main(["verify", "D12"]) == EXIT_OK
    assert "== D12: PASS" in capsys.readouterr().out


def test_cli_verify_failure_exit(tmp_path, capsys):
    bad = tmp_path / "bad.enr"
    bad.write_text(_source("D12").replace("y0 = t^2*x0^2 + 1;", "y0 = t^2*x0^2;", 1))
    assert main(["verify", str(bad), "--format", "json"]) == EXIT_FAIL
    assert json.loads(capsys.readouterr().out)["report"]["passed"] is False


def test_cli_input_errors(tmp_path, capsys):
    assert main(["verify", str(tmp_path / "missing.enr")]) == EXIT_INPUT
    bad = tmp_path / "bad.enr"
    bad.write_text("field gf2\nchart c vars=x,y\nrelation c : x + z\n")
    assert main(["sing", str(bad)]) == EXIT_INPUT
    err = capsys.readouterr().err
    assert "line 3" in err


def test_cli_sing_and_lie(capsys):
    assert main(["sing", "3D4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "covering: 3*D(4,0)" in out
    assert main(["lie", "12A1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "type: 1" in out and "all/1 additive" in out


def test_cli_fix(capsys):
    assert main(["fix", "12A1", "--coeffs", "1,w"]) == EXIT_OK
    assert "fixed-point-free: yes" in capsys.readouterr().out
    assert main(["fix", "E12", "--coeffs", "0,1"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "fixed-point-free: no" in out and out.count("length") == 1


def test_cli_classify_jet(tmp_path, capsys):
    jet = tmp_path / "e12.jet"
    jet.write_text("# the E12 form\nz^2 + x^3 + y^7\n")
    assert main(["classify-jet", str(jet)]) == EXIT_OK
    assert capsys.readouterr().out.startswith("EDP_E12")
    cut = tmp_path / "cut.jet"
    cut.write_text("order 4\nz^2 + x^3\n")
    assert main(["classify-jet", str(cut)]) == EXIT_FAIL


def test_cli_internal_error_exit(monkeypatch, capsys):
    import enrcov.cli as cli
    from enrcov.singclass import TableAmbiguity

    def boom(args):
        raise TableAmbiguity("two parents")

    monkeypatch.setattr(cli, "cmd_sing", boom)
    assert main(["sing", "D12"]) == EXIT_INTERNAL
    assert "two parents" in capsys.readouterr().err

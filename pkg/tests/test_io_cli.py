import io
import json

import pytest

from sasaki_lab import cli
from sasaki_lab.errors import AlgebraSyntaxError, UnknownFixture, ValidationError
from sasaki_lab.fileformat import dump_algebra, dumps, load_algebra, loads
from sasaki_lab.fixtures import FIXTURE_IDS, fixture, fixture_file, fixture_text, printed_tables_text, validate_fixture


def run(*argv):
    out = io.StringIO()
    code = cli.main(list(argv), out)
    return code, out.getvalue()


# -- file format ------------------------------------------------------------------------


def test_load_fig7_from_path(tmp_path, fig):
    path = tmp_path / "fig7.alg"
    path.write_text(fixture_text("fig7_ex2"), encoding="utf-8")
    alg = load_algebra(path)
    assert alg.kind == "lambda" and alg.same_tables(fig("fig7_ex2"))


def test_fig5_order_as_lattice_kind():
    text = fixture_text("fig5_ex1").replace("kind lambda", "kind lattice")
    text = "\n".join(line for line in text.splitlines() if not line.startswith(("choice", "complete")))
    with pytest.raises(ValidationError) as exc:
        loads(text)
    assert exc.value.axiom == "NotALattice"
    assert exc.value.witness == ("a", "b")


def test_empty_elements_line():
    with pytest.raises(AlgebraSyntaxError) as exc:
        loads("algebra x\nkind lattice\nelements\n")
    assert exc.value.line == 3


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("kind lattice\nelements 0 1\ncovers 0-1\n", 3, 8),
        ("kind lattice\nelements 0 1\nfrobnicate\n", 3, 1),
        ("kind blob\n", 1, 1),
        ("kind lattice\nelements 0 1\ncovers 0<1\nunary neg: 0=1 1\n", 4, 16),
        ("kind lattice\n  elements 0 1\n  wat 3\n", 3, 3),
    ],
)
def test_syntax_errors_carry_positions(text, line, col):
    with pytest.raises(AlgebraSyntaxError) as exc:
        loads(text)
    assert (exc.value.line, exc.value.col) == (line, col)


def test_comments_and_blank_lines():
    af = loads("# a chain\n\nalgebra c2\nkind lattice   # inline\nelements 0 1\ncovers 0<1\n")
    assert af.name == "c2" and af.algebra.size == 2


def test_missing_choice_is_reported():
    text = fixture_text("fig7_ex2").replace("choice join a b = 1\n", "")
    with pytest.raises(ValidationError) as exc:
        loads(text)
    assert exc.value.witness == ("a", "b")


def test_bad_table_is_a_validation_error():
    text = fixture_text("pseudoring6").replace("row a: a 0 0 1 0 c", "row a: a 0 0 1 0 d")
    with pytest.raises(ValidationError):
        loads(text)


def test_unknown_element_in_covers():
    with pytest.raises(AlgebraSyntaxError):
        loads("kind lattice\nelements 0 1\ncovers 0<2\n")


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_round_trip(fid, tmp_path):
    af = fixture_file(fid)
    text = dumps(af.algebra, af.expect)
    again = loads(text)
    assert again.algebra.same_tables(af.algebra)
    assert again.algebra.kind == af.algebra.kind
    assert again.algebra.order == af.algebra.order
    assert again.expect == af.expect
    # and a second pass is byte-stable
    assert dumps(again.algebra, again.expect) == text
    path = tmp_path / f"{fid}.alg"
    dump_algebra(af.algebra, path, af.expect)
    assert load_algebra(path).same_tables(af.algebra)


# -- fixtures ---------------------------------------------------------------------------


@pytest.mark.parametrize("fid", FIXTURE_IDS)
def test_fixture_self_validation(fid):
    _, rows = validate_fixture(fid)
    assert rows
    for name, expected, verdict in rows:
        assert verdict.holds == expected, (fid, name, verdict.describe())


def test_fixture_expectation_coverage():
    exp = {fid: fixture_file(fid).expect for fid in FIXTURE_IDS}
    assert exp["fig7_ex2"]["adjoint"] and not exp["fig7_ex2"]["C1"]
    assert exp["fano"] == {**exp["fano"], "C1": True, "C2": True, "A1": False, "A2": False, "E1": False}
    assert exp["fig1"]["B1"] and exp["fig1"]["B2"] and exp["fig1"]["adjoint"] and not exp["fig1"]["orthomodular"]
    assert exp["n5_bprime_c"]["B1"] and not exp["n5_bprime_c"]["A2"]
    assert exp["fig5_ex1"]["A2"] and not exp["fig5_ex1"]["A1"] and not exp["fig5_ex1"]["C2"]


def test_aliases_and_unknown_fixture():
    assert fixture("fig7").same_tables(fixture("fig7_ex2"))
    with pytest.raises(UnknownFixture):
        fixture("fig99")


def test_fig4_loads_as_poset(fig):
    alg = fig("fig4")
    assert alg.kind == "poset" and alg.size == 10


# -- command line -----------------------------------------------------------------------


def test_check_fig1():
    code, out = run("check", "fixture:fig1", "--scheme", "S1", "--conditions", "B1,B2,A1,A2")
    assert code == 0
    assert out.count("PASS") == 4 and "FAIL" not in out


def test_check_failure_exit_code():
    code, out = run("check", "fixture:n5_bprime_a", "--conditions", "A1")
    assert code == 1
    assert "FAIL A1 = false witness x=c y=b z=0" in out


def test_check_expect_mode():
    code, out = run("check", "fixture:fano", "--expect")
    assert code == 0
    assert "E1 = false (expected false) witness x=a y=b' z=d'" in out


def test_check_extra_law():
    code, out = run("check", "fixture:mo2", "--conditions", "orthomodular", "--law", "x v x' = 1")
    assert code == 0 and "x v x' = 1 = true" in out


def test_derive_print_tables_is_byte_identical():
    code, out = run("derive", "fixture:fig7", "--scheme", "S2", "--print-tables")
    assert code == 0
    assert out == printed_tables_text("fig7_ex2")
    code, out = run("derive", "fixture:pseudoring6", "--scheme", "S4", "--print-tables")
    assert out == printed_tables_text("pseudoring6")


def test_derive_report():
    code, out = run("derive", "fixture:fig5_ex1")
    assert code == 1
    assert "PASS A2 = true" in out and "FAIL A1 = false" in out


def test_residual_command():
    assert run("residual", "fixture:fig7")[0] == 0
    code, out = run("residual", "fixture:fano", "--direction", "imp")
    assert code == 1 and "no residual" in out


def test_translate_round_trip():
    code, out = run("translate", "fixture:mo2")
    assert code == 0
    ring = loads(out).algebra
    assert ring.same_tables(fixture("pseudoring6"))


def test_translate_rejects_non_orthomodular():
    assert run("translate", "fixture:fig1")[0] == 2


def test_product_and_subalgebra():
    code, out = run("product", "fixture:fig7", "fixture:fig7", "--conditions", "A1,A2,is_lattice")
    assert code == 1  # is_lattice fails
    assert "PASS A1" in out and "PASS A2" in out and "FAIL is_lattice" in out
    code, out = run("subalgebra", "fixture:fig7", "--seed", "c")
    assert code == 0 and "elements 0 c d 1" in out


def test_enumerate_commands():
    code, out = run("enumerate", "unary", "fixture:n5_bprime_a", "--filter", "complementation")
    assert code == 0 and out.splitlines()[-1] == "# 2 unary operations"
    code, out = run("enumerate", "completions", "fixture:fig3", "--cap", "3")
    assert out.splitlines()[-1] == "# 3 completions (cap reached)"
    code, out = run("enumerate", "completions", "fixture:fig3")
    assert out.splitlines()[-1] == "# 9 completions (exhausted)"


def test_falsify_command():
    code, out = run("falsify", "th5", "--bound", "5", "--expect-empty")
    assert code == 0 and "0 hits, exhausted" in out
    code, out = run("falsify", "selftest_inverted", "--bound", "4", "--expect-empty", "--max-hits", "1")
    assert code == 1 and "## hit 1" in out
    assert run("falsify", "selftest_inverted", "--bound", "4", "--max-hits", "1")[0] == 0


def test_fixtures_command():
    code, out = run("fixtures")
    assert code == 0 and out.count("PASS") == len(FIXTURE_IDS)
    code, out = run("fixtures", "--list")
    assert out.split() == list(FIXTURE_IDS)


def test_usage_errors(capsys):
    assert run("check", "fixture:nope")[0] == 2
    assert run("check", "fixture:fig1", "--conditions", "nope")[0] == 2
    assert run("check", "/no/such/file.alg")[0] == 2
    assert run("falsify", "th5", "--bound", "12")[0] == 2
    assert run("derive", "fixture:fig1", "--scheme", "S3")[0] == 2
    assert run("frobnicate")[0] == 2
    assert "error:" in capsys.readouterr().err


def test_json_lines():
    code, out = run("--format", "json-lines", "check", "fixture:n5_bprime_a", "--conditions", "A1,A2,B1")
    records = [json.loads(line) for line in out.splitlines()]
    assert [r["name"] for r in records] == ["A1", "A2", "B1"]
    assert records[0] == {"name": "A1", "holds": False, "witness": {"x": "c", "y": "b", "z": "0"},
                          "checked_count": records[0]["checked_count"]}
    assert records[1]["witness"] == {"x": "a", "y": "c", "z": "a"}
    assert all(isinstance(r["checked_count"], int) for r in records)


def test_format_after_subcommand():
    code, out = run("check", "fixture:fig1", "--conditions", "A1", "--format", "json-lines")
    assert json.loads(out)["holds"] is True


def test_output_is_deterministic():
    argv = ("falsify", "selftest_inverted", "--bound", "4", "--max-hits", "3")
    assert run(*argv) == run(*argv)
    argv = ("--format", "json-lines", "check", "fixture:fano")
    assert run(*argv) == run(*argv)


def test_load_file_path(tmp_path):
    path = tmp_path / "c.alg"
    path.write_text("algebra c2\nkind lattice\nelements 0 1\ncovers 0<1\nunary neg: 0=1 1=0\n", encoding="utf-8")
    code, out = run("check", str(path), "--conditions", "A1,A2,orthomodular")
    assert code == 0 and out.startswith("# c2 (lattice, 2 elements)")

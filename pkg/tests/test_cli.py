"""Command-line interface: subcommands, exit codes, output shapes."""

from __future__ import annotations

import json
import shutil
import subprocess

import pytest

from normlog import corpus, parse_program
from normlog.cli import NonFactNarrative, check_narrative, main

CHOICE = "join :- not stay.\nstay :- not join.\n"

CHECK_BASE = (
    "late :- commitment, not arrived, not late.\n"
    "late :- confessed.\n"
    "commitment.\n"
    "#exceptions late/0.\n"
)


@pytest.fixture
def write(tmp_path):
    def _write(name: str, text: str):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


class TestCompile:
    THEORY = (
        "obligatory go unless -go.\n"
        "obligatory tell when go.\n"
        "fact -go.\n"
    )

    def test_compiles_to_stdout(self, write, capsys):
        assert main(["compile", write("t.deon", self.THEORY)]) == 0
        out = capsys.readouterr().out
        assert "-go :- not go, not -go." in out
        assert ":- go, not tell." in out
        assert out.endswith("-go.\n")
        parse_program(out)  # the emitted program is re-loadable

    def test_output_file(self, write, tmp_path, capsys):
        target = tmp_path / "out.asp"
        assert main(["compile", write("t.deon", self.THEORY), "-o", str(target)]) == 0
        assert capsys.readouterr().out == ""
        parse_program(target.read_text())

    def test_trace_goes_to_stderr(self, write, capsys):
        assert main(["compile", write("t.deon", self.THEORY), "--trace"]) == 0
        err = capsys.readouterr().err
        assert "OLON-OB" in err
        assert "FACT" in err

    def test_json_trace(self, write, capsys):
        assert main(["compile", write("t.deon", self.THEORY), "--trace", "--json"]) == 0
        entries = json.loads(capsys.readouterr().err)
        assert [e["tag"] for e in entries] == ["OLON-OB", "COND-OB", "FACT"]

    def test_bad_theory_exits_2(self, write, capsys):
        assert main(["compile", write("t.deon", "obligatory .\n")]) == 2
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_file_exits_2(self, tmp_path, capsys):
        assert main(["compile", str(tmp_path / "absent.deon")]) == 2
        assert "error:" in capsys.readouterr().err


class TestSolve:
    def test_models_listed_and_counted(self, write, capsys):
        assert main(["solve", write("p.asp", CHOICE)]) == 0
        out = capsys.readouterr().out
        assert "Model 1: { join }" in out
        assert "Model 2: { stay }" in out
        assert "Models: 2" in out

    def test_no_models_exits_1(self, write, capsys):
        assert main(["solve", write("p.asp", "p.\n:- p.\n")]) == 1
        assert "Models: 0" in capsys.readouterr().out

    def test_query_filters_and_reports(self, write, capsys):
        assert main(["solve", write("p.asp", CHOICE), "--query", "join"]) == 0
        out = capsys.readouterr().out
        assert "Model 1: { join }" in out
        assert "Query 'join' satisfied in 1 of 2 models" in out

    def test_unsatisfied_query_exits_1(self, write, capsys):
        code = main(["solve", write("p.asp", CHOICE), "--query", "join, stay"])
        assert code == 1
        assert "satisfied in 0 of 2 models" in capsys.readouterr().out

    def test_json_payload(self, write, capsys):
        assert main(["solve", write("p.asp", CHOICE), "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["count"] == 2
        assert [m["literals"] for m in payload["models"]] == [["join"], ["stay"]]

    def test_max_models_truncates_display_not_count(self, write, capsys):
        path = write("p.asp", CHOICE)
        assert main(["solve", path, "--max-models", "1", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["count"] == 2
        assert len(payload["models"]) == 1

        assert main(["solve", path, "--max-models", "1"]) == 0
        out = capsys.readouterr().out
        assert "Model 2:" not in out
        assert "Models: 2" in out

    def test_dump_ground_prints_the_ground_program(self, write, capsys):
        path = write("p.asp", "p(1).\nq(X) :- p(X).\n")
        assert main(["solve", path, "--dump-ground"]) == 0
        out = capsys.readouterr().out
        assert "q(1) :- p(1)." in out

    def test_dump_ground_json(self, write, capsys):
        path = write("p.asp", "p(1).\nq(X) :- p(X).\n")
        assert main(["solve", path, "--dump-ground", "--json"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert "q(1) :- p(1)." in payload["ground"]

    def test_show_naf_lists_absent_complements(self, write, capsys):
        assert main(["solve", write("p.asp", "-kill.\n"), "--show-naf"]) == 0
        assert "Model 1: { -kill, not kill }" in capsys.readouterr().out

    def test_parse_error_exits_2(self, write, capsys):
        assert main(["solve", write("p.asp", "p :- \n")]) == 2
        assert "error:" in capsys.readouterr().err


class TestCheck:
    def test_triggered_exception_with_justification(self, write, capsys):
        code = main(
            ["check", write("base.asp", CHECK_BASE), "--narrative", write("n.asp", "confessed.\n")]
        )
        assert code == 0
        out = capsys.readouterr().out
        assert "Satisfiable: yes (1 model)" in out
        assert "Triggered exceptions: late" in out
        assert "Justification of late:" in out
        assert "late  <=  late :- confessed." in out
        assert "confessed  [fact]" in out

    def test_compliant_narrative(self, write, capsys):
        code = main(
            ["check", write("base.asp", CHECK_BASE), "--narrative", write("n.asp", "arrived.\n")]
        )
        assert code == 0
        assert "Triggered exceptions: none" in capsys.readouterr().out

    def test_unsatisfiable_narrative_exits_1(self, write, capsys):
        code = main(
            ["check", write("base.asp", CHECK_BASE), "--narrative", write("n.asp", "")]
        )
        assert code == 1
        assert "Satisfiable: no (0 models)" in capsys.readouterr().out

    def test_json_report(self, write, capsys):
        code = main(
            [
                "check",
                write("base.asp", CHECK_BASE),
                "--narrative",
                write("n.asp", "confessed.\n"),
                "--json",
            ]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["narrative"] == "n"
        assert payload["satisfiable"] is True
        assert payload["count"] == 1
        assert payload["triggered_exceptions"] == ["late"]
        assert payload["models"][0]["literals"] == ["commitment", "confessed", "late"]

    def test_rule_in_narrative_exits_2(self, write, capsys):
        code = main(
            ["check", write("base.asp", CHECK_BASE), "--narrative", write("n.asp", "p :- q.\n")]
        )
        assert code == 2
        assert "ground facts" in capsys.readouterr().err

    def test_directive_in_narrative_exits_2(self, write):
        code = main(
            ["check", write("base.asp", CHECK_BASE), "--narrative", write("n.asp", "#show p/0.\n")]
        )
        assert code == 2

    def test_non_ground_fact_exits_2(self, write):
        code = main(
            ["check", write("base.asp", CHECK_BASE), "--narrative", write("n.asp", "p(X).\n")]
        )
        assert code == 2

    def test_arity_clash_with_base_exits_2(self, write, capsys):
        code = main(
            [
                "check",
                write("base.asp", CHECK_BASE),
                "--narrative",
                write("n.asp", "commitment(3).\n"),
            ]
        )
        assert code == 2
        assert "commitment" in capsys.readouterr().err


class TestCheckNarrativeApi:
    def test_naf_loop_heads_count_as_exceptions_without_directive(self):
        base = parse_program("v :- d, not v.\nv :- w.\nd.\n")
        report = check_narrative(base, parse_program("w.\n"), "n")
        assert [str(l) for l in report.triggered] == ["v"]

    def test_exception_must_hold_in_every_model(self):
        # v holds only in the branch where the abduced support is chosen, so
        # the narrative does not force it and nothing counts as triggered.
        base = parse_program("v :- d, not v.\nv :- w.\n#abducible w.\n")
        report = check_narrative(base, parse_program(""), "n")
        assert report.satisfiable
        assert report.triggered == []

    def test_rejects_abducible_directive_in_narrative(self):
        base = parse_program("p.\n")
        with pytest.raises(NonFactNarrative):
            check_narrative(base, parse_program("#abducible q.\n"), "n")


class TestCorpus:
    def test_full_corpus_matches(self, capsys):
        assert main(["corpus"]) == 0
        out = capsys.readouterr().out
        assert f"{len(corpus.CASES)}/{len(corpus.CASES)} cases match" in out

    def test_filter_prefix(self, capsys):
        assert main(["corpus", "--filter", "chisholm"]) == 0
        out = capsys.readouterr().out
        assert "2/2 cases match" in out
        assert "chisholm " in out or "chisholm_" in out

    def test_unknown_filter_exits_2(self, capsys):
        assert main(["corpus", "--filter", "zzz"]) == 2
        assert "no corpus case matches" in capsys.readouterr().err

    def test_tampered_golden_fails(self, capsys):
        case = next(c for c in corpus.CASES if c.name == "dog")
        golden = corpus.golden_path(case)
        original = golden.read_bytes()
        try:
            golden.write_bytes(b"{}\n")
            assert main(["corpus", "--filter", "dog"]) == 1
            out = capsys.readouterr().out
            assert "dog      FAIL" in out
            assert "dog_neg  PASS" in out
            assert "1/2 cases match" in out
        finally:
            golden.write_bytes(original)

    def test_write_goldens_is_idempotent(self, capsys):
        case = next(c for c in corpus.CASES if c.name == "dog")
        golden = corpus.golden_path(case)
        original = golden.read_bytes()
        try:
            assert main(["corpus", "--filter", "dog", "--write-goldens"]) == 0
            assert "WROTE" in capsys.readouterr().out
            assert golden.read_bytes() == original
        finally:
            golden.write_bytes(original)

    def test_goldens_exist_for_every_case(self):
        for case in corpus.CASES:
            assert corpus.golden_path(case).exists(), case.name


class TestEntryPoint:
    def test_unknown_subcommand_raises_system_exit(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])

    def test_missing_subcommand_raises_system_exit(self):
        with pytest.raises(SystemExit):
            main([])

    def test_console_script_is_installed(self, write):
        exe = shutil.which("normlog")
        assert exe, "console script 'normlog' not on PATH"
        proc = subprocess.run(
            [exe, "solve", write("p.asp", CHOICE), "--json"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["count"] == 2

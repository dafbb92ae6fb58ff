import io
import json
import subprocess
import sys

import pytest

from codeviews.cli import run_cli

from conftest import FIG2


def run(argv, stdin=""):
    proc = subprocess.run([sys.executable, "-m", "codeviews", *argv], input=stdin.encode(),
                          capture_output=True)
    return proc.returncode, proc.stdout, proc.stderr.decode()


def test_fig2_json(tmp_path):
    src = tmp_path / "Main.java"
    src.write_text(FIG2)
    code, out, _ = run(["--file", str(src), "--views", "cfg,dfg", "--format", "json"])
    assert code == 0
    d = json.loads(out)
    assert d["meta"]["views"] == ["CFG", "DFG"]
    assert {"constructor_call", "data_flow"} <= {e["kind"] for e in d["edges"]}


def test_ast_stdin_single_root():
    code, out, _ = run(["--views", "ast"], "class A{}")
    assert code == 0
    d = json.loads(out)
    targets = {e["dst"] for e in d["edges"]}
    assert [n["id"] for n in d["nodes"] if n["id"] not in targets] == [0]


def test_syntax_error_exit_code():
    code, out, err = run(["--views", "cfg"], "int f(){")
    assert code == 3 and out == b""
    assert "bytes" in err and "line 1" in err


def test_bad_flags():
    assert run(["--views", "pdg"], "x=1;")[0] == 2
    assert run(["--format", "png"], "x=1;")[0] == 2
    assert run(["--bogus"], "x=1;")[0] == 2


def test_missing_file():
    assert run(["--file", "/nonexistent/X.java"])[0] == 2


def test_dot_color_toggle(monkeypatch, capsysbinary):
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(b"x = 1; y = x;")))
    assert run_cli(["--views", "cfg,dfg", "--format", "dot"]) == 0
    colored = capsysbinary.readouterr().out
    assert b"color=" in colored
    monkeypatch.setenv("CODEVIEW_NO_COLOR", "1")
    monkeypatch.setattr(sys, "stdin", io.TextIOWrapper(io.BytesIO(b"x = 1; y = x;")))
    assert run_cli(["--views", "cfg,dfg", "--format", "dot"]) == 0
    assert b"color=" not in capsysbinary.readouterr().out


def test_out_file_and_determinism(tmp_path):
    src = tmp_path / "a.java"
    src.write_text(FIG2)
    outs = []
    for i in range(2):
        dst = tmp_path / f"out{i}.dot"
        assert run(["--file", str(src), "--views", "ast,cfg,dfg", "--format", "dot", "--out", str(dst)])[0] == 0
        outs.append(dst.read_bytes())
    assert outs[0] == outs[1]
    assert not list(tmp_path.glob(".*.tmp"))


def test_method_snippet_flag():
    code, out, _ = run(["--views", "cfg", "--method-snippet"], "Foo(int x) { this.x = x; }")
    assert code == 0
    assert json.loads(out)["meta"]["synthetic_wrapper"] is True


def test_ast_options():
    code, out, _ = run(["--views", "ast", "--collapsed", "--blacklist", "parenthesized_expression"],
                       "int x = 1; x = (x + 1);")
    assert code == 0
    d = json.loads(out)
    kinds = [n["kind"] for n in d["nodes"]]
    assert "parenthesized_expression" not in kinds
    assert [n["label"] for n in d["nodes"] if n["kind"] == "identifier"] == ["x"]


@pytest.mark.parametrize("jobs", ["1", "2"])
def test_batch(tmp_path, jobs):
    src = tmp_path / "src"
    (src / "pkg").mkdir(parents=True)
    (src / "A.java").write_text("class A { void f() { int x = 1; } }")
    (src / "pkg" / "B.java").write_text(FIG2)
    (src / "Bad.java").write_text("int f({")
    (src / "notes.txt").write_text("ignored")
    out = tmp_path / "out"
    code, stdout, err = run(["--batch", str(src), "--out", str(out), "--views", "cfg,dfg", "--jobs", jobs])
    assert code == 0
    assert stdout.decode().strip() == "processed=3 succeeded=2 syntax_errors=1 failed=0"
    assert (out / "A.java.json").exists() and (out / "pkg" / "B.java.json").exists()
    assert not (out / "Bad.java.json").exists()
    assert "Bad.java" in err


def test_batch_requires_out(tmp_path):
    assert run(["--batch", str(tmp_path)])[0] == 2

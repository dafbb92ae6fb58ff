"""Exit criteria, one check per criterion.

Each check returns ``(passed, detail)``. Under pytest the results are
collected and printed as one PASS/FAIL line per criterion at the end of the
run; ``python3 tests/test_acceptance.py`` prints the same lines directly.
"""

from __future__ import annotations

import itertools
import os
import random
import sys
import tempfile
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from codeviews import SourceSyntaxError, ViewConfig, combine_views, generate, to_dot, to_json  # noqa: E402
from codeviews.ast_view import collapse_ast, minimize_ast  # noqa: E402
from codeviews.cfg import add_interprocedural_edges, build_intraprocedural_cfg  # noqa: E402
from codeviews.dfg import DataFlowAnalysis  # noqa: E402
from codeviews.errors import EmptyInputError  # noqa: E402
from codeviews.parsing import parse_snippet  # noqa: E402
from codeviews.symtab import VARIABLE_KINDS, build_symbol_table  # noqa: E402

from conftest import FIG2, MUTATE, PRIMITIVE, TEN_STATEMENTS, load_corpus  # noqa: E402
from golden.regen import HERE as GOLDEN, render_all  # noqa: E402
from oracles.inline_oracle import MUTATE_INLINED, PRIMITIVE_INLINED, inlined_pairs  # noqa: E402
from oracles.rda_oracle import random_program, reaching_pairs  # noqa: E402

RESULTS: dict[str, tuple[bool, str]] = {}

FIG2_RUNTIME_S = 1.0
RDA_PROGRAMS, RDA_RUNTIME_S = 1000, 60.0
AST_METHODS = 500
ROBUST_SNIPPETS, ROBUST_RUNTIME_S = 1000, 600.0
DETERMINISM_RUNS = 3


def _labels(g, kind):
    return {(g.nodes[e.src].label, g.nodes[e.dst].label) for e in g.edges if e.kind == kind}


def check_fig2():
    t0 = time.perf_counter()
    r = generate(FIG2, ViewConfig(views=("cfg",)))
    elapsed = time.perf_counter() - t0
    g = r.graph
    calls = [e for e in g.edges if e.kind == "constructor_call"]
    returns = [e for e in g.edges if e.kind == "class_return"]
    targets = sorted((g.nodes[e.dst].kind, g.nodes[e.dst].label) for e in calls)
    want_targets = [("constructor_entry", "ClassB(int start)"), ("type_declaration", "class ClassA")]
    ret_ok = len(returns) == 1 and (
        g.nodes[returns[0].src].kind == "method_exit"
        and g.nodes[returns[0].src].label == "exit ClassB"
        and g.nodes[returns[0].dst].label == "ClassB b = new ClassB(5);"
    )
    ok = len(calls) == 2 and targets == want_targets and ret_ok and elapsed < FIG2_RUNTIME_S
    return ok, f"constructor_call={len(calls)} class_return={len(returns)} runtime={elapsed:.3f}s (<{FIG2_RUNTIME_S}s)"


def check_rda_oracle():
    t0 = time.perf_counter()
    mismatches, nonempty = 0, 0
    config = ViewConfig(views=("dfg",))
    for seed in range(RDA_PROGRAMS):
        program = random_program(random.Random(seed))
        g = generate(program.text, config).graph
        by_start = {n.span[0]: n.id for n in g.nodes.values()
                    if n.kind not in ("method_entry", "method_exit")}
        start_of = {v: k for k, v in by_start.items()}
        got = {(start_of[e.src], start_of[e.dst]) for e in g.edges if e.kind == "data_flow"}
        want = reaching_pairs(program)
        nonempty += bool(want)
        mismatches += got != want
    elapsed = time.perf_counter() - t0
    ok = mismatches == 0 and elapsed < RDA_RUNTIME_S
    return ok, (f"programs={RDA_PROGRAMS} mismatches={mismatches} with_edges={nonempty} "
                f"runtime={elapsed:.1f}s (<{RDA_RUNTIME_S:.0f}s)")


def check_loop_fixture():
    g = generate("x=0; while(c){x=x+1;} r=x;", ViewConfig(views=("dfg",))).graph
    got = _labels(g, "data_flow")
    want = {("x=0;", "r=x;"), ("x=x+1;", "r=x;"), ("x=x+1;", "x=x+1;")}
    return want <= got, f"required={sorted(want)} missing={sorted(want - got)}"


def check_write_back():
    config = ViewConfig(views=("dfg",))
    cross = ("xs.add(1);", "int n = items.size();")
    twin = ("x = x + 1;", "int n = count;")
    mutate = _labels(generate(MUTATE, config).graph, "data_flow")
    primitive = _labels(generate(PRIMITIVE, config).graph, "data_flow")
    oracle_mut = cross in inlined_pairs(MUTATE_INLINED)
    oracle_prim = twin not in inlined_pairs(PRIMITIVE_INLINED)
    # the primitive twin must not gain any edge that leaves the callee body
    callee_out = [(s, d) for s, d in primitive if s == "x = x + 1;" and d != "x = x + 1;"]
    ok = cross in mutate and twin not in primitive and not callee_out and oracle_mut and oracle_prim
    return ok, (f"mutation_edge={cross in mutate} primitive_cross_edges={len(callee_out)} "
                f"inline_oracle_agrees={oracle_mut and oracle_prim}")


def check_two_phase_monotone():
    units = [r["code"] for r in load_corpus()] + [FIG2, MUTATE, PRIMITIVE, TEN_STATEMENTS]
    violations, statements, inter_units = 0, 0, 0
    for src in units:
        _, cst = parse_snippet(src)
        table = build_symbol_table(cst)
        cfg = build_intraprocedural_cfg(cst, table)
        add_interprocedural_edges(cfg, table)
        inter_units += any(e.kind.endswith(("_call", "_return")) for e in cfg.edges)
        analysis = DataFlowAnalysis(cfg, table)
        p1, p2 = analysis.phase1(), analysis.phase2()
        for n in cfg.nodes:
            statements += 1
            if not (p1.in_[n] <= p2.in_[n] and p1.out[n] <= p2.out[n]):
                violations += 1
    return violations == 0, (f"units={len(units)} interprocedural_units={inter_units} "
                             f"statements={statements} violations={violations}")


def _leaves(g):
    parents = {e.src for e in g.edges if e.view == "AST"}
    return {n for n in g.nodes if n not in parents}


def check_ast_properties():
    rng = random.Random(7)
    methods = load_corpus()
    failures, repeated, strict = [], 0, 0
    for rec in methods:
        r = generate(rec["code"], ViewConfig(views=("ast",)))
        ast, table = r.views["ast"], r.table
        collapsed = collapse_ast(ast, table)
        counts: dict[int, int] = {}
        for node_id, node in ast.nodes.items():
            entry = table.bindings.get(node_id)
            if node.kind == "identifier" and entry is not None and table.entries[entry].kind in VARIABLE_KINDS:
                counts[entry] = counts.get(entry, 0) + 1
        has_repeat = any(c > 1 for c in counts.values())
        repeated += has_repeat
        if len(collapsed.nodes) > len(ast.nodes):
            failures.append((rec["origin"], "collapse grew"))
        if has_repeat:
            if len(collapsed.nodes) < len(ast.nodes):
                strict += 1
            else:
                failures.append((rec["origin"], "collapse did not shrink"))
        if minimize_ast(ast, set()) != ast:
            failures.append((rec["origin"], "empty blacklist changed graph"))
        leaves = _leaves(ast)
        leaf_kinds = {ast.nodes[n].kind for n in leaves}
        internal = sorted({ast.nodes[e.src].kind for e in ast.edges} - leaf_kinds - {"program"})
        if internal:
            blacklist = set(rng.sample(internal, min(3, len(internal))))
            if len(_leaves(minimize_ast(ast, blacklist))) != len(leaves):
                failures.append((rec["origin"], f"leaf count changed for {sorted(blacklist)}"))
    ok = not failures and len(methods) >= AST_METHODS
    return ok, (f"methods={len(methods)} with_repeated_variable={repeated} strictly_shrunk={strict} "
                f"violations={len(failures)}" + (f" first={failures[0]}" if failures else ""))


def check_corpus_robustness():
    rng = random.Random(11)
    snippets = [r["code"] for r in load_corpus()]
    # truncated copies exercise the failure path; they must fail cleanly or succeed
    broken = [s[: rng.randint(1, max(1, len(s) - 1))] for s in snippets[:300]]
    config = ViewConfig(views=("ast", "cfg", "dfg"))
    t0 = time.perf_counter()
    ok_count, syntax, crashes = 0, 0, []
    for src in snippets + broken:
        try:
            r = generate(src, config)
            to_json(r.graph), to_dot(r.graph)
            ok_count += 1
        except (SourceSyntaxError, EmptyInputError):
            syntax += 1
        except Exception as exc:  # any other exception is a crash
            crashes.append(f"{type(exc).__name__}: {exc}")
    elapsed = time.perf_counter() - t0
    ok = not crashes and len(snippets) >= ROBUST_SNIPPETS and elapsed < ROBUST_RUNTIME_S
    return ok, (f"snippets={len(snippets)} truncated={len(broken)} generated={ok_count} "
                f"syntax_errors={syntax} crashes={len(crashes)} runtime={elapsed:.1f}s (<{ROBUST_RUNTIME_S:.0f}s)"
                + (f" first={crashes[0]}" if crashes else ""))


def check_determinism():
    mismatched, compared = [], 0
    with tempfile.TemporaryDirectory() as tmp:
        for fmt in ("json", "dot"):
            runs = []
            for i in range(DETERMINISM_RUNS):
                out = Path(tmp) / f"{fmt}{i}"
                env = dict(os.environ, PYTHONHASHSEED=str(i + 1))
                proc = render_all(out, fmt, env)
                if proc.returncode != 0:
                    return False, f"batch run failed: {proc.stderr.strip()}"
                runs.append({p.name: p.read_bytes() for p in sorted(out.iterdir())})
            expected = {p.name: p.read_bytes() for p in sorted((GOLDEN / "expected").glob(f"*.{fmt}"))}
            for name, data in expected.items():
                compared += 1
                if any(run.get(name) != data for run in runs):
                    mismatched.append(name)
            if any(set(run) != set(expected) for run in runs):
                mismatched.append(f"file set differs ({fmt})")
    return not mismatched, (f"runs={DETERMINISM_RUNS} golden_outputs={compared} mismatches={len(mismatched)}"
                            + (f" {mismatched}" if mismatched else ""))


def check_combination_algebra():
    r = generate(TEN_STATEMENTS, ViewConfig(views=("ast", "cfg", "dfg")))
    views = r.views
    structural = ("method_entry", "method_exit", "constructor_entry", "type_declaration")
    statements = sum(1 for n in r.cfg.nodes.values() if n.kind not in structural)
    problems = []
    subsets = [s for k in (2, 3) for s in itertools.combinations(("ast", "cfg", "dfg"), k)]
    for subset in subsets:
        parts = [views[v] for v in subset]
        c = combine_views(parts)
        if set(c.nodes) != set().union(*(p.nodes for p in parts)):
            problems.append(f"{subset}: node set")
        if len(c.edges) != sum(len(p.edges) for p in parts):
            problems.append(f"{subset}: edge count")
        if combine_views([c, parts[-1]]) != c or combine_views([c, c]) != c:
            problems.append(f"{subset}: not idempotent")
        canon = to_json(c)
        if any(to_json(combine_views(list(p))) != canon for p in itertools.permutations(parts)):
            problems.append(f"{subset}: order dependent")
    return not problems and statements == 10, (f"subsets={len(subsets)} fixture_statements={statements} "
                                               f"problems={problems or 0}")


CRITERIA = [
    ("C1", "constructor call/return edges on the two-class program", check_fig2),
    ("C2", "reaching definitions match brute-force path oracle", check_rda_oracle),
    ("C3", "loop data flow fixture", check_loop_fixture),
    ("C4", "reference write-back and primitive twin", check_write_back),
    ("C5", "phase-2 facts are supersets of phase-1 facts", check_two_phase_monotone),
    ("C6", "AST collapse/minimize properties on corpus methods", check_ast_properties),
    ("C7", "corpus robustness, failures are structured syntax errors", check_corpus_robustness),
    ("C8", "byte-identical DOT and JSON across repeated runs", check_determinism),
    ("C9", "view combination algebra", check_combination_algebra),
]


def format_line(cid: str, title: str, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] {cid} {title}: {detail}"


@pytest.mark.acceptance
@pytest.mark.parametrize("cid, title, check", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(cid, title, check):
    ok, detail = check()
    RESULTS[cid] = (ok, format_line(cid, title, ok, detail))
    print(RESULTS[cid][1])
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for cid, title, check in CRITERIA:
        ok, detail = check()
        failed += not ok
        print(format_line(cid, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)

import pytest

from codeviews.ast_view import build_ast, collapse_ast, minimize_ast
from codeviews.errors import BlacklistCoversRootError

from helpers import table_for


def ast_for(src):
    cst, t = table_for(src)
    return cst, t, build_ast(cst)


def leaves(g):
    parents = {e.src for e in g.edges if e.view == "AST"}
    return {n for n in g.nodes if n not in parents}


def test_no_punctuation_nodes():
    cst, _, g = ast_for("class A { }")
    kinds = {n.kind for n in g.nodes.values()}
    assert not kinds & {"{", "}", ";"}
    assert kinds == {"program", "class_declaration", "identifier", "class_body"}
    assert len(g.nodes) <= sum(1 for _ in cst.walk())


def test_is_a_tree_rooted_at_program():
    _, _, g = ast_for("void f() { int a = 1; if (a > 0) a = 2; }")
    root = g.root()
    assert g.nodes[root].kind == "program"
    indeg = {}
    for e in g.edges:
        indeg[e.dst] = indeg.get(e.dst, 0) + 1
    assert set(indeg) == set(g.nodes) - {root}
    assert set(indeg.values()) == {1}


def test_keeps_invocation_and_field_access():
    _, _, g = ast_for("x = a.f(b);")
    kinds = [n.kind for n in g.nodes.values()]
    assert "method_invocation" in kinds
    assert kinds.count("identifier") == 4


def test_field_access_kept():
    _, _, g = ast_for("y = this.x;")
    assert "field_access" in {n.kind for n in g.nodes.values()}


def test_collapse_merges_occurrences():
    _, t, g = ast_for("int x; x = x + 1;")
    c = collapse_ast(g, t)
    xs = [n for n in c.nodes.values() if n.kind == "identifier" and n.label == "x"]
    assert len(xs) == 1
    incoming = [e for e in c.edges if e.dst == xs[0].id]
    assert len(incoming) == 3
    assert len(c.nodes) == len(g.nodes) - 2


def test_collapse_distinct_variables_is_identity():
    _, t, g = ast_for("int a = 1; int b = 2; int c = 3;")
    assert collapse_ast(g, t) == g


def test_collapse_respects_scopes():
    src = "class A { void f() { int x = 1; } void g() { int x = 2; } }"
    _, t, g = ast_for(src)
    c = collapse_ast(g, t)
    xs = [n for n in c.nodes.values() if n.label == "x"]
    assert len(xs) == 2


def test_minimize_empty_blacklist_is_identity():
    _, _, g = ast_for("x = (a + b);")
    assert minimize_ast(g, set()) == g


def test_minimize_reparents_in_order():
    _, _, g = ast_for("x = (a + b);")
    m = minimize_ast(g, {"parenthesized_expression"})
    assign = next(n.id for n in m.nodes.values() if n.kind == "assignment_expression")
    binop = next(n.id for n in m.nodes.values() if n.kind == "binary_expression")
    assert m.has_edge(assign, binop, "AST", "ast_child")
    kids = [e.dst for e in m.sorted_edges() if e.src == assign]
    assert [m.nodes[k].kind for k in kids] == ["identifier", "binary_expression"]
    assert leaves(m) == leaves(g)


def test_minimize_root_kind_rejected():
    _, _, g = ast_for("class A {}")
    with pytest.raises(BlacklistCoversRootError):
        minimize_ast(g, {"program"})


def test_minimize_keeps_leaf_count_for_internal_kinds():
    src = "class A { int f(int a) { if (a > 0) { return (a + 1); } return a * 2; } }"
    _, _, g = ast_for(src)
    internal = {g.nodes[e.src].kind for e in g.edges} - {"program"}
    for kind in sorted(internal):
        if any(g.nodes[n].kind == kind for n in leaves(g)):
            continue
        assert len(leaves(minimize_ast(g, {kind}))) == len(leaves(g)), kind


def test_comments_dropped():
    _, _, g = ast_for("int x = 1; // note\n/* block */ x = 2;")
    assert not {"line_comment", "block_comment"} & {n.kind for n in g.nodes.values()}

"""AST view: a filtered CST, plus the collapsed and minimized variants.

Dropped from the CST: every anonymous token (punctuation such as ``;``
``{`` ``}`` ``(`` ``)`` ``,`` ``.``, operators and keywords; their
information survives in the parent's label), comments, and the synthetic
wrapper used for bare method snippets.
"""

from __future__ import annotations

from collections import defaultdict

from .errors import BlacklistCoversRootError
from .graph import CodeViewGraph, GraphNode
from .labels import node_context, node_label
from .languages.java import COMMENT_KINDS
from .parsing import CstNode
from .symtab import VARIABLE_KINDS, SymbolTable


def _kept(node: CstNode, root: CstNode) -> bool:
    if node is root:
        return True
    return node.is_named and not node.synthetic and node.kind not in COMMENT_KINDS


def build_ast(cst: CstNode, meta: dict | None = None) -> CodeViewGraph:
    g = CodeViewGraph({"AST"}, meta)
    stack: list[tuple[CstNode, int | None]] = [(cst, None)]
    while stack:
        node, parent_id = stack.pop()
        here = parent_id
        if _kept(node, cst):
            g.add_node(GraphNode(node.index, node.kind, node_label(node), node.span, node_context(node)))
            if parent_id is not None:
                g.add_edge(parent_id, node.index, "AST", "ast_child")
            here = node.index
        for child in reversed(node.children):
            stack.append((child, here))
    return g


def _children(ast: CodeViewGraph) -> dict[int, list[int]]:
    kids: dict[int, list[int]] = defaultdict(list)
    for e in ast.edges:
        if e.view == "AST":
            kids[e.src].append(e.dst)
    return kids


def collapse_ast(ast: CodeViewGraph, table: SymbolTable) -> CodeViewGraph:
    """Merge every identifier leaf bound to the same variable into one node.

    The surviving node is the lowest-id occurrence (normally the
    declaration). Unbound identifiers, type names and method names are left
    alone, so the result is a DAG rather than a tree.
    """
    rep: dict[int, int] = {}
    groups: dict[int, list[int]] = defaultdict(list)
    for node_id, node in ast.nodes.items():
        if node.kind != "identifier":
            continue
        entry_id = table.bindings.get(node_id)
        if entry_id is None or table.entries[entry_id].kind not in VARIABLE_KINDS:
            continue
        groups[entry_id].append(node_id)
    for entry_id, ids in groups.items():
        keep = min(ids)
        for i in ids:
            rep[i] = keep

    out = CodeViewGraph(ast.views, ast.meta)
    for node_id in sorted(ast.nodes):
        if rep.get(node_id, node_id) != node_id:
            continue
        node = ast.nodes[node_id]
        if node_id in rep:
            entry = table.entries[table.bindings[node_id]]
            node = GraphNode(node.id, node.kind, entry.name, node.span, node.context)
        out.add_node(node)
    for e in ast.edges:
        out.add_edge(rep.get(e.src, e.src), rep.get(e.dst, e.dst), e.view, e.kind, e.low_confidence)
    return out


def minimize_ast(ast: CodeViewGraph, blacklist) -> CodeViewGraph:
    """Drop blacklisted node kinds, re-parenting their children in order."""
    blacklist = set(blacklist or ())
    root = ast.root()
    if root is None:
        return ast.copy()
    if ast.nodes[root].kind in blacklist:
        raise BlacklistCoversRootError(f"root kind {ast.nodes[root].kind!r} is blacklisted")
    if not blacklist:
        return ast.copy()
    kids = _children(ast)

    def surviving(node_id: int) -> list[int]:
        out, stack = [], [node_id]
        while stack:
            n = stack.pop()
            if ast.nodes[n].kind in blacklist:
                stack.extend(reversed(kids.get(n, [])))
            else:
                out.append(n)
        return out

    out = CodeViewGraph(ast.views, ast.meta)
    for node_id in sorted(ast.nodes):
        if ast.nodes[node_id].kind not in blacklist:
            out.add_node(ast.nodes[node_id])
    for node_id in sorted(out.nodes):
        for child in kids.get(node_id, []):
            for s in surviving(child):
                out.add_edge(node_id, s, "AST", "ast_child")
    # other views' edges (when minimizing a combined graph) are kept if both ends survive
    for e in ast.edges:
        if e.view != "AST" and e.src in out.nodes and e.dst in out.nodes:
            out.add_edge(e.src, e.dst, e.view, e.kind, e.low_confidence)
    return out

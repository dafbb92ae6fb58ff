"""Node labels and context, shared by the AST and statement views.

A node gets the same label in every view so combined graphs never see
conflicting labels for one id. Compound constructs are labelled with their
header only (``if (x > 0)``, ``void f(int a)``), everything else with its
whitespace-normalised source text.
"""

from __future__ import annotations

import re

from .languages.java import CALLABLES, TYPE_DECLARATIONS
from .parsing import CstNode

_WS = re.compile(r"\s+")

_HEADER_UNTIL = {
    "if_statement": "consequence",
    "while_statement": "body",
    "for_statement": "body",
    "enhanced_for_statement": "body",
    "switch_expression": "body",
    "synchronized_statement": "body",
    "catch_clause": "body",
    "try_statement": "body",
    "try_with_resources_statement": "body",
    "method_declaration": "body",
    "constructor_declaration": "body",
    "compact_constructor_declaration": "body",
    "lambda_expression": "body",
    "class_declaration": "body",
    "interface_declaration": "body",
    "enum_declaration": "body",
    "record_declaration": "body",
    "annotation_type_declaration": "body",
}


def squash(text: str) -> str:
    return _WS.sub(" ", text).strip()


def node_label(node: CstNode) -> str:
    if node.synthetic:
        return node.kind
    kind = node.kind
    if kind == "do_statement":
        cond = node.child_by_field("condition")
        return "do ... while " + squash(cond.text) if cond is not None else "do ... while"
    if kind == "finally_clause":
        return "finally"
    if kind == "switch_block_statement_group":
        labels = [c.text for c in node.children if c.kind == "switch_label"]
        return squash(" ".join(f"{label}:" for label in labels))
    if kind == "switch_rule":
        labels = [c.text for c in node.children if c.kind == "switch_label"]
        return squash(" ".join(labels)) + " ->"
    until = _HEADER_UNTIL.get(kind)
    if until is not None:
        body = node.child_by_field(until)
        if body is None and kind == "finally_clause":
            body = next((c for c in node.children if c.kind == "block"), None)
        if body is not None and body.start > node.start:
            head = node._source[node.start : body.start].decode("utf-8", errors="replace")
            return squash(head)
    return squash(node.text)


def node_context(node: CstNode) -> tuple[str | None, str | None] | None:
    """(enclosing type name, enclosing callable name); None when neither exists."""
    type_name = method_name = None
    for anc in node.ancestors():
        if method_name is None and anc.kind in CALLABLES:
            name = anc.child_by_field("name")
            method_name = name.text if name is not None else None
        if anc.kind in TYPE_DECLARATIONS and not anc.synthetic:
            name = anc.child_by_field("name")
            type_name = name.text if name is not None else None
            break
    if type_name is None and method_name is None:
        return None
    return (type_name, method_name)

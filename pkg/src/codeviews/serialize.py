"""Canonical JSON and DOT writers.

Both formats emit nodes sorted by id and edges sorted by
(src, dst, view, kind), so identical graphs always produce identical bytes.
"""

from __future__ import annotations

import json

from .graph import CodeViewGraph, GraphNode

VIEW_COLORS = {"AST": "gray", "CFG": "red", "DFG": "blue"}


def _node_dict(n: GraphNode) -> dict:
    return {
        "id": n.id,
        "kind": n.kind,
        "label": n.label,
        "span": [n.span[0], n.span[1]],
        "context": list(n.context) if n.context is not None else None,
    }


def to_dict(g: CodeViewGraph) -> dict:
    edges = []
    for e in g.sorted_edges():
        d = {"src": e.src, "dst": e.dst, "view": e.view, "kind": e.kind}
        if e.low_confidence:
            d["low_confidence"] = True
        edges.append(d)
    meta = dict(g.meta)
    meta["views"] = sorted(g.views)
    return {
        "meta": meta,
        "nodes": [_node_dict(g.nodes[i]) for i in sorted(g.nodes)],
        "edges": edges,
    }


def to_json(g: CodeViewGraph) -> bytes:
    text = json.dumps(to_dict(g), sort_keys=True, ensure_ascii=False, indent=1)
    return (text + "\n").encode("utf-8")


def from_json(data: bytes | str) -> CodeViewGraph:
    obj = json.loads(data)
    meta = obj["meta"]
    g = CodeViewGraph(meta.get("views", ()), meta)
    for n in obj["nodes"]:
        ctx = tuple(n["context"]) if n.get("context") is not None else None
        g.add_node(GraphNode(n["id"], n["kind"], n["label"], tuple(n["span"]), ctx))
    for e in obj["edges"]:
        g.add_edge(e["src"], e["dst"], e["view"], e["kind"], e.get("low_confidence", False))
    return g


def _quote(text: str) -> str:
    out = text.replace("\\", "\\\\").replace('"', '\\"')
    out = out.replace("\r\n", "\\n").replace("\n", "\\n").replace("\r", "\\n")
    return f'"{out}"'


def to_dot(g: CodeViewGraph, color: bool = True, name: str = "codeview") -> bytes:
    lines = [f"digraph {name} {{", "  node [shape=box, fontname=\"monospace\"];"]
    for i in sorted(g.nodes):
        n = g.nodes[i]
        lines.append(f"  {n.id} [label={_quote(f'{n.id}: {n.label}')}, kind={_quote(n.kind)}];")
    for e in g.sorted_edges():
        attrs = [f"label={_quote(e.kind)}", f"view={_quote(e.view)}"]
        if color:
            attrs.append(f"color={VIEW_COLORS[e.view]}")
            attrs.append(f"fontcolor={VIEW_COLORS[e.view]}")
        if e.low_confidence:
            attrs.append("style=dashed")
        lines.append(f"  {e.src} -> {e.dst} [{', '.join(attrs)}];")
    lines.append("}")
    return ("\n".join(lines) + "\n").encode("utf-8")

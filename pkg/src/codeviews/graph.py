"""Unified graph model shared by every view, plus the view combinator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import MixedUnitError

VIEWS = ("AST", "CFG", "DFG")

EDGE_KINDS = {
    "AST": frozenset({"ast_child"}),
    "CFG": frozenset(
        {
            "next",
            "true",
            "false",
            "loop_back",
            "switch_case",
            "constructor_call",
            "class_return",
            "method_call",
            "method_return",
        }
    ),
    "DFG": frozenset({"data_flow", "last_def", "last_use", "alias"}),
}

INTERPROCEDURAL_KINDS = frozenset({"constructor_call", "class_return", "method_call", "method_return"})
CALL_KINDS = frozenset({"constructor_call", "method_call"})
RETURN_KINDS = frozenset({"class_return", "method_return"})


@dataclass(frozen=True)
class GraphNode:
    id: int
    kind: str
    label: str
    span: tuple[int, int]
    context: tuple[str | None, str | None] | None = None


@dataclass(frozen=True)
class GraphEdge:
    src: int
    dst: int
    view: str
    kind: str
    low_confidence: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.view not in EDGE_KINDS:
            raise ValueError(f"unknown view {self.view!r}")
        if self.kind not in EDGE_KINDS[self.view]:
            raise ValueError(f"edge kind {self.kind!r} not allowed in {self.view}")

    @property
    def key(self) -> tuple[int, int, str, str]:
        return (self.src, self.dst, self.view, self.kind)


class CodeViewGraph:
    """Nodes keyed by id, an ordered edge list, the included views and metadata."""

    def __init__(self, views: Iterable[str] = (), meta: dict | None = None):
        self.nodes: dict[int, GraphNode] = {}
        self.edges: list[GraphEdge] = []
        self.views: frozenset[str] = frozenset(views)
        self.meta: dict = dict(meta or {})
        self._edge_keys: set[tuple] = set()

    def __repr__(self):
        return f"<CodeViewGraph views={sorted(self.views)} nodes={len(self.nodes)} edges={len(self.edges)}>"

    def add_node(self, node: GraphNode) -> GraphNode:
        return self.nodes.setdefault(node.id, node)

    def add_edge(self, src: int, dst: int, view: str, kind: str, low_confidence: bool = False) -> GraphEdge | None:
        edge = GraphEdge(src, dst, view, kind, low_confidence)
        if edge.key in self._edge_keys:
            if low_confidence:
                return None
            # a confident duplicate upgrades a low-confidence one
            for i, e in enumerate(self.edges):
                if e.key == edge.key and e.low_confidence:
                    self.edges[i] = edge
            return None
        self._edge_keys.add(edge.key)
        self.edges.append(edge)
        return edge

    def has_edge(self, src: int, dst: int, view: str | None = None, kind: str | None = None) -> bool:
        return any(
            e.src == src and e.dst == dst and (view is None or e.view == view) and (kind is None or e.kind == kind)
            for e in self.edges
        )

    def edges_of(self, view: str | None = None, kinds: Iterable[str] | None = None) -> list[GraphEdge]:
        kinds = set(kinds) if kinds is not None else None
        return [e for e in self.edges if (view is None or e.view == view) and (kinds is None or e.kind in kinds)]

    def successors(self, node_id: int, view: str | None = None) -> list[int]:
        return [e.dst for e in self.edges if e.src == node_id and (view is None or e.view == view)]

    def predecessors(self, node_id: int, view: str | None = None) -> list[int]:
        return [e.src for e in self.edges if e.dst == node_id and (view is None or e.view == view)]

    def root(self) -> int | None:
        """The unique node without an incoming AST edge (AST graphs only)."""
        targets = {e.dst for e in self.edges if e.view == "AST"}
        roots = [n for n in sorted(self.nodes) if n not in targets]
        return roots[0] if roots else None

    def sorted_edges(self) -> list[GraphEdge]:
        return sorted(self.edges, key=lambda e: e.key)

    def copy(self, views: Iterable[str] | None = None) -> CodeViewGraph:
        g = CodeViewGraph(self.views if views is None else views, self.meta)
        g.nodes = dict(self.nodes)
        for e in self.edges:
            g.add_edge(e.src, e.dst, e.view, e.kind, e.low_confidence)
        return g

    def validate(self) -> None:
        if not self.views or not self.views <= set(VIEWS):
            raise ValueError(f"bad view set {sorted(self.views)}")
        for e in self.edges:
            if e.src not in self.nodes or e.dst not in self.nodes:
                raise ValueError(f"dangling edge {e.key}")

    def __eq__(self, other):
        if not isinstance(other, CodeViewGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.sorted_edges() == other.sorted_edges()
            and [e.low_confidence for e in self.sorted_edges()] == [e.low_confidence for e in other.sorted_edges()]
            and self.views == other.views
        )


_VIEW_RANK = {"CFG": 0, "DFG": 1, "AST": 2}


def _rank(g: CodeViewGraph) -> int:
    return min((_VIEW_RANK[v] for v in g.views), default=3)


def combine_views(views: list[CodeViewGraph]) -> CodeViewGraph:
    """Merge graphs of one source unit on shared node ids.

    When two views carry the same node id, the statement-level node (CFG,
    then DFG) is kept, so the result does not depend on argument order.
    """
    if not views:
        raise ValueError("nothing to combine")
    digests = {g.meta.get("source_sha256") for g in views} - {None}
    if len(digests) > 1:
        raise MixedUnitError("views come from different source units")
    ordered = sorted(views, key=_rank)
    meta = {}
    for g in reversed(ordered):
        meta.update(g.meta)
    out = CodeViewGraph(frozenset().union(*(g.views for g in views)), meta)
    out.meta["views"] = sorted(out.views)
    for g in ordered:
        for node_id, node in g.nodes.items():
            out.add_node(node)
    for g in views:
        for e in g.edges:
            out.add_edge(e.src, e.dst, e.view, e.kind, e.low_confidence)
    return out

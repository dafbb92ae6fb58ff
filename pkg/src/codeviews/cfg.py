"""Statement-level control-flow graph.

One node per statement, a header node per control construct, and a
synthetic entry/exit pair per callable. Inter-procedural call and return
edges are added in a second step from static signature matching.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .graph import CodeViewGraph, GraphNode
from .labels import node_context, node_label
from .languages.java import CALLABLES, COMMENT_KINDS, DEFERRED_BODIES, LOOPS, TYPE_DECLARATIONS
from .parsing import CstNode
from .symtab import SymbolTable, resolve_call

Pending = list[tuple[int, str]]

_TOP_LEVEL_NON_STATEMENTS = TYPE_DECLARATIONS | CALLABLES | {
    "import_declaration",
    "package_declaration",
    "module_declaration",
}

_SIMPLE_KINDS = {
    "local_variable_declaration": "declaration",
    "expression_statement": "expression_statement",
    "explicit_constructor_invocation": "expression_statement",
    "assert_statement": "assert",
    "throw_statement": "throw",
    "return_statement": "return",
    "break_statement": "break",
    "continue_statement": "continue",
    "yield_statement": "yield",
    "local_class_declaration": "type_declaration",
}


@dataclass
class Callable:
    """A method, constructor or top-level statement run, with its entry/exit ids."""

    entry: int
    exit: int | None
    kind: str  # method | constructor | script
    decl: CstNode | None
    symbol: int | None
    name: str
    nodes: list[int] = field(default_factory=list)


@dataclass
class _Frame:
    kind: str  # loop | switch | block
    header: int | None
    label: str | None
    breaks: Pending = field(default_factory=list)


class ControlFlowGraph(CodeViewGraph):
    """A CFG plus the bookkeeping later passes need (not serialized)."""

    def __init__(self, meta=None):
        super().__init__({"CFG"}, meta)
        self.callables: list[Callable] = []
        self.statements: dict[int, CstNode] = {}
        self.regions: dict[int, list[CstNode]] = {}
        self.callable_of: dict[int, int] = {}  # node id -> index into callables
        self.type_nodes: dict[int, int] = {}  # type entry id -> node id
        self.callable_by_symbol: dict[int, int] = {}

    def copy(self, views=None):
        g = super().copy(views)
        out = ControlFlowGraph(g.meta)
        out.nodes, out.edges, out._edge_keys, out.views = g.nodes, g.edges, g._edge_keys, g.views
        out.callables, out.statements, out.regions = self.callables, self.statements, self.regions
        out.callable_of, out.type_nodes = self.callable_of, self.type_nodes
        out.callable_by_symbol = self.callable_by_symbol
        return out

    def intraprocedural_edges(self):
        from .graph import INTERPROCEDURAL_KINDS

        return [e for e in self.edges if e.view == "CFG" and e.kind not in INTERPROCEDURAL_KINDS]


def _statement_children(node: CstNode) -> list[CstNode]:
    return [c for c in node.named_children if c.kind not in COMMENT_KINDS]


class _Builder:
    def __init__(self, cst: CstNode, table: SymbolTable, meta):
        self.cst = cst
        self.table = table
        self.g = ControlFlowGraph(meta)
        self.next_id = 1 + max(n.index for n in cst.walk() if n.index is not None)
        self.current: int | None = None  # index of callable being built

    # nodes and edges
    def add(self, node: CstNode, kind: str, regions: list[CstNode] | None = None, label=None) -> int:
        nid = node.index
        self.g.add_node(GraphNode(nid, kind, label or node_label(node), node.span, node_context(node)))
        self.g.statements[nid] = node
        self.g.regions[nid] = [r for r in (regions if regions is not None else [node]) if r is not None]
        if self.current is not None and nid not in self.g.callable_of:
            self.g.callable_of[nid] = self.current
            self.g.callables[self.current].nodes.append(nid)
        return nid

    def synthetic(self, kind: str, label: str, span, context) -> int:
        nid = self.next_id
        self.next_id += 1
        self.g.add_node(GraphNode(nid, kind, label, span, context))
        self.g.regions[nid] = []
        if self.current is not None:
            self.g.callable_of[nid] = self.current
            self.g.callables[self.current].nodes.append(nid)
        return nid

    def connect(self, pending: Pending, dst: int):
        for src, kind in pending:
            self.g.add_edge(src, dst, "CFG", kind)

    # drivers
    def build(self) -> ControlFlowGraph:
        script = [c for c in _statement_children(self.cst)
                  if c.kind not in _TOP_LEVEL_NON_STATEMENTS and not c.synthetic]
        if script:
            self._script(script)
        for node in self.cst.walk():
            if node.synthetic:
                continue
            if node.kind in TYPE_DECLARATIONS:
                nid = node.index
                if nid not in self.g.nodes:
                    saved, self.current = self.current, None
                    self.add(node, "type_declaration", regions=[])
                    self.current = saved
                entry = self.table.entry_by_node.get(node.index)
                if entry is not None:
                    self.g.type_nodes[entry] = nid
            elif node.kind in CALLABLES:
                self._callable(node)
        return self.g

    def _script(self, statements: list[CstNode]):
        span = (statements[0].start, statements[-1].end)
        self.current = len(self.g.callables)
        self.g.callables.append(Callable(-1, None, "script", None, None, "<snippet>"))
        entry = self.synthetic("method_entry", "<snippet entry>", span, None)
        exit_ = self.synthetic("method_exit", "<snippet exit>", span, None)
        c = self.g.callables[self.current]
        c.entry, c.exit = entry, exit_
        ctx = _Ctx(exit_)
        out = self.seq(statements, [(entry, "next")], ctx)
        self.connect(out, exit_)
        self.current = None

    def _callable(self, decl: CstNode):
        name_node = decl.child_by_field("name")
        name = name_node.text if name_node is not None else "<anonymous>"
        kind = "method" if decl.kind == "method_declaration" else "constructor"
        symbol = self.table.entry_by_node.get(decl.index)
        body = decl.child_by_field("body")
        saved = self.current
        self.current = len(self.g.callables)
        callable_ = Callable(decl.index, None, kind, decl, symbol, name)
        self.g.callables.append(callable_)
        if symbol is not None:
            self.g.callable_by_symbol[symbol] = self.current
        entry_kind = "method_entry" if kind == "method" else "constructor_entry"
        params = decl.child_by_field("parameters")
        self.add(decl, entry_kind, regions=[params] if params is not None else [])
        if body is not None:
            exit_ = self.synthetic("method_exit", f"exit {name}", (decl.end, decl.end), node_context(body))
            callable_.exit = exit_
            out = self.seq(_statement_children(body), [(decl.index, "next")], _Ctx(exit_))
            self.connect(out, exit_)
        self.current = saved

    # statements
    def seq(self, statements: list[CstNode], pending: Pending, ctx: _Ctx) -> Pending:
        for s in statements:
            pending = self.stmt(s, pending, ctx)
        return pending

    def stmt(self, node: CstNode, pending: Pending, ctx: _Ctx, label: str | None = None) -> Pending:
        k = node.kind
        if k in COMMENT_KINDS:
            return pending
        if k in ("block", "constructor_body"):
            return self.seq(_statement_children(node), pending, ctx)
        if k == "expression_statement":
            inner = _statement_children(node)
            if len(inner) == 1 and inner[0].kind == "switch_expression":
                return self.switch(inner[0], pending, ctx, label)
        if k == "switch_expression":
            return self.switch(node, pending, ctx, label)
        if k == "if_statement":
            return self.if_(node, pending, ctx)
        if k in LOOPS:
            return self.loop(node, pending, ctx, label)
        if k == "labeled_statement":
            name = next((c.text for c in node.named_children if c.kind == "identifier"), None)
            inner = [c for c in _statement_children(node) if c.kind != "identifier"]
            if not inner:
                return pending
            target = inner[0]
            if target.kind in LOOPS or target.kind == "switch_expression" or (
                    target.kind == "expression_statement" and _statement_children(target)
                    and _statement_children(target)[0].kind == "switch_expression"):
                return self.stmt(target, pending, ctx, label=name)
            frame = _Frame("block", None, name)
            ctx.frames.append(frame)
            out = self.stmt(target, pending, ctx)
            ctx.frames.pop()
            return out + frame.breaks
        if k in ("try_statement", "try_with_resources_statement"):
            return self.try_(node, pending, ctx)
        if k == "synchronized_statement":
            lock = next((c for c in node.named_children if c.kind == "parenthesized_expression"), None)
            h = self.add(node, "synchronized_header", regions=[lock])
            self.connect(pending, h)
            body = node.child_by_field("body")
            return self.stmt(body, [(h, "next")], ctx) if body is not None else [(h, "next")]
        return self.simple(node, pending, ctx)

    def simple(self, node: CstNode, pending: Pending, ctx: _Ctx) -> Pending:
        kind = _SIMPLE_KINDS.get(node.kind)
        if kind is None:
            kind = "type_declaration" if node.kind in TYPE_DECLARATIONS else "statement"
        regions = [] if kind == "type_declaration" else [node]
        n = self.add(node, kind, regions=regions)
        self.connect(pending, n)
        if kind == "return" or kind == "throw":
            self.g.add_edge(n, ctx.exit, "CFG", "next")
            return []
        if kind == "break" or kind == "yield":
            label = _jump_label(node)
            frame = ctx.find(label, ("loop", "switch", "block") if kind == "break" else ("switch",))
            if frame is None:
                return [(n, "next")]
            frame.breaks.append((n, "next"))
            return []
        if kind == "continue":
            frame = ctx.find(_jump_label(node), ("loop",))
            if frame is None:
                return [(n, "next")]
            self.g.add_edge(n, frame.header, "CFG", "loop_back")
            return []
        return [(n, "next")]

    def if_(self, node: CstNode, pending: Pending, ctx: _Ctx) -> Pending:
        h = self.add(node, "if_header", regions=[node.child_by_field("condition")])
        self.connect(pending, h)
        then = node.child_by_field("consequence")
        out = self.stmt(then, [(h, "true")], ctx) if then is not None else [(h, "true")]
        alt = node.child_by_field("alternative")
        if alt is not None:
            out = out + self.stmt(alt, [(h, "false")], ctx)
        else:
            out = out + [(h, "false")]
        return out

    def loop(self, node: CstNode, pending: Pending, ctx: _Ctx, label: str | None) -> Pending:
        k = node.kind
        if k == "while_statement" or k == "do_statement":
            regions = [node.child_by_field("condition")]
        elif k == "for_statement":
            regions = (node.children_by_field("init") + node.children_by_field("condition")
                       + node.children_by_field("update"))
        else:
            regions = [node.child_by_field("value")]
        h = self.add(node, "loop_header", regions=regions)
        frame = _Frame("loop", h, label)
        ctx.frames.append(frame)
        body = node.child_by_field("body")
        if k == "do_statement":
            out = self.stmt(body, pending + [(h, "true")], ctx) if body is not None else pending + [(h, "true")]
            self.connect(out, h)
        else:
            self.connect(pending, h)
            out = self.stmt(body, [(h, "true")], ctx) if body is not None else [(h, "true")]
            self.connect([(s, "loop_back" if kind == "next" else kind) for s, kind in out], h)
        ctx.frames.pop()
        return [(h, "false")] + frame.breaks

    def switch(self, node: CstNode, pending: Pending, ctx: _Ctx, label: str | None) -> Pending:
        h = self.add(node, "switch_header", regions=[node.child_by_field("condition")])
        self.connect(pending, h)
        frame = _Frame("switch", h, label)
        ctx.frames.append(frame)
        body = node.child_by_field("body")
        groups = [c for c in _statement_children(body)
                  if c.kind in ("switch_block_statement_group", "switch_rule")] if body is not None else []
        fall: Pending = []
        exits: Pending = []
        has_default = False
        for grp in groups:
            labels = [c for c in grp.children if c.kind == "switch_label"]
            if any(lab.text.strip().startswith("default") for lab in labels):
                has_default = True
            c = self.add(grp, "case_label", regions=labels)
            self.g.add_edge(h, c, "CFG", "switch_case")
            self.connect(fall, c)
            stmts = [s for s in _statement_children(grp) if s.kind != "switch_label"]
            out = self.seq(stmts, [(c, "next")], ctx)
            if grp.kind == "switch_rule":
                exits += out
                fall = []
            else:
                fall = out
        ctx.frames.pop()
        exits = fall + exits + frame.breaks
        if not has_default:
            exits.append((h, "next"))
        return exits

    def try_(self, node: CstNode, pending: Pending, ctx: _Ctx) -> Pending:
        resources = node.child_by_field("resources")
        h = self.add(node, "try_header", regions=[resources] if resources is not None else [])
        self.connect(pending, h)
        body = node.child_by_field("body")
        out = self.stmt(body, [(h, "next")], ctx) if body is not None else [(h, "next")]
        for clause in node.named_children:
            if clause.kind == "catch_clause":
                param = next((c for c in clause.named_children if c.kind == "catch_formal_parameter"), None)
                ch = self.add(clause, "catch_header", regions=[param] if param is not None else [])
                self.connect(out, ch)
                cbody = clause.child_by_field("body")
                out = self.stmt(cbody, [(ch, "next")], ctx) if cbody is not None else [(ch, "next")]
            elif clause.kind == "finally_clause":
                fh = self.add(clause, "finally_header", regions=[])
                self.connect(out, fh)
                self.g.add_edge(h, fh, "CFG", "next")
                fbody = next((c for c in clause.named_children if c.kind == "block"), None)
                out = self.stmt(fbody, [(fh, "next")], ctx) if fbody is not None else [(fh, "next")]
        return out


@dataclass
class _Ctx:
    exit: int
    frames: list[_Frame] = field(default_factory=list)

    def find(self, label: str | None, kinds) -> _Frame | None:
        if label is not None:
            for f in reversed(self.frames):
                if f.label == label:
                    return f
        for f in reversed(self.frames):
            if f.kind in kinds and f.kind != "block":
                return f
        return None


def _jump_label(node: CstNode) -> str | None:
    ident = next((c for c in node.named_children if c.kind == "identifier"), None)
    return ident.text if ident is not None and node.kind != "yield_statement" else None


def build_intraprocedural_cfg(cst: CstNode, table: SymbolTable, meta: dict | None = None) -> ControlFlowGraph:
    return _Builder(cst, table, meta).build()


# Inter-procedural edges -----------------------------------------------------

_CALL_SITES = ("method_invocation", "object_creation_expression", "explicit_constructor_invocation")


def call_sites(region: CstNode) -> list[CstNode]:
    """Call expressions in evaluation order: receiver, then arguments, then the call."""
    out: list[CstNode] = []
    stack: list[tuple[CstNode, bool]] = [(region, False)]
    while stack:
        node, expanded = stack.pop()
        if expanded:
            out.append(node)
            continue
        if node.kind in DEFERRED_BODIES and node is not region:
            continue
        if node.kind in _CALL_SITES:
            stack.append((node, True))
        for child in reversed(node.children):
            if child.kind == "class_body":
                continue
            stack.append((child, False))
    return out


def resolved_calls(cfg: ControlFlowGraph, table: SymbolTable, node_id: int):
    """(call site, callee callable index or type node id, kind, confident) per call at a statement."""
    out = []
    for region in cfg.regions.get(node_id, []):
        for site in call_sites(region):
            res = resolve_call(site, table)
            entry = res.entry
            if entry is None:
                continue
            if entry.kind == "type":
                tnode = cfg.type_nodes.get(entry.id)
                if tnode is not None:
                    out.append((site, None, tnode, res.confident))
                continue
            idx = cfg.callable_by_symbol.get(entry.id)
            if idx is not None:
                out.append((site, idx, None, res.confident))
    return out


def add_interprocedural_edges(cfg: ControlFlowGraph, table: SymbolTable) -> ControlFlowGraph:
    """Link call statements to callee entries and callee exits back to callers."""
    for callable_ in cfg.callables:
        for node_id in list(callable_.nodes):
            for site, idx, type_node, confident in resolved_calls(cfg, table, node_id):
                if type_node is not None:
                    cfg.add_edge(node_id, type_node, "CFG", "constructor_call", not confident)
                    continue
                callee = cfg.callables[idx]
                is_ctor = callee.kind == "constructor"
                call_kind, ret_kind = ("constructor_call", "class_return") if is_ctor else ("method_call", "method_return")
                cfg.add_edge(node_id, callee.entry, "CFG", call_kind, not confident)
                if callee.exit is not None:
                    cfg.add_edge(callee.exit, node_id, "CFG", ret_kind, not confident)
    return cfg

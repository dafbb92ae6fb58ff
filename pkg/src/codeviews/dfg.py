"""Reaching-definitions data flow over the statement-level CFG.

Symbols are keyed by symbol-table entry id when the variable resolves, and
by raw name otherwise, so free variables of incomplete snippets still take
part. A definition is strong (kills earlier definitions of the symbol),
weak (element, field or receiver writes: gen without kill) or
declaration-only (``int x;``: kills, but never a source of data_flow).
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Callable as Fn
from typing import Iterable, NamedTuple, Union

from .cfg import ControlFlowGraph, resolved_calls
from .graph import CALL_KINDS, INTERPROCEDURAL_KINDS, RETURN_KINDS, CodeViewGraph, GraphEdge
from .languages.java import DEFERRED_BODIES
from .parsing import CstNode
from .symtab import SymbolTable, occurrence_role

Key = Union[int, str]


class Definition(NamedTuple):
    symbol: Key
    site: int


def _sort_key(d: Definition):
    return (d.site, isinstance(d.symbol, str), d.symbol)


def return_key(callee_entry: int) -> str:
    return f"<return@{callee_entry}>"


def is_return_key(key: Key) -> bool:
    return isinstance(key, str) and key.startswith("<return@")


@dataclass
class StatementFacts:
    defs: set = field(default_factory=set)  # strong
    weak_defs: set = field(default_factory=set)
    decl_only: set = field(default_factory=set)
    uses: set = field(default_factory=set)
    copies: list = field(default_factory=list)  # (dst key, src key) reference copies

    @property
    def all_defs(self) -> set:
        return self.defs | self.weak_defs | self.decl_only


# Def/use extraction ---------------------------------------------------------

class _Extractor:
    def __init__(self, table: SymbolTable, facts: StatementFacts):
        self.table = table
        self.f = facts

    def key(self, ident: CstNode) -> Key | None:
        if ident.index is None or ident.index not in self.table.occurrences:
            return None
        bound = self.table.bindings.get(ident.index)
        return bound if bound is not None else ident.text

    def base_key(self, expr: CstNode) -> Key | None:
        """The variable whose object an access path like ``a.b[i].c`` writes into."""
        node = expr
        while True:
            if node.kind == "identifier":
                return self.key(node)
            if node.kind == "parenthesized_expression" and node.named_children:
                node = node.named_children[0]
            elif node.kind == "field_access":
                obj = node.child_by_field("object")
                if obj is not None and obj.kind == "this":
                    fld = node.child_by_field("field")
                    return self.key(fld) if fld is not None else None
                node = obj
            elif node.kind == "array_access":
                node = node.child_by_field("array")
            else:
                return None
            if node is None:
                return None

    def target(self, lhs: CstNode, compound: bool):
        while lhs.kind == "parenthesized_expression" and lhs.named_children:
            lhs = lhs.named_children[0]
        if lhs.kind == "identifier" or (lhs.kind == "field_access"
                                        and getattr(lhs.child_by_field("object"), "kind", None) == "this"):
            k = self.base_key(lhs)
            if k is not None:
                self.f.defs.add(k)
                if compound:
                    self.f.uses.add(k)
            return
        k = self.base_key(lhs)
        if k is not None:
            self.f.weak_defs.add(k)
            self.f.uses.add(k)
        # index expressions and any non-base parts are reads
        self.reads_except_base(lhs)

    def reads_except_base(self, lhs: CstNode):
        node = lhs
        while True:
            if node.kind == "field_access":
                obj = node.child_by_field("object")
                if obj is None or obj.kind == "this":
                    return
                node = obj
            elif node.kind == "array_access":
                idx = node.child_by_field("index")
                if idx is not None:
                    self.visit(idx)
                node = node.child_by_field("array")
            elif node.kind == "parenthesized_expression" and node.named_children:
                node = node.named_children[0]
            else:
                if node.kind not in ("identifier", "this"):
                    self.visit(node)
                return
            if node is None:
                return

    def visit(self, root: CstNode):
        stack = [root]
        while stack:
            node = stack.pop()
            k = node.kind
            if k in DEFERRED_BODIES and node is not root:
                continue
            if k == "identifier":
                key = self.key(node)
                # declaring occurrences are handled by their declarator
                if key is not None and occurrence_role(node) == "use":
                    self.f.uses.add(key)
                continue
            if k == "assignment_expression":
                op = next((c.kind for c in node.children if c.field == "operator"), "=")
                lhs, rhs = node.child_by_field("left"), node.child_by_field("right")
                if rhs is not None:
                    stack.append(rhs)
                if lhs is not None:
                    self.target(lhs, op != "=")
                    if op == "=" and rhs is not None:
                        self.copy(lhs, rhs)
                continue
            if k == "update_expression":
                operand = next((c for c in node.named_children), None)
                if operand is not None:
                    self.target(operand, True)
                continue
            if k == "variable_declarator":
                name, value = node.child_by_field("name"), node.child_by_field("value")
                key = self.key(name) if name is not None else None
                if key is not None:
                    (self.f.defs if value is not None else self.f.decl_only).add(key)
                if value is not None:
                    stack.append(value)
                    if name is not None:
                        self.copy(name, value)
                continue
            if k in ("formal_parameter", "spread_parameter", "catch_formal_parameter", "resource",
                     "enhanced_for_statement", "instanceof_expression"):
                name = node.child_by_field("name")
                if name is None and k == "spread_parameter":
                    decl = next((c for c in node.named_children if c.kind == "variable_declarator"), None)
                    name = decl.child_by_field("name") if decl is not None else None
                key = self.key(name) if name is not None else None
                if key is not None:
                    self.f.defs.add(key)
                for c in reversed(node.children):
                    if c is not name and c.field != "body":
                        stack.append(c)
                continue
            if k == "method_invocation":
                obj = node.child_by_field("object")
                if obj is not None and obj.kind in ("identifier", "field_access", "array_access"):
                    base = self.base_key(obj)
                    if base is not None:
                        self.f.weak_defs.add(base)
                        self.f.uses.add(base)
                        self.reads_except_base(obj)
                        obj = None
                for c in reversed(node.children):
                    if c.field == "object" and obj is None:
                        continue
                    if c.field != "name":
                        stack.append(c)
                continue
            stack.extend(reversed(node.children))

    def copy(self, lhs: CstNode, rhs: CstNode):
        while rhs.kind in ("parenthesized_expression", "cast_expression") and rhs.named_children:
            rhs = rhs.child_by_field("value") if rhs.kind == "cast_expression" else rhs.named_children[0]
            if rhs is None:
                return
        if rhs.kind != "identifier" or lhs.kind != "identifier":
            return
        a, b = self.key(lhs), self.key(rhs)
        if isinstance(a, int) and isinstance(b, int) and self._is_ref(a) and self._is_ref(b):
            self.f.copies.append((a, b))

    def _is_ref(self, key: int) -> bool:
        return self.table.is_reference_type(self.table.entries[key].declared_type)


def statement_facts(cfg: ControlFlowGraph, node_id: int, table: SymbolTable) -> StatementFacts:
    facts = StatementFacts()
    ex = _Extractor(table, facts)
    node = cfg.nodes[node_id]
    if node.kind in ("method_entry", "constructor_entry"):
        for region in cfg.regions.get(node_id, []):
            for p in region.named_children:
                ex.visit(p)
        return facts
    stmt = cfg.statements.get(node_id)
    for region in cfg.regions.get(node_id, []):
        ex.visit(region)
    if stmt is not None and stmt.kind == "enhanced_for_statement":
        name = stmt.child_by_field("name")
        key = ex.key(name) if name is not None else None
        if key is not None:
            facts.defs.add(key)
    if node.kind == "return" and stmt is not None and stmt.named_children:
        callable_ = cfg.callables[cfg.callable_of[node_id]] if node_id in cfg.callable_of else None
        if callable_ is not None and callable_.kind != "script":
            facts.defs.add(return_key(callable_.entry))
    return facts


def extract_defs_uses(stmt: int, table: SymbolTable, cfg: ControlFlowGraph) -> tuple[set, set]:
    """(defs, uses) of the CFG statement ``stmt``."""
    f = statement_facts(cfg, stmt, table)
    return f.all_defs, set(f.uses)


# Alias sets -----------------------------------------------------------------

class AliasSets:
    """Per-callable union-find over reference-typed symbols."""

    def __init__(self):
        self._parent: dict[tuple[int, Key], Key] = {}

    def _find(self, scope: int, k: Key) -> Key:
        path = []
        while self._parent.get((scope, k), k) != k:
            path.append(k)
            k = self._parent[(scope, k)]
        for p in path:
            self._parent[(scope, p)] = k
        return k

    def union(self, scope: int, a: Key, b: Key):
        ra, rb = self._find(scope, a), self._find(scope, b)
        if ra != rb:
            lo, hi = sorted((ra, rb), key=lambda x: (isinstance(x, str), x))
            self._parent[(scope, hi)] = lo
            self._parent.setdefault((scope, lo), lo)
        else:
            self._parent.setdefault((scope, a), ra)

    def members(self, scope: int, k: Key) -> set:
        root = self._find(scope, k)
        return {m for (s, m) in self._parent if s == scope and self._find(scope, m) == root} or {k}

    def partition(self, scope: int) -> list[frozenset]:
        groups = defaultdict(set)
        for (s, m) in list(self._parent):
            if s == scope:
                groups[self._find(scope, m)].add(m)
        return sorted((frozenset(g) for g in groups.values() if len(g) > 1),
                      key=lambda g: sorted(g, key=lambda x: (isinstance(x, str), x)))


def compute_alias_sets(cfg: ControlFlowGraph, table: SymbolTable,
                       facts: dict[int, StatementFacts] | None = None) -> AliasSets:
    aliases = AliasSets()
    for idx, callable_ in enumerate(cfg.callables):
        for node_id in callable_.nodes:
            f = facts[node_id] if facts is not None else statement_facts(cfg, node_id, table)
            for a, b in f.copies:
                aliases.union(idx, a, b)
    return aliases


# Generic worklist solver ----------------------------------------------------

@dataclass
class GenKill:
    gen: dict[int, frozenset]
    kill_keys: dict[int, frozenset]  # a fact (k, site) is killed at s when k is in kill_keys[s]


@dataclass
class RdaFacts:
    gen: dict[int, frozenset]
    kill: dict[int, frozenset]
    in_: dict[int, frozenset]
    out: dict[int, frozenset]
    pre_call_in: dict[int, frozenset]
    iterations: int = 0

    def reaching(self, node_id: int, symbol: Key) -> set[Definition]:
        return {d for d in self.in_.get(node_id, ()) if d.symbol == symbol}


EdgeTransfer = Fn[[GraphEdge, frozenset, dict[int, frozenset]], frozenset]


def solve_rda(cfg: CodeViewGraph, genkill: GenKill, edges: Iterable[GraphEdge] | None = None,
              transfer: EdgeTransfer | None = None) -> RdaFacts:
    """Least fixed point of IN[s] = U OUT[p], OUT[s] = GEN[s] | (IN[s] - KILL[s])."""
    nodes = sorted(cfg.nodes)
    edges = list(cfg.edges_of("CFG") if edges is None else edges)
    preds: dict[int, list[GraphEdge]] = defaultdict(list)
    succs: dict[int, list[int]] = defaultdict(list)
    for e in edges:
        preds[e.dst].append(e)
        succs[e.src].append(e.dst)
    gen, kill_keys = genkill.gen, genkill.kill_keys
    in_: dict[int, frozenset] = {n: frozenset() for n in nodes}
    pre: dict[int, frozenset] = {n: frozenset() for n in nodes}
    out: dict[int, frozenset] = {n: gen.get(n, frozenset()) for n in nodes}
    work = deque(nodes)
    queued = set(nodes)
    iterations = 0
    while work:
        n = work.popleft()
        queued.discard(n)
        iterations += 1
        acc, acc_pre = set(), set()
        for e in preds[n]:
            facts = out[e.src] if transfer is None else transfer(e, out[e.src], pre)
            acc |= facts
            if e.kind not in RETURN_KINDS:
                acc_pre |= facts
        new_in, new_pre = frozenset(acc), frozenset(acc_pre)
        ks = kill_keys.get(n, frozenset())
        new_out = gen.get(n, frozenset()) | frozenset(d for d in new_in if d[0] not in ks)
        changed = new_out != out[n] or new_pre != pre[n]
        in_[n], pre[n], out[n] = new_in, new_pre, new_out
        if changed:
            for s in succs[n]:
                if s not in queued:
                    queued.add(s)
                    work.append(s)
    universe: dict[Key, set] = defaultdict(set)
    for facts in list(out.values()) + list(in_.values()):
        for d in facts:
            universe[d[0]].add(d)
    # OUT and the pre-call IN only grow, and each growth re-queues every
    # successor at most once
    n_defs = sum(len(v) for v in universe.values())
    if iterations > len(nodes) + 2 * n_defs * len(edges):
        raise RuntimeError(f"worklist did not converge within its bound ({iterations} iterations)")
    kill = {n: frozenset(d for k in kill_keys.get(n, ()) for d in universe.get(k, ()) if d[1] != n) for n in nodes}
    return RdaFacts(dict(gen), kill, in_, out, pre, iterations)


# Reaching definitions -------------------------------------------------------

class DataFlowAnalysis:
    """Holds per-statement facts, alias sets and both RDA phases for one unit."""

    def __init__(self, cfg: ControlFlowGraph, table: SymbolTable):
        self.cfg = cfg
        self.table = table
        self.facts = {n: statement_facts(cfg, n, table) for n in sorted(cfg.nodes)}
        self.aliases = compute_alias_sets(cfg, table, self.facts)
        self.mutations: set[Definition] = set()
        self._calls_cache: dict[int, list] = {}
        self.genkill = self._genkill()

    def _genkill(self) -> GenKill:
        gen, kill = {}, {}
        for n, f in self.facts.items():
            idx = self.cfg.callable_of.get(n)
            g = {Definition(k, n) for k in f.defs | f.decl_only}
            for k in f.weak_defs:
                members = self.aliases.members(idx, k) if idx is not None and isinstance(k, int) else {k}
                for m in members | {k}:
                    d = Definition(m, n)
                    g.add(d)
                    self.mutations.add(d)
            ks = set(f.defs | f.decl_only)
            for _site, callee_idx, _t, _c in self._calls(n):
                if callee_idx is not None:
                    ks.add(return_key(self.cfg.callables[callee_idx].entry))
            if self.cfg.nodes[n].kind in ("method_entry", "constructor_entry"):
                ks = set()  # arguments bound at call edges pass through the entry
            gen[n] = frozenset(g)
            kill[n] = frozenset(ks)
        return GenKill(gen, kill)

    def _calls(self, n: int):
        if n not in self._calls_cache:
            entry = self.cfg.nodes[n].kind in ("method_entry", "constructor_entry")
            self._calls_cache[n] = [] if entry else resolved_calls(self.cfg, self.table, n)
        return self._calls_cache[n]

    def phase1(self) -> RdaFacts:
        return solve_rda(self.cfg, self.genkill, edges=self.cfg.intraprocedural_edges())

    def phase2(self) -> RdaFacts:
        bindings = self._bindings()
        reach = self._callee_regions()
        entry_of = {c.entry: i for i, c in enumerate(self.cfg.callables)}
        exit_of = {c.exit: i for i, c in enumerate(self.cfg.callables) if c.exit is not None}

        def transfer(edge: GraphEdge, out_src: frozenset, pre_in: dict[int, frozenset]) -> frozenset:
            if edge.kind not in INTERPROCEDURAL_KINDS:
                return out_src
            if edge.kind in CALL_KINDS:
                callee = entry_of.get(edge.dst)
                pairs = bindings.get((edge.src, callee), ())
                if not pairs:
                    return frozenset()
                before = pre_in.get(edge.src, frozenset())
                res = set()
                for param, arg in pairs:
                    for d in before:
                        if d.symbol == arg:
                            res.add(Definition(param, d.site))
                return frozenset(res)
            callee = exit_of.get(edge.src)
            if callee is None:
                return frozenset()
            region = reach[callee]
            ret = return_key(self.cfg.callables[callee].entry)
            res = {d for d in out_src if d.symbol == ret}
            for param, arg in bindings.get((edge.dst, callee), ()):
                for d in out_src:
                    if d.symbol == param and d.site in region and d in self.mutations:
                        wb = Definition(arg, d.site)
                        self.mutations.add(wb)
                        res.add(wb)
            return frozenset(res)

        return solve_rda(self.cfg, self.genkill, edges=self.cfg.edges_of("CFG"), transfer=transfer)

    def _bindings(self) -> dict[tuple[int, int], list[tuple[Key, Key]]]:
        """(call statement, callee index) -> [(parameter key, argument key)] for reference parameters."""
        out: dict[tuple[int, int], list] = defaultdict(list)
        ex = _Extractor(self.table, StatementFacts())
        for n in sorted(self.cfg.nodes):
            for site, callee_idx, _t, _c in self._calls(n):
                if callee_idx is None:
                    continue
                callee = self.cfg.callables[callee_idx]
                params = self._param_entries(callee)
                args_node = site.child_by_field("arguments")
                args = [a for a in args_node.named_children
                        if a.kind not in self.table.language.comment_kinds] if args_node else []
                for param, arg in zip(params, args):
                    if param is None or not self.table.is_reference_type(self.table.entries[param].declared_type):
                        continue
                    if self.table.entries[param].declared_type.endswith("..."):
                        continue
                    while arg.kind == "parenthesized_expression" and arg.named_children:
                        arg = arg.named_children[0]
                    if arg.kind not in ("identifier", "field_access"):
                        continue
                    key = ex.base_key(arg) if arg.kind == "identifier" or \
                        getattr(arg.child_by_field("object"), "kind", None) == "this" else None
                    if key is not None and (param, key) not in out[(n, callee_idx)]:
                        out[(n, callee_idx)].append((param, key))
        return out

    def _param_entries(self, callee) -> list[int | None]:
        if callee.decl is None:
            return []
        params = callee.decl.child_by_field("parameters")
        out = []
        for p in params.named_children if params is not None else []:
            if p.kind == "formal_parameter":
                name = p.child_by_field("name")
            elif p.kind == "spread_parameter":
                decl = next((c for c in p.named_children if c.kind == "variable_declarator"), None)
                name = decl.child_by_field("name") if decl is not None else None
            else:
                continue
            out.append(self.table.bindings.get(name.index) if name is not None else None)
        return out

    def _callee_regions(self) -> dict[int, set[int]]:
        """Nodes of each callable and of everything it can (transitively) call, minus its entry."""
        calls: dict[int, set[int]] = defaultdict(set)
        for e in self.cfg.edges_of("CFG", CALL_KINDS):
            src = self.cfg.callable_of.get(e.src)
            dst = self.cfg.callable_of.get(e.dst)
            if src is not None and dst is not None:
                calls[src].add(dst)
        out = {}
        for i, c in enumerate(self.cfg.callables):
            seen, stack = {i}, [i]
            while stack:
                for j in calls[stack.pop()]:
                    if j not in seen:
                        seen.add(j)
                        stack.append(j)
            nodes = set()
            for j in seen:
                nodes.update(self.cfg.callables[j].nodes)
            nodes.discard(c.entry)
            out[i] = nodes
        return out

    def uses(self, interprocedural: bool) -> dict[int, set]:
        out = {}
        for n, f in self.facts.items():
            u = set(f.uses)
            if interprocedural:
                for site, callee_idx, _t, _c in self._calls(n):
                    if callee_idx is not None and _value_used(site):
                        u.add(return_key(self.cfg.callables[callee_idx].entry))
            out[n] = u
        return out


def _value_used(site: CstNode) -> bool:
    parent = site.parent
    return parent is not None and parent.kind not in ("expression_statement",) and site.kind != "explicit_constructor_invocation"


def run_two_phase_rda(cfg: ControlFlowGraph, table: SymbolTable) -> tuple[RdaFacts, RdaFacts]:
    """Phase 1 per method (intra-procedural edges), then phase 2 over call/return edges."""
    analysis = DataFlowAnalysis(cfg, table)
    return analysis.phase1(), analysis.phase2()


def build_dfg_edges(facts: RdaFacts, uses: dict[int, set], decl_only: set[Definition] = frozenset()) -> list[GraphEdge]:
    """One data_flow edge per (reaching definition, use) pair."""
    edges = set()
    for s in sorted(uses):
        for v in uses[s]:
            pool = facts.in_[s] if is_return_key(v) else facts.pre_call_in.get(s, facts.in_[s])
            for d in pool:
                if d.symbol == v and d not in decl_only:
                    edges.add(GraphEdge(d.site, s, "DFG", "data_flow"))
    return sorted(edges, key=lambda e: e.key)


def add_lastdef_lastuse(cfg: ControlFlowGraph, facts: RdaFacts, analysis: DataFlowAnalysis,
                        last_def: bool = True, last_use: bool = True) -> list[GraphEdge]:
    edges = set()
    if last_def:
        for s, f in analysis.facts.items():
            for k in f.all_defs:
                if is_return_key(k):
                    continue
                for d in facts.in_[s]:
                    if d.symbol == k:
                        edges.add(GraphEdge(d.site, s, "DFG", "last_def"))
    if last_use:
        gen, kill = {}, {}
        for s, f in analysis.facts.items():
            reads = {k for k in f.uses if not is_return_key(k)}
            gen[s] = frozenset(Definition(k, s) for k in reads - f.defs - f.decl_only)
            kill[s] = frozenset(reads | f.defs | f.decl_only)
        ru = solve_rda(cfg, GenKill(gen, kill), edges=cfg.intraprocedural_edges())
        for s, f in analysis.facts.items():
            for k in f.uses:
                for u in ru.in_[s]:
                    if u.symbol == k:
                        edges.add(GraphEdge(u.site, s, "DFG", "last_use"))
    return sorted(edges, key=lambda e: e.key)


@dataclass
class DfgResult:
    graph: CodeViewGraph
    phase1: RdaFacts
    phase2: RdaFacts | None
    analysis: DataFlowAnalysis

    @property
    def facts(self) -> RdaFacts:
        return self.phase2 if self.phase2 is not None else self.phase1


def build_dfg(cfg: ControlFlowGraph, table: SymbolTable, interprocedural: bool = True,
              last_def: bool = False, last_use: bool = False, meta: dict | None = None) -> DfgResult:
    analysis = DataFlowAnalysis(cfg, table)
    p1 = analysis.phase1()
    inter = interprocedural and any(e.kind in INTERPROCEDURAL_KINDS for e in cfg.edges)
    p2 = analysis.phase2() if inter else None
    facts = p2 if p2 is not None else p1
    decl_only = {Definition(k, n) for n, f in analysis.facts.items() for k in f.decl_only}
    g = CodeViewGraph({"DFG"}, meta if meta is not None else cfg.meta)
    g.nodes = dict(cfg.nodes)
    for e in build_dfg_edges(facts, analysis.uses(inter), decl_only):
        g.add_edge(e.src, e.dst, e.view, e.kind)
    if last_def or last_use:
        for e in add_lastdef_lastuse(cfg, facts, analysis, last_def, last_use):
            g.add_edge(e.src, e.dst, e.view, e.kind)
    return DfgResult(g, p1, p2, analysis)

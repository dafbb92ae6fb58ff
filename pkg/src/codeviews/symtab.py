"""Scopes, declarations, class hierarchy and callable signatures.

Built in two passes over the CST: the first records every scope and
declaration, the second binds each variable occurrence to its declaration
(or leaves it unbound when the snippet never declares it).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

from .languages import JAVA, LanguageSpec
from .languages.java import CALLABLES, LITERAL_TYPES, TYPE_BODIES, TYPE_DECLARATIONS
from .parsing import CstNode

VARIABLE_KINDS = frozenset({"variable", "field", "parameter"})


class Signature(NamedTuple):
    name: str
    arity: int
    param_types: tuple[str, ...]
    varargs: bool = False


@dataclass
class Scope:
    id: int
    parent: int | None
    kind: str  # global | type | method | block
    span: tuple[int, int]
    node_index: int | None = None
    type_name: str | None = None


@dataclass
class SymbolEntry:
    id: int
    name: str
    kind: str  # variable | field | parameter | method | constructor | type
    declared_type: str | None
    scope: int
    decl_span: tuple[int, int]
    signature: Signature | None = None
    node_index: int | None = None
    synthetic: bool = False

    @property
    def is_callable(self) -> bool:
        return self.kind in ("method", "constructor")


@dataclass
class TypeInfo:
    name: str
    supertypes: list[str] = field(default_factory=list)
    members: list[int] = field(default_factory=list)
    is_primitive: bool = False
    entry: int | None = None
    scope: int | None = None


def base_type_name(type_text: str | None) -> str | None:
    """``java.util.List<Foo>[]`` -> ``List``."""
    if not type_text:
        return None
    text = type_text.split("<", 1)[0].strip()
    text = text.replace("[]", "").replace("...", "").strip()
    return text.rsplit(".", 1)[-1] or None


class SymbolTable:
    def __init__(self, language: LanguageSpec = JAVA):
        self.language = language
        self.scopes: list[Scope] = []
        self.entries: list[SymbolEntry] = []
        self.types: dict[str, list[TypeInfo]] = {}
        self.bindings: dict[int, int] = {}  # identifier cst index -> entry id
        self.occurrences: dict[int, tuple[str, int]] = {}  # identifier cst index -> (name, scope)
        self._scope_by_obj: dict[int, int] = {}  # id(scope-introducing CstNode) -> scope id
        self._type_by_scope: dict[int, TypeInfo] = {}
        self._type_by_decl: dict[int, TypeInfo] = {}
        self.entry_by_node: dict[int, int] = {}  # declaring cst node index -> entry id
        self._by_scope: dict[int, list[int]] = {}

    # construction helpers
    def _new_scope(self, parent, kind, node: CstNode | None, type_name=None) -> Scope:
        span = node.span if node is not None else (0, 0)
        scope = Scope(len(self.scopes), parent, kind, span,
                      node.index if node is not None else None, type_name)
        self.scopes.append(scope)
        if node is not None:
            self._scope_by_obj.setdefault(id(node), scope.id)
        return scope

    def _add(self, name, kind, declared_type, scope, node: CstNode, signature=None, synthetic=False):
        entry = SymbolEntry(len(self.entries), name, kind, declared_type, scope, node.span,
                            signature, node.index, synthetic)
        self.entries.append(entry)
        self._by_scope.setdefault(scope, []).append(entry.id)
        if node.index is not None:
            self.entry_by_node[node.index] = entry.id
        return entry

    # queries
    def entries_in(self, scope_id: int) -> list[SymbolEntry]:
        return [self.entries[i] for i in self._by_scope.get(scope_id, ())]

    def scope_of(self, node: CstNode) -> int:
        """Innermost scope strictly enclosing ``node``."""
        for n in node.ancestors():
            sid = self._scope_by_obj.get(id(n))
            if sid is not None:
                return sid
        return 0

    def scope_introduced_by(self, node: CstNode) -> int | None:
        return self._scope_by_obj.get(id(node))

    def type_info(self, name: str | None) -> TypeInfo | None:
        base = base_type_name(name)
        if base is None:
            return None
        if self.language.is_primitive(base) and name == base:
            return TypeInfo(base, is_primitive=True)
        found = self.types.get(base)
        return found[0] if found else None

    def enclosing_type(self, scope_id: int) -> TypeInfo | None:
        sid: int | None = scope_id
        while sid is not None:
            scope = self.scopes[sid]
            if scope.kind == "type":
                return self._type_for_scope(sid)
            sid = scope.parent
        return None

    def _type_for_scope(self, scope_id: int) -> TypeInfo | None:
        return self._type_by_scope.get(scope_id)

    def supertypes_of(self, info: TypeInfo) -> list[TypeInfo]:
        """Locally declared ancestors, nearest first, without cycles."""
        out, seen, queue = [], {info.name}, list(info.supertypes)
        while queue:
            sup = self.type_info(queue.pop(0))
            if sup is None or sup.name in seen or sup.is_primitive:
                continue
            seen.add(sup.name)
            out.append(sup)
            queue.extend(sup.supertypes)
        return out

    def callables(self) -> list[SymbolEntry]:
        return [e for e in self.entries if e.is_callable]

    def is_reference_type(self, type_text: str | None) -> bool:
        """True for any non-primitive type, including ones declared elsewhere."""
        if not type_text:
            return False
        return not self.language.is_primitive(type_text.strip())


def build_symbol_table(cst: CstNode, language: LanguageSpec = JAVA) -> SymbolTable:
    table = SymbolTable(language)
    global_scope = table._new_scope(None, "global", cst)
    _Collector(table).run(cst, global_scope.id)
    _bind_occurrences(table, cst)
    return table


class _Collector:
    def __init__(self, table: SymbolTable):
        self.t = table

    def run(self, root: CstNode, scope: int):
        stack: list[tuple[CstNode, int]] = [(root, scope)]
        while stack:
            node, scope = stack.pop()
            inner = self.visit(node, scope)
            for child in reversed(node.children):
                stack.append((child, inner))

    def visit(self, node: CstNode, scope: int) -> int:
        """Record declarations at ``node``; return the scope for its children."""
        t = self.t
        kind = node.kind
        if kind in TYPE_DECLARATIONS:
            self._declare_type(node, scope)
            return scope
        if kind in TYPE_BODIES and kind != "enum_body_declarations":
            owner = node.parent
            if owner is not None and owner.kind in TYPE_DECLARATIONS:
                name_node = owner.child_by_field("name")
                name = name_node.text if name_node is not None and not owner.synthetic else _synthetic_name(owner)
                sc = t._new_scope(scope, "type", node, name)
                info = t._type_by_decl.get(id(owner))
                if info is not None:
                    info.scope = sc.id
                    t._type_by_scope[sc.id] = info
                if owner.kind == "record_declaration":
                    params = owner.child_by_field("parameters")
                    for p in params.named_children if params is not None else []:
                        if p.kind == "formal_parameter":
                            self._declare_param(p, sc.id, kind="field")
                return sc.id
            if owner is not None and owner.kind == "object_creation_expression":
                created = owner.child_by_field("type")
                name = base_type_name(created.text) if created is not None else None
                sc = t._new_scope(scope, "type", node, name)
                return sc.id
            return scope
        if kind in CALLABLES:
            self._declare_callable(node, scope)
            sc = t._new_scope(scope, "method", node)
            params = node.child_by_field("parameters")
            if kind == "compact_constructor_declaration":
                params = None
            if params is not None:
                for p in params.named_children:
                    if p.kind in ("formal_parameter", "spread_parameter"):
                        self._declare_param(p, sc.id)
            return sc.id
        if kind in ("block", "constructor_body", "switch_block"):
            return t._new_scope(scope, "block", node).id
        if kind in ("for_statement", "enhanced_for_statement", "catch_clause",
                    "try_with_resources_statement", "lambda_expression"):
            sc = t._new_scope(scope, "block", node)
            if kind == "enhanced_for_statement":
                self._declare_named(node, node.child_by_field("type"), sc.id, "variable")
            elif kind == "catch_clause":
                param = next((c for c in node.named_children if c.kind == "catch_formal_parameter"), None)
                if param is not None:
                    ctype = next((c for c in param.named_children if c.kind == "catch_type"), None)
                    self._declare_named(param, ctype, sc.id, "variable")
            elif kind == "lambda_expression":
                self._declare_lambda_params(node, sc.id)
            return sc.id
        if kind == "resource":
            self._declare_named(node, node.child_by_field("type"), scope, "variable")
        elif kind in ("field_declaration", "constant_declaration"):
            self._declare_declarators(node, scope, "field")
        elif kind == "local_variable_declaration":
            scope_kind = t.scopes[scope].kind
            self._declare_declarators(node, scope, "field" if scope_kind == "type" else "variable")
        elif kind == "enum_constant":
            owner = _enclosing(node, TYPE_DECLARATIONS)
            owner_name = owner.child_by_field("name").text if owner is not None else None
            self._declare_named(node, None, scope, "field", declared_type=owner_name)
        elif kind == "instanceof_expression" and node.child_by_field("name") is not None:
            self._declare_named(node, node.child_by_field("right"), scope, "variable")
        return scope

    def _declare_type(self, node: CstNode, scope: int):
        name_node = node.child_by_field("name")
        if node.synthetic:
            name = _synthetic_name(node)
            entry = SymbolEntry(len(self.t.entries), name, "type", None, scope, (0, 0), synthetic=True)
            self.t.entries.append(entry)
            self.t._by_scope.setdefault(scope, []).append(entry.id)
            info = TypeInfo(name, entry=entry.id)
            self.t.types.setdefault(name, []).append(info)
            self.t._type_by_decl[id(node)] = info
            return
        if name_node is None:
            return
        entry = self.t._add(name_node.text, "type", None, scope, name_node)
        self.t.entry_by_node[node.index] = entry.id
        info = TypeInfo(name_node.text, entry=entry.id)
        for clause in ("superclass", "interfaces"):
            c = node.child_by_field(clause)
            if c is not None:
                info.supertypes.extend(_type_texts(c))
        for c in node.named_children:
            if c.kind == "extends_interfaces":
                info.supertypes.extend(_type_texts(c))
        self.t.types.setdefault(info.name, []).append(info)
        self.t._type_by_decl[id(node)] = info
        self._attach_member(scope, entry.id)

    def _attach_member(self, scope: int, entry_id: int):
        sc = self.t.scopes[scope]
        if sc.kind == "type":
            info = self.t._type_for_scope(scope)
            if info is not None:
                info.members.append(entry_id)

    def _declare_callable(self, node: CstNode, scope: int):
        name_node = node.child_by_field("name")
        if name_node is None:
            return
        params = node.child_by_field("parameters")
        ptypes, varargs = [], False
        if params is not None and node.kind != "compact_constructor_declaration":
            for p in params.named_children:
                if p.kind == "formal_parameter":
                    ptypes.append(_param_type(p))
                elif p.kind == "spread_parameter":
                    ptypes.append(_param_type(p) + "...")
                    varargs = True
        if node.kind == "method_declaration":
            kind = "method"
            rtype = node.child_by_field("type")
            declared = rtype.text if rtype is not None else None
        else:
            kind = "constructor"
            declared = name_node.text
        sig = Signature(name_node.text, len(ptypes), tuple(ptypes), varargs)
        entry = self.t._add(name_node.text, kind, declared, scope, name_node, sig)
        self.t.entry_by_node[node.index] = entry.id
        self._attach_member(scope, entry.id)

    def _declare_param(self, p: CstNode, scope: int, kind: str = "parameter"):
        if p.kind == "spread_parameter":
            decl = next((c for c in p.named_children if c.kind == "variable_declarator"), None)
            name_node = decl.child_by_field("name") if decl is not None else None
            declared = _param_type(p) + "..."
        else:
            name_node = p.child_by_field("name")
            declared = _param_type(p)
        if name_node is None:
            return
        entry = self.t._add(name_node.text, kind, declared, scope, name_node)
        if kind == "field":
            self._attach_member(scope, entry.id)

    def _declare_declarators(self, node: CstNode, scope: int, kind: str):
        type_node = node.child_by_field("type")
        base = type_node.text if type_node is not None else None
        for decl in node.children_by_field("declarator"):
            name_node = decl.child_by_field("name")
            if name_node is None:
                continue
            dims = decl.child_by_field("dimensions")
            declared = base + dims.text.replace(" ", "") if base and dims is not None else base
            entry = self.t._add(name_node.text, kind, declared, scope, name_node)
            if kind == "field":
                self._attach_member(scope, entry.id)

    def _declare_named(self, node: CstNode, type_node, scope, kind, declared_type=None):
        name_node = node.child_by_field("name")
        if name_node is None or name_node.kind != "identifier":
            return
        if declared_type is None and type_node is not None:
            declared_type = type_node.text
        entry = self.t._add(name_node.text, kind, declared_type, scope, name_node)
        if kind == "field":
            self._attach_member(scope, entry.id)

    def _declare_lambda_params(self, node: CstNode, scope: int):
        params = node.child_by_field("parameters")
        if params is None:
            return
        if params.kind == "identifier":
            self.t._add(params.text, "parameter", None, scope, params)
        elif params.kind == "inferred_parameters":
            for c in params.named_children:
                if c.kind == "identifier":
                    self.t._add(c.text, "parameter", None, scope, c)
        elif params.kind == "formal_parameters":
            for p in params.named_children:
                if p.kind in ("formal_parameter", "spread_parameter"):
                    self._declare_param(p, scope)


def _synthetic_name(node: CstNode) -> str:
    return "__CodeViewSnippet__"


def _enclosing(node: CstNode, kinds) -> CstNode | None:
    return next((a for a in node.ancestors() if a.kind in kinds), None)


def _param_type(p: CstNode) -> str:
    t = p.child_by_field("type")
    if t is None:
        t = next((c for c in p.named_children if c.kind not in ("modifiers", "variable_declarator", "identifier")), None)
    text = t.text if t is not None else "?"
    dims = p.child_by_field("dimensions")
    if dims is not None:
        text += dims.text.replace(" ", "")
    return text


def _type_texts(clause: CstNode) -> list[str]:
    out = []
    for c in clause.named_children:
        if c.kind == "type_list":
            out.extend(x.text for x in c.named_children)
        else:
            out.append(c.text)
    return out


# Occurrences ---------------------------------------------------------------

_NAME_OWNERS = TYPE_DECLARATIONS | CALLABLES | {"annotation_type_element_declaration"}
_EXCLUDED_PARENTS = frozenset(
    {
        "labeled_statement",
        "break_statement",
        "continue_statement",
        "scoped_identifier",
        "import_declaration",
        "package_declaration",
        "marker_annotation",
        "annotation",
        "element_value_pair",
        "switch_label",
        "module_declaration",
        "requires_module_directive",
    }
)


def occurrence_role(node: CstNode) -> str | None:
    """Classify an identifier as a variable 'decl', a variable 'use', or None.

    Receivers that look like type names are classified later, during
    binding, because that needs the table.
    """
    if node.kind != "identifier" or node.synthetic:
        return None
    parent = node.parent
    if parent is None:
        return None
    pk = parent.kind
    if pk in _EXCLUDED_PARENTS:
        return None
    if pk in _NAME_OWNERS and node.field == "name":
        return None
    if pk == "method_invocation" and node.field == "name":
        return None
    if pk == "field_access" and node.field == "field":
        obj = parent.child_by_field("object")
        return "use" if obj is not None and obj.kind == "this" else None
    if pk == "method_reference":
        return "use" if parent.named_children and parent.named_children[0] is node else None
    if pk in ("variable_declarator", "enum_constant", "formal_parameter", "catch_formal_parameter",
              "enhanced_for_statement", "resource", "instanceof_expression") and node.field == "name":
        return "decl"
    if pk == "lambda_expression" and node.field == "parameters":
        return "decl"
    if pk == "inferred_parameters":
        return "decl"
    if pk == "enhanced_for_statement" and node.field != "value":
        return None
    return "use"


def _bind_occurrences(table: SymbolTable, root: CstNode):
    stack: list[tuple[CstNode, int]] = [(root, 0)]
    while stack:
        node, scope = stack.pop()
        inner = table.scope_introduced_by(node)
        if inner is not None:
            scope = inner
        role = occurrence_role(node)
        if role == "decl":
            eid = table.entry_by_node.get(node.index)
            if eid is not None:
                table.bindings[node.index] = eid
                table.occurrences[node.index] = (node.text, table.entries[eid].scope)
        elif role == "use":
            if node.parent.kind == "field_access":
                info = table.enclosing_type(scope)
                entry = _lookup_field(table, info, node.text) if info is not None else None
                table.occurrences[node.index] = (node.text, scope)
                if entry is not None:
                    table.bindings[node.index] = entry.id
            else:
                entry = resolve_symbol(node.text, scope, table, position=node.start)
                if entry is None and _is_type_reference(node, table):
                    pass
                else:
                    table.occurrences[node.index] = (node.text, scope)
                    if entry is not None:
                        table.bindings[node.index] = entry.id
        for child in reversed(node.children):
            stack.append((child, scope))


def _is_type_reference(node: CstNode, table: SymbolTable) -> bool:
    """Unresolved receivers such as ``System`` or ``Math`` are type names."""
    parent = node.parent
    receiver = (parent.kind in ("method_invocation", "field_access", "method_reference")
                and node.field in ("object", None))
    if not receiver:
        return False
    return node.text[:1].isupper() or node.text in table.types


def _lookup_field(table: SymbolTable, info: TypeInfo, name: str) -> SymbolEntry | None:
    for t in [info, *table.supertypes_of(info)]:
        if t.scope is None:
            continue
        for e in table.entries_in(t.scope):
            if e.name == name and e.kind == "field":
                return e
    return None


def resolve_symbol(name: str, at: int, table: SymbolTable, position: int | None = None) -> SymbolEntry | None:
    """Nearest enclosing declaration of variable ``name`` visible from scope ``at``.

    Locals and parameters must be declared before ``position`` (when given);
    fields are visible throughout their type body and inherited from locally
    declared supertypes.
    """
    sid: int | None = at
    while sid is not None:
        scope = table.scopes[sid]
        cands = [e for e in table.entries_in(sid) if e.name == name and e.kind in VARIABLE_KINDS]
        if scope.kind in ("block", "method", "global"):
            ordered = [e for e in cands if position is None or e.decl_span[0] <= position]
            if ordered:
                return max(ordered, key=lambda e: e.decl_span[0])
        elif cands:
            return cands[0]
        if scope.kind == "type":
            info = table._type_for_scope(sid)
            if info is not None:
                for sup in table.supertypes_of(info):
                    if sup.scope is None:
                        continue
                    hit = [e for e in table.entries_in(sup.scope) if e.name == name and e.kind == "field"]
                    if hit:
                        return hit[0]
        sid = scope.parent
    return None


# Invocations ---------------------------------------------------------------

class CallResolution(NamedTuple):
    entry: SymbolEntry | None
    confident: bool


def resolve_invocation(call_site: CstNode, receiver_type: str | None = None,
                       table: SymbolTable | None = None) -> SymbolEntry | None:
    """Statically resolve a method invocation or object creation to its callee."""
    if table is None:
        raise TypeError("resolve_invocation needs a symbol table")
    return resolve_call(call_site, table, receiver_type).entry


def resolve_call(call_site: CstNode, table: SymbolTable, receiver_type: str | None = None,
                 _depth: int = 0) -> CallResolution:
    scope = table.scope_of(call_site)
    kind = call_site.kind
    args_node = call_site.child_by_field("arguments")
    args = [a for a in args_node.named_children if a.kind not in table.language.comment_kinds] if args_node else []

    if kind == "object_creation_expression":
        if call_site.child_by_field("object") is not None:
            return CallResolution(None, False)
        tnode = call_site.child_by_field("type")
        info = table.type_info(receiver_type or (tnode.text if tnode is not None else None))
        if info is None or info.is_primitive or info.scope is None:
            return CallResolution(None, False)
        ctors = [e for e in table.entries_in(info.scope) if e.kind == "constructor"]
        if not ctors:
            entry = table.entries[info.entry] if info.entry is not None else None
            return CallResolution(entry, entry is not None)
        return _pick(ctors, args, table, scope, _depth)

    if kind == "explicit_constructor_invocation":
        which = call_site.child_by_field("constructor")
        here = table.enclosing_type(scope)
        if here is None or which is None:
            return CallResolution(None, False)
        if which.kind == "super":
            sups = table.supertypes_of(here)
            if not sups:
                return CallResolution(None, False)
            here = sups[0]
        if here.scope is None:
            return CallResolution(None, False)
        ctors = [e for e in table.entries_in(here.scope) if e.kind == "constructor"]
        if not ctors:
            entry = table.entries[here.entry] if which.kind == "super" and here.entry is not None else None
            return CallResolution(entry, entry is not None)
        return _pick(ctors, args, table, scope, _depth)

    if kind != "method_invocation":
        return CallResolution(None, False)
    name_node = call_site.child_by_field("name")
    if name_node is None:
        return CallResolution(None, False)
    name = name_node.text
    obj = call_site.child_by_field("object")
    if receiver_type is not None:
        owners = _owner_chain(table, table.type_info(receiver_type))
    elif obj is None or obj.kind == "this":
        owners = _enclosing_chain(table, scope)
    elif obj.kind == "super":
        here = table.enclosing_type(scope)
        owners = table.supertypes_of(here) if here is not None else []
    else:
        rtype = _receiver_type(obj, table, scope, _depth)
        if rtype is None:
            return CallResolution(None, False)
        owners = _owner_chain(table, table.type_info(rtype))
    for owner in owners:
        sid = owner if isinstance(owner, int) else owner.scope
        if sid is None:
            continue
        cands = [e for e in table.entries_in(sid) if e.kind == "method" and e.name == name]
        if cands:
            return _pick(cands, args, table, scope, _depth)
    return CallResolution(None, False)


def _owner_chain(table: SymbolTable, info: TypeInfo | None) -> list:
    if info is None or info.is_primitive:
        return []
    return [info, *table.supertypes_of(info)]


def _enclosing_chain(table: SymbolTable, scope: int) -> list:
    """Enclosing types (innermost first, each followed by its supertypes), then global."""
    out: list = []
    sid: int | None = scope
    while sid is not None:
        sc = table.scopes[sid]
        if sc.kind == "type":
            info = table._type_for_scope(sid)
            if info is not None:
                out.extend(_owner_chain(table, info))
            else:
                out.append(sid)
        elif sc.kind == "global":
            out.append(sid)
        sid = sc.parent
    return out


def _receiver_type(obj: CstNode, table: SymbolTable, scope: int, depth: int) -> str | None:
    if obj.kind == "identifier":
        entry = resolve_symbol(obj.text, scope, table, position=obj.start)
        if entry is not None:
            return entry.declared_type
        if obj.text in table.types:
            return obj.text
        return None
    return static_type(obj, table, scope, depth)


def static_type(expr: CstNode, table: SymbolTable, scope: int | None = None, _depth: int = 0) -> str | None:
    """Best-effort static type text of an expression, or None."""
    if _depth > 8:
        return None
    if scope is None:
        scope = table.scope_of(expr)
    k = expr.kind
    if k in LITERAL_TYPES:
        return LITERAL_TYPES[k]
    if k in ("decimal_integer_literal", "hex_integer_literal") and expr.text[-1:] in "lL":
        return "long"
    if k == "decimal_floating_point_literal":
        return "float" if expr.text[-1:] in "fF" else "double"
    if k == "identifier":
        entry = resolve_symbol(expr.text, scope, table, position=expr.start)
        return entry.declared_type if entry is not None else None
    if k in ("object_creation_expression", "cast_expression", "array_creation_expression"):
        t = expr.child_by_field("type")
        if t is None:
            return None
        if k == "array_creation_expression":
            dims = sum(c.kind in ("dimensions_expr", "dimensions") for c in expr.named_children)
            return t.text + "[]" * max(dims, 1)
        return t.text
    if k == "parenthesized_expression" and expr.named_children:
        return static_type(expr.named_children[0], table, scope, _depth + 1)
    if k == "this":
        info = table.enclosing_type(scope)
        return info.name if info is not None else None
    if k == "field_access":
        obj, fld = expr.child_by_field("object"), expr.child_by_field("field")
        if obj is not None and obj.kind == "this" and fld is not None:
            info = table.enclosing_type(scope)
            entry = _lookup_field(table, info, fld.text) if info is not None else None
            return entry.declared_type if entry is not None else None
        return None
    if k == "method_invocation":
        res = resolve_call(expr, table, _depth=_depth + 1)
        return res.entry.declared_type if res.entry is not None and res.entry.kind == "method" else None
    return None


def _pick(cands: list[SymbolEntry], args: list[CstNode], table: SymbolTable, scope: int,
          depth: int) -> CallResolution:
    n = len(args)
    by_arity = [e for e in cands if e.signature.arity == n
                or (e.signature.varargs and n >= e.signature.arity - 1)]
    if not by_arity:
        return CallResolution(None, False)
    if len(by_arity) == 1:
        return CallResolution(by_arity[0], True)
    arg_types = [static_type(a, table, scope, depth + 1) for a in args]
    if all(t is None for t in arg_types):
        return CallResolution(by_arity[0], False)
    typed = [e for e in by_arity if _types_match(e.signature, arg_types)]
    if len(typed) == 1:
        return CallResolution(typed[0], True)
    return CallResolution((typed or by_arity)[0], False)


def _types_match(sig: Signature, arg_types: list[str | None]) -> bool:
    params = list(sig.param_types)
    for i, at in enumerate(arg_types):
        if at is None:
            continue
        if i < len(params):
            pt = params[i]
        elif sig.varargs:
            pt = params[-1]
        else:
            return False
        if sig.varargs and i >= len(params) - 1 and pt.endswith("..."):
            if at != pt[:-3] and at != pt[:-3] + "[]":
                return False
        elif at != pt:
            return False
    return True

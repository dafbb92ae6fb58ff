"""Source units and the concrete syntax tree.

The grammar backend is tree-sitter; its tree is copied into plain
:class:`CstNode` objects so the rest of the pipeline never touches the
binding and spans can be re-based when a snippet had to be wrapped.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, replace
from typing import Iterator

from tree_sitter import Parser

from .errors import EmptyInputError, SourceSyntaxError
from .languages import get_language, grammar_for


@dataclass(frozen=True)
class SourceUnit:
    text: bytes
    language: str = "java"
    origin: str | None = None
    synthetic_wrapper: bool = False

    def __post_init__(self):
        if isinstance(self.text, str):
            object.__setattr__(self, "text", self.text.encode("utf-8"))
        self.text.decode("utf-8")  # raises UnicodeDecodeError on bad input
        get_language(self.language)

    @property
    def wrapper_span(self) -> tuple[int, int] | None:
        """Byte range of the original text inside the wrapped buffer."""
        if not self.synthetic_wrapper:
            return None
        start = len(get_language(self.language).wrapper_prefix.encode())
        return start, start + len(self.text)

    def parse_buffer(self) -> bytes:
        if not self.synthetic_wrapper:
            return self.text
        lang = get_language(self.language)
        return lang.wrapper_prefix.encode() + self.text + lang.wrapper_suffix.encode()

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.text).hexdigest()


class CstNode:
    """One node of the concrete syntax tree.

    ``span`` is (byte_start, byte_end) in the caller's original text.
    ``index`` is the node's preorder number, which later becomes its graph
    node id; nodes belonging to a synthetic wrapper have ``index`` None.
    """

    __slots__ = (
        "kind",
        "span",
        "children",
        "is_named",
        "has_error",
        "field",
        "index",
        "synthetic",
        "parent",
        "_source",
    )

    def __init__(self, kind, span, is_named, has_error, field=None, synthetic=False, source=b""):
        self.kind: str = kind
        self.span: tuple[int, int] = span
        self.children: list[CstNode] = []
        self.is_named: bool = is_named
        self.has_error: bool = has_error
        self.field: str | None = field
        self.index: int | None = None
        self.synthetic: bool = synthetic
        self.parent: CstNode | None = None
        self._source: bytes = source

    def __repr__(self):
        return f"CstNode({self.kind!r}, span={self.span}, index={self.index})"

    @property
    def start(self) -> int:
        return self.span[0]

    @property
    def end(self) -> int:
        return self.span[1]

    @property
    def text(self) -> str:
        if self.synthetic:
            return ""
        return self._source[self.span[0] : self.span[1]].decode("utf-8", errors="replace")

    @property
    def named_children(self) -> list[CstNode]:
        return [c for c in self.children if c.is_named]

    def child_by_field(self, name: str) -> CstNode | None:
        for c in self.children:
            if c.field == name:
                return c
        return None

    def children_by_field(self, name: str) -> list[CstNode]:
        return [c for c in self.children if c.field == name]

    def walk(self) -> Iterator[CstNode]:
        """Preorder traversal (iterative; deep expression chains are common)."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> Iterator[CstNode]:
        return (n for n in self.walk() if not n.children)

    def ancestors(self) -> Iterator[CstNode]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def contains(self, other: CstNode) -> bool:
        return self.span[0] <= other.span[0] and other.span[1] <= self.span[1]


def _parser(language: str) -> Parser:
    return Parser(grammar_for(language))


def _first_error(root) -> tuple[str, tuple[int, int]] | None:
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_error or node.is_missing:
            kind = "MISSING " + node.type if node.is_missing else "ERROR"
            return kind, (node.start_byte, node.end_byte)
        if node.has_error:
            stack.extend(reversed(node.children))
    return None


def _raw_parse(unit: SourceUnit):
    buf = unit.parse_buffer()
    return buf, _parser(unit.language).parse(buf)


def _convert(tree, buf: bytes, unit: SourceUnit) -> CstNode:
    offset, limit = (0, len(buf)) if unit.wrapper_span is None else unit.wrapper_span
    text = unit.text
    size = len(text)

    def rebase(a: int, b: int) -> tuple[int, int]:
        a, b = a - offset, b - offset
        return max(0, min(a, size)), max(0, min(b, size))

    ts_root = tree.root_node
    root = CstNode(ts_root.type, (0, size), True, ts_root.has_error, source=text)
    stack = [(ts_root, root)]
    while stack:
        ts_node, node = stack.pop()
        cursor = ts_node.walk()
        pending = []
        if cursor.goto_first_child():
            while True:
                child = cursor.node
                synthetic = child.start_byte < offset or child.end_byte > limit
                c = CstNode(
                    child.type,
                    rebase(child.start_byte, child.end_byte),
                    child.is_named,
                    child.has_error,
                    field=cursor.field_name,
                    synthetic=synthetic,
                    source=text,
                )
                c.parent = node
                node.children.append(c)
                pending.append((child, c))
                if not cursor.goto_next_sibling():
                    break
        stack.extend(pending)
    counter = 0
    for n in root.walk():
        if n is root or not n.synthetic:
            n.index = counter
            counter += 1
        else:
            n.index = None
    return root


def parse_source(unit: SourceUnit) -> CstNode:
    """Parse ``unit`` into a CST, retrying with a wrapper shell on errors."""
    if not unit.text.strip():
        raise EmptyInputError("input is empty")
    buf, tree = _raw_parse(unit)
    err = _first_error(tree.root_node)
    if err is None:
        return _convert(tree, buf, unit)
    if not unit.synthetic_wrapper:
        wrapped = replace(unit, synthetic_wrapper=True)
        wbuf, wtree = _raw_parse(wrapped)
        if _first_error(wtree.root_node) is None:
            return _convert(wtree, wbuf, wrapped)
    kind, (a, b) = err
    if unit.synthetic_wrapper:
        off = unit.wrapper_span[0]
        a, b = max(0, a - off), max(0, b - off)
    raise SourceSyntaxError((a, b), unit.text, kind)


def normalize_snippet(unit: SourceUnit) -> SourceUnit:
    """Return ``unit`` unchanged if it parses cleanly, else a wrapped copy."""
    if not unit.text.strip():
        raise EmptyInputError("input is empty")
    if unit.synthetic_wrapper:
        parse_source(unit)
        return unit
    _, tree = _raw_parse(unit)
    err = _first_error(tree.root_node)
    if err is None:
        return unit
    wrapped = replace(unit, synthetic_wrapper=True)
    _, wtree = _raw_parse(wrapped)
    if _first_error(wtree.root_node) is None:
        return wrapped
    kind, span = err
    raise SourceSyntaxError(span, unit.text, kind)


def parse_snippet(text: str | bytes, language: str = "java", origin: str | None = None,
                  force_wrap: bool = False) -> tuple[SourceUnit, CstNode]:
    unit = SourceUnit(text, language=language, origin=origin, synthetic_wrapper=force_wrap)
    unit = normalize_snippet(unit)
    return unit, parse_source(unit)

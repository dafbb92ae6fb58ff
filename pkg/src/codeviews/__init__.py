"""Customizable AST, CFG and DFG code views for Java snippets."""

from .driver import AstOptions, DfgOptions, ViewConfig, generate
from .errors import (
    BlacklistCoversRootError,
    CodeViewError,
    EmptyInputError,
    MixedUnitError,
    SourceSyntaxError,
)
from .graph import CodeViewGraph, GraphEdge, GraphNode, combine_views
from .serialize import from_json, to_dot, to_json

__version__ = "0.1.0"

__all__ = [
    "AstOptions",
    "DfgOptions",
    "ViewConfig",
    "generate",
    "CodeViewGraph",
    "GraphEdge",
    "GraphNode",
    "combine_views",
    "to_json",
    "to_dot",
    "from_json",
    "CodeViewError",
    "SourceSyntaxError",
    "EmptyInputError",
    "MixedUnitError",
    "BlacklistCoversRootError",
]

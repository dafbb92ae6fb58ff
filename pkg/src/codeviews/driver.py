"""Runs the whole pipeline for one snippet and combines the requested views."""

from __future__ import annotations

import sys
from dataclasses import asdict, dataclass, field

from .ast_view import build_ast, collapse_ast, minimize_ast
from .cfg import add_interprocedural_edges, build_intraprocedural_cfg
from .dfg import build_dfg
from .graph import CodeViewGraph, combine_views
from .parsing import SourceUnit, normalize_snippet, parse_source
from .symtab import build_symbol_table

VIEW_NAMES = ("ast", "cfg", "dfg")

# Long operator chains in generated code nest deeply; the passes are mostly
# iterative but label/context helpers walk parent chains recursively.
if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)


@dataclass(frozen=True)
class AstOptions:
    collapsed: bool = False
    minimized: bool = False
    blacklist: tuple[str, ...] = ()


@dataclass(frozen=True)
class DfgOptions:
    last_def: bool = False
    last_use: bool = False


@dataclass(frozen=True)
class ViewConfig:
    views: tuple[str, ...] = ("cfg",)
    language: str = "java"
    ast_options: AstOptions = field(default_factory=AstOptions)
    dfg_options: DfgOptions = field(default_factory=DfgOptions)
    interprocedural: bool = True
    output: str = "json"
    out_path: str | None = None
    method_snippet: bool = False

    def __post_init__(self):
        views = tuple(v.lower() for v in self.views)
        if not views:
            raise ValueError("at least one view is required")
        bad = [v for v in views if v not in VIEW_NAMES]
        if bad:
            raise ValueError(f"unknown view(s): {', '.join(bad)}")
        object.__setattr__(self, "views", tuple(v for v in VIEW_NAMES if v in views))
        if self.output not in ("dot", "json"):
            raise ValueError(f"unknown output format {self.output!r}")

    def echo(self) -> dict:
        d = asdict(self)
        d.pop("out_path")
        d["views"] = list(self.views)
        d["ast_options"]["blacklist"] = sorted(self.ast_options.blacklist)
        return d


@dataclass
class PipelineResult:
    unit: SourceUnit
    graph: CodeViewGraph
    views: dict[str, CodeViewGraph]
    table: object = None
    cfg: object = None
    dfg: object = None


def generate(source, config: ViewConfig = ViewConfig(), origin: str | None = None) -> PipelineResult:
    """Parse ``source`` (text, bytes or a SourceUnit) and build the configured views."""
    if isinstance(source, SourceUnit):
        unit = source
    else:
        unit = SourceUnit(source, language=config.language, origin=origin,
                          synthetic_wrapper=config.method_snippet)
    unit = normalize_snippet(unit)
    cst = parse_source(unit)
    table = build_symbol_table(cst)
    meta = {
        "language": unit.language,
        "origin": unit.origin,
        "source_sha256": unit.digest,
        "synthetic_wrapper": unit.synthetic_wrapper,
        "config": config.echo(),
    }
    views: dict[str, CodeViewGraph] = {}
    result = PipelineResult(unit, None, views, table)
    if "ast" in config.views:
        ast = build_ast(cst, meta)
        opts = config.ast_options
        if opts.minimized or opts.blacklist:
            ast = minimize_ast(ast, opts.blacklist)
        if opts.collapsed:
            ast = collapse_ast(ast, table)
        views["ast"] = ast
    if "cfg" in config.views or "dfg" in config.views:
        cfg = build_intraprocedural_cfg(cst, table, meta)
        inter = config.interprocedural and len(cfg.callables) > 1
        if inter:
            add_interprocedural_edges(cfg, table)
        result.cfg = cfg
        if "cfg" in config.views:
            views["cfg"] = cfg
        if "dfg" in config.views:
            dfg = build_dfg(cfg, table, inter, config.dfg_options.last_def, config.dfg_options.last_use, meta)
            result.dfg = dfg
            views["dfg"] = dfg.graph
    result.graph = combine_views([views[v] for v in VIEW_NAMES if v in views])
    return result

"""Command-line entry point.

Exit codes: 0 success, 1 internal failure, 2 bad flags, 3 syntax error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .driver import AstOptions, DfgOptions, ViewConfig, generate
from .errors import EmptyInputError, SourceSyntaxError
from .languages import supported_languages
from .serialize import to_dot, to_json

log = logging.getLogger("codeviews")

EXIT_OK, EXIT_FAILURE, EXIT_USAGE, EXIT_SYNTAX = 0, 1, 2, 3
SOURCE_SUFFIXES = {"java": (".java",)}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _csv(value: str) -> list[str]:
    return [v.strip() for v in value.split(",") if v.strip()]


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="codeviews", description="Generate AST/CFG/DFG code views for source snippets.")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--file", help="source file (default: read standard input)")
    src.add_argument("--batch", metavar="DIR", help="process every source file under DIR")
    p.add_argument("--lang", default="java", choices=supported_languages())
    p.add_argument("--views", type=_csv, default=["cfg"], help="comma-separated subset of ast,cfg,dfg")
    p.add_argument("--collapsed", action="store_true", help="collapse variable occurrences in the AST")
    p.add_argument("--minimized", action="store_true", help="minimize the AST with --blacklist")
    p.add_argument("--blacklist", type=_csv, default=[], help="comma-separated AST node kinds to drop")
    p.add_argument("--last-def", action="store_true", help="add LastDef edges to the DFG")
    p.add_argument("--last-use", action="store_true", help="add LastUse edges to the DFG")
    p.add_argument("--no-interprocedural", action="store_true")
    p.add_argument("--method-snippet", action="store_true", help="always wrap input as a method-level snippet")
    p.add_argument("--format", default="json", choices=("dot", "json"))
    p.add_argument("--out", help="output file (single input) or directory (--batch)")
    p.add_argument("--jobs", type=int, default=1, help="parallel workers in batch mode")
    return p


def config_from_args(args) -> ViewConfig:
    return ViewConfig(
        views=tuple(args.views),
        language=args.lang,
        ast_options=AstOptions(args.collapsed, args.minimized or bool(args.blacklist), tuple(args.blacklist)),
        dfg_options=DfgOptions(args.last_def, args.last_use),
        interprocedural=not args.no_interprocedural,
        output=args.format,
        out_path=args.out,
        method_snippet=args.method_snippet,
    )


def render(source, config: ViewConfig, origin: str | None = None) -> bytes:
    graph = generate(source, config, origin=origin).graph
    if config.output == "dot":
        return to_dot(graph, color=not os.environ.get("CODEVIEW_NO_COLOR"))
    return to_json(graph)


def write_atomic(path: Path, data: bytes):
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _process_one(job):
    path, out_path, config = job
    try:
        data = render(Path(path).read_bytes(), config, origin=str(path))
        write_atomic(Path(out_path), data)
    except (SourceSyntaxError, EmptyInputError, UnicodeDecodeError) as exc:
        return path, "syntax", str(exc)
    except Exception as exc:  # batch mode must survive any single file
        return path, "failed", f"{type(exc).__name__}: {exc}"
    return path, "ok", None


def run_batch(root: Path, out_dir: Path, config: ViewConfig, jobs: int = 1) -> int:
    suffixes = SOURCE_SUFFIXES[config.language]
    files = sorted(p for p in root.rglob("*") if p.is_file() and p.suffix in suffixes)
    work = [(str(f), str(out_dir / f.relative_to(root)) + f".{config.output}", config) for f in files]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_process_one, work))
    else:
        results = [_process_one(w) for w in work]
    counts = {"ok": 0, "syntax": 0, "failed": 0}
    for path, status, msg in results:
        counts[status] += 1
        if msg:
            print(f"{path}: {msg}", file=sys.stderr)
    print(f"processed={len(results)} succeeded={counts['ok']} "
          f"syntax_errors={counts['syntax']} failed={counts['failed']}")
    return EXIT_FAILURE if counts["failed"] else EXIT_OK


def run_cli(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except ValueError as exc:
        parser.print_usage(sys.stderr)
        print(f"codeviews: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.batch:
        if not args.out:
            print("codeviews: error: --batch requires --out DIR", file=sys.stderr)
            return EXIT_USAGE
        root = Path(args.batch)
        if not root.is_dir():
            print(f"codeviews: error: not a directory: {root}", file=sys.stderr)
            return EXIT_USAGE
        return run_batch(root, Path(args.out), config, max(1, args.jobs))
    try:
        if args.file:
            source, origin = Path(args.file).read_bytes(), args.file
        else:
            source, origin = sys.stdin.buffer.read(), "<stdin>"
    except OSError as exc:
        print(f"codeviews: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        data = render(source, config, origin=origin)
    except (SourceSyntaxError, EmptyInputError, UnicodeDecodeError) as exc:
        print(f"codeviews: {exc}", file=sys.stderr)
        return EXIT_SYNTAX
    except Exception as exc:
        log.exception("internal failure")
        print(f"codeviews: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if args.out:
        try:
            write_atomic(Path(args.out), data)
        except OSError as exc:
            print(f"codeviews: cannot write {args.out}: {exc}", file=sys.stderr)
            return EXIT_FAILURE
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()

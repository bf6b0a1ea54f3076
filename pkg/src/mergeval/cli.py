"""Command-line entry point: ``merge``, ``fixup`` and ``eval`` subcommands.

Exit codes: 0 clean, 1 conflicts remain, 2 usage or internal error.
``merge`` writes onto the left file when ``--out`` is omitted, so it can be
used as a per-file merge driver (``mergeval merge %O %A %B``).
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .corpus import CorpusError, load_corpus, write_report
from .evalharness import COMPARE_MODES, EvalConfig, InputMismatch, Report, default_k_grid, evaluate
from .golden import import_golden_suite
from .mergecore import (ConflictStyle, MalformedConflict, MergeResult, STYLES,
                        has_conflict_markers, parse_conflicts, render)
from .strategies.registry import FIXUPS, TOOL_NAMES, UnknownTool, get_fixup, get_tool
from .textmodel import Document, WhitespaceMode, split_lines

EXIT_CLEAN, EXIT_CONFLICTS, EXIT_ERROR = 0, 1, 2
FIXUP_TOOLS = ("imports", "version-numbers", "ivn")

log = logging.getLogger("mergeval")


class UsageError(Exception):
    pass


def _read(path: str) -> Document:
    try:
        return split_lines(Path(path).read_bytes())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_bytes(text.encode("utf-8", "surrogateescape"))
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror or exc}") from None


def _exit_for(text: str, style: ConflictStyle) -> int:
    return EXIT_CONFLICTS if has_conflict_markers(text, style.marker_len) else EXIT_CLEAN


def cmd_merge(args) -> int:
    spec = get_tool(args.tool)
    if args.ignore_space_change:
        spec = spec.with_ws(WhitespaceMode.IGNORE_SPACE_CHANGE)
    style = ConflictStyle(args.conflict_style, labels=tuple(args.labels))
    base, left, right = _read(args.base), _read(args.left), _read(args.right)
    result = spec.merge(base, left, right)
    text = render(result, style)
    _write(args.out or args.left, text)
    return _exit_for(text, style)


def _side(result: MergeResult, which: str, given: Optional[str]) -> Document:
    return _read(given) if given else result.side(which)


def cmd_fixup(args) -> int:
    style = ConflictStyle("diff3")
    text_in = _read(args.path)
    try:
        result = parse_conflicts(text_in, style)
    except MalformedConflict as exc:
        raise UsageError(f"{args.path}:{exc.line_no}: malformed conflict: {exc}") from None
    if result.clean:
        return EXIT_CLEAN
    base = _side(result, "base", args.base)
    left = _side(result, "left", args.left)
    right = _side(result, "right", args.right)
    fixed = get_fixup(args.tool)(result, base, left, right)
    text = render(fixed, style)
    if text != text_in.text:
        _write(args.path, text)
    return _exit_for(text, style)


def parse_k_grid(spec: Optional[str]) -> list[float]:
    """``a,b,c`` lists values; ``LO:HI[:N]`` is N log-spaced points (default 20)."""
    if not spec:
        return default_k_grid()
    try:
        if ":" in spec:
            parts = spec.split(":")
            if len(parts) not in (2, 3):
                raise ValueError
            lo, hi = float(parts[0]), float(parts[1])
            n = int(parts[2]) if len(parts) == 3 else 20
            if lo == hi:
                n = 1
            if n < 1 or lo > hi:
                raise ValueError
            grid = default_k_grid(n, lo, hi)
        else:
            grid = [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad --k-grid {spec!r}; use 'a,b,c' or 'LO:HI[:N]'") from None
    if not grid or any(not k > 0 for k in grid):
        raise UsageError("--k-grid values must be positive")
    return grid


def _tool_list(spec: str) -> list[str]:
    if spec == "all":
        return list(TOOL_NAMES)
    names = [t.strip() for t in spec.split(",") if t.strip()]
    for n in names:
        get_tool(n)
    if not names:
        raise UsageError("--tools is empty")
    return names


def _summary(report: Report) -> str:
    width = max([len(t) for t in report.tools] + [4])
    lines = [f"{'tool':<{width}}  merges  correct  incorrect  unhandled"]
    for t in report.tools:
        s = report.tallies[t]
        lines.append(f"{t:<{width}}  {s.num_merges:6d}  {s.num_correct:7d}  "
                     f"{s.num_incorrect:9d}  {s.num_unhandled:9d}")
    return "\n".join(lines)


def cmd_eval(args) -> int:
    if args.golden:
        scenarios = import_golden_suite()
    else:
        try:
            scenarios = load_corpus(args.corpus)
        except CorpusError as exc:
            raise UsageError(str(exc)) from None
    if not scenarios:
        raise UsageError("corpus has no scenarios")
    get_fixup(args.fixup)
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    config = EvalConfig(tools=tuple(_tool_list(args.tools)), fixup=args.fixup,
                        compare=args.compare, k_grid=tuple(parse_k_grid(args.k_grid)),
                        jobs=args.jobs, timing=args.time)
    report = evaluate(scenarios, config)
    if args.report:
        for p in write_report(report, args.report):
            log.info("wrote %s", p)
    print(_summary(report))
    return EXIT_CLEAN


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mergeval", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("merge", help="three-way merge one file")
    m.add_argument("base")
    m.add_argument("left")
    m.add_argument("right")
    m.add_argument("--tool", default="gitline", help=f"one of: {', '.join(TOOL_NAMES)}")
    m.add_argument("--out", help="output path (default: overwrite LEFT)")
    m.add_argument("--conflict-style", choices=STYLES, default="diff3")
    m.add_argument("--ignore-space-change", action="store_true")
    m.add_argument("--labels", nargs=3, metavar=("L", "B", "R"), default=["LEFT", "BASE", "RIGHT"])
    m.set_defaults(func=cmd_merge)

    f = sub.add_parser("fixup", help="resolve remaining conflicts in a fenced file")
    f.add_argument("path")
    f.add_argument("--tool", choices=FIXUP_TOOLS, default="ivn")
    f.add_argument("--base")
    f.add_argument("--left")
    f.add_argument("--right")
    f.set_defaults(func=cmd_fixup)

    e = sub.add_parser("eval", help="evaluate tools over a scenario corpus")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", metavar="DIR")
    src.add_argument("--golden", action="store_true", help="use the built-in scenarios")
    e.add_argument("--tools", default="all", help="comma-separated tool names or 'all'")
    e.add_argument("--k-grid", help="'a,b,c' or 'LO:HI[:N]' (default 20 points in 0.25..16)")
    e.add_argument("--compare", choices=COMPARE_MODES, default="exact")
    e.add_argument("--fixup", default="ivn", help=f"one of: {', '.join(FIXUPS)}")
    e.add_argument("--jobs", type=int, default=1)
    e.add_argument("--time", action="store_true", help="record median-of-3 run times")
    e.add_argument("--report", metavar="DIR")
    e.set_defaults(func=cmd_eval)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_CLEAN
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (UsageError, UnknownTool, InputMismatch, ValueError) as exc:
        print(f"mergeval: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

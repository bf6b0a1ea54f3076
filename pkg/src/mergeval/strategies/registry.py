"""Named merge tools and conflict fixups."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from typing import Callable

from ..align import DEFAULT_REFINE_CUTOFF
from ..mergecore import MergeResult, merge_lines
from ..textmodel import Document, WhitespaceMode
from .adjacent import merge_adjacent
from .hires import merge_hires
from .imports import fix_imports
from .versions import fix_versions

EXACT = WhitespaceMode.EXACT
IGNORE = WhitespaceMode.IGNORE_SPACE_CHANGE


class UnknownTool(KeyError):
    def __init__(self, name: str, valid):
        super().__init__(name)
        self.name = name
        self.valid = tuple(valid)

    def __str__(self):
        return f"unknown tool {self.name!r}; valid names: {', '.join(self.valid)}"


def merge_ivn(base: Document, left: Document, right: Document,
              ws: WhitespaceMode = EXACT) -> MergeResult:
    """Line merge followed by the imports fixup, then the version fixup."""
    return fix_versions(fix_imports(merge_lines(base, left, right, ws), base, left, right))


@dataclass(frozen=True)
class ToolSpec:
    name: str
    algorithm: str
    ws: WhitespaceMode = EXACT
    cutoff: int = DEFAULT_REFINE_CUTOFF

    def merge(self, base: Document, left: Document, right: Document) -> MergeResult:
        return _ALGORITHMS[self.algorithm](self, base, left, right)

    def with_ws(self, ws: WhitespaceMode) -> "ToolSpec":
        return replace(self, ws=ws)


_ALGORITHMS: dict[str, Callable[[ToolSpec, Document, Document, Document], MergeResult]] = {
    "gitline": lambda t, b, l, r: merge_lines(b, l, r, t.ws),
    "hires": lambda t, b, l, r: merge_hires(b, l, r, t.ws),
    "adjacent": lambda t, b, l, r: merge_adjacent(b, l, r, t.cutoff, t.ws),
    "imports": lambda t, b, l, r: fix_imports(merge_lines(b, l, r, t.ws), b, l, r),
    "version-numbers": lambda t, b, l, r: fix_versions(merge_lines(b, l, r, t.ws)),
    "ivn": lambda t, b, l, r: merge_ivn(b, l, r, t.ws),
}

TOOLS: dict[str, ToolSpec] = {
    spec.name: spec
    for spec in (
        ToolSpec("gitline", "gitline"),
        ToolSpec("gitline-ignorespace", "gitline", IGNORE),
        ToolSpec("hires", "hires"),
        ToolSpec("adjacent", "adjacent"),
        ToolSpec("imports", "imports"),
        ToolSpec("version-numbers", "version-numbers"),
        ToolSpec("ivn", "ivn"),
        ToolSpec("ivn-ignorespace", "ivn", IGNORE),
    )
}
TOOL_NAMES = tuple(TOOLS)


def get_tool(name: str) -> ToolSpec:
    try:
        return TOOLS[name]
    except KeyError:
        raise UnknownTool(name, TOOL_NAMES) from None


def run_tool(spec, base: Document, left: Document, right: Document) -> tuple[MergeResult, float]:
    """Run a tool (by spec or name) and return its result with elapsed seconds."""
    if isinstance(spec, str):
        spec = get_tool(spec)
    start = time.perf_counter()
    result = spec.merge(base, left, right)
    return result, time.perf_counter() - start


# A fixup consumes an existing (possibly conflicted) result for one file.
Fixup = Callable[[MergeResult, Document, Document, Document], MergeResult]

FIXUPS: dict[str, Fixup] = {
    "identity": lambda r, b, l, rt: r,
    "imports": fix_imports,
    "version-numbers": lambda r, b, l, rt: fix_versions(r),
    "ivn": lambda r, b, l, rt: fix_versions(fix_imports(r, b, l, rt)),
}


def get_fixup(name: str) -> Fixup:
    try:
        return FIXUPS[name]
    except KeyError:
        raise UnknownTool(name, tuple(FIXUPS)) from None

"""Resolve conflicts that consist only of Java ``import`` statements.

Imports are kept only when the rest of the merged file uses them, so the
fixup can both union two parents' import edits and restore an import that a
clean line merge dropped although merged code still needs it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from ..mergecore import Conflict, MergeResult, Resolved
from ..textmodel import LF, Document, Line

_IMPORT = re.compile(
    r"^[ \t]*import[ \t]+(?P<static>static[ \t]+)?"
    r"(?P<path>[A-Za-z_$][\w$]*(?:\.[A-Za-z_$][\w$]*)*)"
    r"(?P<wild>\.\*)?[ \t]*;[ \t]*(?://.*|/\*.*?\*/[ \t]*)?$"
)
_PACKAGE = re.compile(r"^[ \t]*package[ \t]+[\w.$]+[ \t]*;")
_IDENT = re.compile(r"[A-Za-z_$][\w$]*")


@dataclass(frozen=True)
class ImportStmt:
    raw: str
    is_static: bool
    path: str
    is_wildcard: bool

    @property
    def simple_name(self) -> Optional[str]:
        if self.is_wildcard:
            return None
        return self.path.rsplit(".", 1)[-1]

    @property
    def key(self) -> tuple[bool, str, bool]:
        return (self.is_static, self.path, self.is_wildcard)


def parse_import(line: str) -> Optional[ImportStmt]:
    m = _IMPORT.match(line)
    if not m:
        return None
    return ImportStmt(raw=line, is_static=bool(m["static"]), path=m["path"],
                      is_wildcard=bool(m["wild"]))


def _strip_comments_and_strings(text: str) -> str:
    """Blank out comments and string/char literals, keeping everything else."""
    out = []
    i, n = 0, len(text)
    while i < n:
        if text.startswith("//", i):
            j = text.find("\n", i)
            i = n if j < 0 else j
        elif text.startswith("/*", i):
            j = text.find("*/", i + 2)
            i = n if j < 0 else j + 2
            out.append(" ")
        elif text.startswith('"""', i):
            j = text.find('"""', i + 3)
            i = n if j < 0 else j + 3
            out.append(" ")
        elif text[i] in "\"'":
            quote = text[i]
            j = i + 1
            while j < n and text[j] != quote and text[j] != "\n":
                j += 2 if text[j] == "\\" else 1
            i = j + 1
            out.append(" ")
        else:
            out.append(text[i])
            i += 1
    return "".join(out)


def used_identifiers(lines: Iterable[Line]) -> set[str]:
    """Identifier tokens of non-import code, ignoring comments and literals."""
    code = "".join(ln.content + "\n" for ln in lines if parse_import(ln.content) is None)
    return set(_IDENT.findall(_strip_comments_and_strings(code)))


def _is_import_only(conflict: Conflict) -> bool:
    bodies = conflict.base + conflict.left + conflict.right
    has_import = False
    for ln in bodies:
        if parse_import(ln.content):
            has_import = True
        elif ln.content.strip():
            return False
    return has_import


def _keep(stmt: ImportStmt, used: set[str]) -> bool:
    return stmt.is_wildcard or stmt.simple_name in used


def _union(conflict: Conflict, used: set[str]) -> list[Line]:
    out: list[Line] = []
    seen = set()
    last_import = -1
    for ln in conflict.left:
        stmt = parse_import(ln.content)
        if stmt is None:
            out.append(ln)
            continue
        if stmt.key in seen or not _keep(stmt, used):
            continue
        seen.add(stmt.key)
        out.append(ln)
        last_import = len(out) - 1
    extra = []
    for ln in conflict.right:
        stmt = parse_import(ln.content)
        if stmt is None or stmt.key in seen or not _keep(stmt, used):
            continue
        seen.add(stmt.key)
        extra.append(ln if ln.terminator else Line(ln.content, LF))
    pos = last_import + 1 if last_import >= 0 else len(out)
    if extra and pos > 0 and not out[pos - 1].terminator:
        out[pos - 1] = Line(out[pos - 1].content, LF)
    return out[:pos] + extra + out[pos:]


def _code_lines(result: MergeResult) -> list[Line]:
    lines: list[Line] = []
    for seg in result.segments:
        if isinstance(seg, Resolved):
            lines.extend(seg.lines)
        else:
            lines.extend(seg.left)
            lines.extend(seg.right)
    return lines


def fix_imports(result: MergeResult, base: Document, left: Document,
                right: Document) -> MergeResult:
    """Resolve import-only conflicts and restore needed base imports.

    Each conflict whose bodies hold only imports and blank lines becomes the
    left parent's imports followed by the right-only ones, dropping every
    non-wildcard import whose simple name the code never mentions. Then any
    base import that the code uses but the result lacks is re-inserted after
    the last import, unless another import already binds that simple name.
    ``left`` and ``right`` are accepted for a uniform fixup signature.
    """
    used = used_identifiers(_code_lines(result))
    segments: list = []
    for seg in result.segments:
        if isinstance(seg, Conflict) and _is_import_only(seg):
            segments.append(Resolved(tuple(_union(seg, used))))
        else:
            segments.append(seg)
    fixed = MergeResult.build(segments)
    return _restore_base_imports(fixed, base, used)


def _restore_base_imports(result: MergeResult, base: Document, used: set[str]) -> MergeResult:
    present = set()
    bound = set()
    for ln in _code_lines(result):
        stmt = parse_import(ln.content)
        if stmt:
            present.add(stmt.key)
            if stmt.simple_name:
                bound.add(stmt.simple_name)
    missing = []
    for ln in base.lines:
        stmt = parse_import(ln.content)
        if (stmt and not stmt.is_wildcard and stmt.key not in present
                and stmt.simple_name in used and stmt.simple_name not in bound):
            present.add(stmt.key)
            bound.add(stmt.simple_name)
            missing.append(ln if ln.terminator else Line(ln.content, LF))
    if not missing:
        return result

    segments = list(result.segments)
    where = _insertion_point(segments)
    if where is None:
        segments.insert(0, Resolved(tuple(missing)))
    else:
        si, li = where
        lines = list(segments[si].lines)
        if li > 0 and not lines[li - 1].terminator:
            lines[li - 1] = Line(lines[li - 1].content, LF)
        segments[si] = Resolved(tuple(lines[:li]) + tuple(missing) + tuple(lines[li:]))
    return MergeResult.build(segments)


def _insertion_point(segments: Sequence) -> Optional[tuple[int, int]]:
    """(segment, line) just after the last resolved import, else after ``package``."""
    last_import = package = None
    for si, seg in enumerate(segments):
        if not isinstance(seg, Resolved):
            continue
        for li, ln in enumerate(seg.lines):
            if parse_import(ln.content):
                last_import = (si, li + 1)
            elif package is None and _PACKAGE.match(ln.content):
                package = (si, li + 1)
    return last_import or package

"""Character-level merge of the conflicts a line merge leaves behind."""

from __future__ import annotations

from ..mergecore import Conflict, MergeResult, Resolved, merge_lines
from ..textmodel import Document, WhitespaceMode, explode_chars, implode_chars


def merge_conflict_chars(conflict: Conflict,
                         ws: WhitespaceMode = WhitespaceMode.EXACT) -> MergeResult:
    """Re-merge one conflict with every character on its own line."""
    b, l, r = (explode_chars(Document(side)) for side in (conflict.base, conflict.left, conflict.right))
    char_result = merge_lines(b, l, r, ws)
    if not char_result.clean:
        return MergeResult.build([conflict])
    return MergeResult.build([Resolved(implode_chars(char_result.document()).lines)])


def merge_hires(base: Document, left: Document, right: Document,
                ws: WhitespaceMode = WhitespaceMode.EXACT) -> MergeResult:
    """Line merge first; only conflicting regions get the character pass.

    A region is replaced only if its character merge is entirely clean, so a
    clean line merge passes through unchanged.
    """
    line_result = merge_lines(base, left, right, ws)
    if line_result.clean:
        return line_result
    segments = []
    for seg in line_result.segments:
        if isinstance(seg, Conflict):
            segments.extend(merge_conflict_chars(seg, ws).segments)
        else:
            segments.append(seg)
    return MergeResult.build(segments)

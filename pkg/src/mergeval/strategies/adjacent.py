"""Accept non-overlapping edits on neighbouring lines."""

from __future__ import annotations

from ..align import DEFAULT_REFINE_CUTOFF, RefinementRefused, chunk3, refine_chunk3
from ..mergecore import MergeResult, resolve
from ..textmodel import Document, WhitespaceMode


def merge_adjacent(base: Document, left: Document, right: Document,
                   cutoff: int = DEFAULT_REFINE_CUTOFF,
                   ws: WhitespaceMode = WhitespaceMode.EXACT) -> MergeResult:
    """Line merge in which each conflicting chunk gets a finer alignment.

    The refined sub-chunks are resolved with the usual four-case rule. The
    refinement is spliced in only when every sub-chunk resolves; otherwise,
    or when the chunk exceeds ``cutoff`` lines on some side, the original
    conflict stays.
    """
    segments = []
    for chunk in chunk3(base, left, right, ws):
        coarse = resolve([chunk], base, left, right, ws)
        if coarse.clean:
            segments.extend(coarse.segments)
            continue
        try:
            sub = refine_chunk3(chunk, base, left, right, cutoff, ws)
        except RefinementRefused:
            segments.extend(coarse.segments)
            continue
        fine = resolve(sub, base, left, right, ws)
        segments.extend((fine if fine.clean else coarse).segments)
    return MergeResult.build(segments)

"""Three-way merge algorithms and an evaluation harness for comparing them."""

from .mergecore import (Conflict, ConflictStyle, MergeResult, Resolved, merge_lines,
                        parse_conflicts, render)
from .textmodel import Document, Line, WhitespaceMode, split_lines

__all__ = [
    "Conflict", "ConflictStyle", "Document", "Line", "MergeResult", "Resolved",
    "WhitespaceMode", "merge_lines", "parse_conflicts", "render", "split_lines",
]

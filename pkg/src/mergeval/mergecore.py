"""Line-based three-way resolution and conflict-marker rendering/parsing."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence, Union

from .align import Aligner, Chunk3, chunk3, myers_matches
from .textmodel import LF, Document, Line, WhitespaceMode, keys, split_lines

MARKER_LEN_ENV = "MERGEVAL_MARKER_LEN"
MIN_MARKER_LEN = 7
STYLES = ("merge", "diff3", "zdiff3")


@dataclass(frozen=True)
class Resolved:
    lines: tuple[Line, ...]


@dataclass(frozen=True)
class Conflict:
    base: tuple[Line, ...]
    left: tuple[Line, ...]
    right: tuple[Line, ...]


Segment = Union[Resolved, Conflict]


@dataclass(frozen=True)
class MergeResult:
    segments: tuple[Segment, ...] = ()

    @classmethod
    def build(cls, segments: Iterable[Segment]) -> "MergeResult":
        """Coalesce neighbouring resolved segments and drop empty ones."""
        out: list[Segment] = []
        for seg in segments:
            if isinstance(seg, Resolved):
                if not seg.lines:
                    continue
                if out and isinstance(out[-1], Resolved):
                    out[-1] = Resolved(out[-1].lines + tuple(seg.lines))
                    continue
                out.append(Resolved(tuple(seg.lines)))
            else:
                out.append(Conflict(tuple(seg.base), tuple(seg.left), tuple(seg.right)))
        return cls(tuple(out))

    @property
    def clean(self) -> bool:
        return not any(isinstance(s, Conflict) for s in self.segments)

    @property
    def conflicts(self) -> list[Conflict]:
        return [s for s in self.segments if isinstance(s, Conflict)]

    @property
    def num_conflicts(self) -> int:
        return len(self.conflicts)

    def side(self, which: str) -> Document:
        """Reassemble one side: resolved text plus that side of every conflict."""
        lines: list[Line] = []
        for seg in self.segments:
            lines.extend(seg.lines if isinstance(seg, Resolved) else getattr(seg, which))
        return _as_document(lines)

    def document(self) -> Document:
        if not self.clean:
            raise ValueError("merge result still contains conflicts")
        return self.side("left")

    @classmethod
    def from_document(cls, doc: Document) -> "MergeResult":
        return cls.build([Resolved(doc.lines)])


def _as_document(lines: Sequence[Line]) -> Document:
    # Mid-document lines must be terminated; a spliced unterminated line
    # (the end of some input file) gets an LF so text never runs together.
    fixed = [ln if ln.terminator or i == len(lines) - 1 else Line(ln.content, LF)
             for i, ln in enumerate(lines)]
    return Document(tuple(fixed))


def _same(a: Sequence[Line], b: Sequence[Line], ws: WhitespaceMode) -> bool:
    return len(a) == len(b) and keys(a, ws) == keys(b, ws)


def resolve(chunks: Sequence[Chunk3], base: Document, left: Document, right: Document,
            ws: WhitespaceMode = WhitespaceMode.EXACT) -> MergeResult:
    """Apply the four-case rule to every changed chunk.

    Agreeing text (both parents equal, or a stable chunk) is emitted from the
    left parent, so under ignore-space-change the left bytes win.
    """
    segments: list[Segment] = []
    for c in chunks:
        b = base.lines[slice(*c.base_range)]
        l = left.lines[slice(*c.left_range)]
        r = right.lines[slice(*c.right_range)]
        if c.is_stable or _same(l, r, ws):
            segments.append(Resolved(l))
        elif _same(l, b, ws):
            segments.append(Resolved(r))
        elif _same(r, b, ws):
            segments.append(Resolved(l))
        else:
            segments.append(Conflict(b, l, r))
    return MergeResult.build(segments)


def merge_lines(base: Document, left: Document, right: Document,
                ws: WhitespaceMode = WhitespaceMode.EXACT,
                aligner: Aligner = myers_matches) -> MergeResult:
    return resolve(chunk3(base, left, right, ws, aligner), base, left, right, ws)


# --- conflict markers -------------------------------------------------------

def default_marker_len() -> int:
    value = os.environ.get(MARKER_LEN_ENV)
    return int(value) if value else MIN_MARKER_LEN


@dataclass(frozen=True)
class ConflictStyle:
    style: str = "diff3"
    marker_len: int = field(default_factory=default_marker_len)
    labels: tuple[str, str, str] = ("LEFT", "BASE", "RIGHT")

    def __post_init__(self):
        if self.style not in STYLES:
            raise ValueError(f"unknown conflict style {self.style!r}; expected one of {STYLES}")
        if self.marker_len < MIN_MARKER_LEN:
            raise ValueError(f"marker_len must be >= {MIN_MARKER_LEN}")


class MalformedConflict(ValueError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MarkerInContent(ValueError):
    pass


def _marker(ch: str, n: int, label: str = "") -> str:
    return ch * n + (" " + label if label else "")


def _is_marker(content: str, ch: str, n: int) -> bool:
    return content.startswith(ch * n) and (len(content) == n or content[n] in " \t")


def looks_like_marker(content: str, n: int = MIN_MARKER_LEN) -> bool:
    return any(_is_marker(content, ch, n) for ch in "<|=>")


def _zdiff3_split(c: Conflict):
    l, r, b = c.left, c.right, c.base
    pre = 0
    while pre < len(l) and pre < len(r) and l[pre] == r[pre]:
        pre += 1
    suf = 0
    while (suf < len(l) - pre and suf < len(r) - pre
           and l[len(l) - 1 - suf] == r[len(r) - 1 - suf]):
        suf += 1
    # The base body is trimmed by the same counts, like the style it mimics,
    # so the fenced base is not always the true base text.
    bpre = min(pre, len(b))
    bsuf = min(suf, len(b) - bpre)
    inner = Conflict(b[bpre:len(b) - bsuf], l[pre:len(l) - suf], r[pre:len(r) - suf])
    return l[:pre], inner, l[len(l) - suf:]


def render(result: MergeResult, style: Optional[ConflictStyle] = None,
           strict: bool = False) -> str:
    """Render ``result`` as text with conflict fences.

    With ``strict=True`` a body line that itself looks like a marker raises
    :class:`MarkerInContent`, since the output could not be parsed back.
    """
    style = style or ConflictStyle()
    n = style.marker_len
    all_lines = [ln for seg in result.segments
                 for ln in (seg.lines if isinstance(seg, Resolved) else seg.left + seg.base + seg.right)]
    eol = next((ln.terminator for ln in all_lines if ln.terminator), LF)
    if strict:
        for ln in all_lines:
            if looks_like_marker(ln.content, n):
                raise MarkerInContent(f"content line looks like a conflict marker: {ln.content!r}")

    out: list[str] = []
    pending_eol = False

    def emit(lines: Iterable[Line]):
        nonlocal pending_eol
        for ln in lines:
            if pending_eol:
                out.append(LF)
            out.append(ln.text)
            pending_eol = not ln.terminator

    def emit_marker(text: str):
        nonlocal pending_eol
        if pending_eol:
            out.append(LF)
        out.append(text + eol)
        pending_eol = False

    left_label, base_label, right_label = style.labels
    for seg in result.segments:
        if isinstance(seg, Resolved):
            emit(seg.lines)
            continue
        before, body, after = (), seg, ()
        if style.style == "zdiff3":
            before, body, after = _zdiff3_split(seg)
        emit(before)
        emit_marker(_marker("<", n, left_label))
        emit(body.left)
        if style.style in ("diff3", "zdiff3"):
            emit_marker(_marker("|", n, base_label))
            emit(body.base)
        emit_marker(_marker("=", n))
        emit(body.right)
        emit_marker(_marker(">", n, right_label))
        emit(after)
    return "".join(out)


def parse_conflicts(text: Union[str, bytes, Document],
                    style: Optional[ConflictStyle] = None) -> MergeResult:
    """Parse fenced text back into a :class:`MergeResult`.

    The base section is optional inside every fence; merge-style fences give
    conflicts with an empty base.

    Raises:
        MalformedConflict: on nested, stray or unterminated markers.
    """
    style = style or ConflictStyle()
    n = style.marker_len
    doc = text if isinstance(text, Document) else split_lines(text)
    segments: list[Segment] = []
    buf: list[Line] = []
    state = "text"
    opened_at = 0
    parts: dict[str, list[Line]] = {}
    for idx, ln in enumerate(doc.lines, start=1):
        c = ln.content
        is_open = _is_marker(c, "<", n)
        is_base = _is_marker(c, "|", n)
        is_sep = _is_marker(c, "=", n)
        is_close = _is_marker(c, ">", n)
        if state == "text":
            if is_open:
                segments.append(Resolved(tuple(buf)))
                buf = []
                parts = {"left": [], "base": [], "right": []}
                state, opened_at = "left", idx
            elif is_base or is_close:
                raise MalformedConflict(idx, "marker outside a conflict")
            else:
                buf.append(ln)
        elif is_open:
            raise MalformedConflict(idx, f"nested conflict start (open at line {opened_at})")
        elif state == "left":
            if is_base:
                state = "base"
            elif is_sep:
                state = "right"
            elif is_close:
                raise MalformedConflict(idx, "conflict closed before separator")
            else:
                parts["left"].append(ln)
        elif state == "base":
            if is_sep:
                state = "right"
            elif is_base or is_close:
                raise MalformedConflict(idx, "unexpected marker in base section")
            else:
                parts["base"].append(ln)
        else:  # right
            if is_close:
                segments.append(Conflict(tuple(parts["base"]), tuple(parts["left"]),
                                         tuple(parts["right"])))
                state = "text"
            elif is_base or is_sep:
                raise MalformedConflict(idx, "unexpected marker in right section")
            else:
                parts["right"].append(ln)
    if state != "text":
        raise MalformedConflict(opened_at, "conflict is never closed")
    segments.append(Resolved(tuple(buf)))
    return MergeResult.build(segments)


def has_conflict_markers(text: str, marker_len: Optional[int] = None) -> bool:
    n = marker_len or default_marker_len()
    return any(_is_marker(ln.content, "<", n) for ln in split_lines(text).lines)

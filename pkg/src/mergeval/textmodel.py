"""Line and character views of file text.

A :class:`Document` is an immutable sequence of :class:`Line` values. Each
line keeps its own terminator so that joining the lines reproduces the input
exactly. Raw bytes that are not valid UTF-8 are decoded with
``surrogateescape`` and re-encoded the same way, so no byte is ever lost.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

LF = "\n"
CRLF = "\r\n"
NONE = ""
TERMINATORS = (LF, CRLF, NONE)

# Exploded-form newline sentinels. Both are longer than one character, so they
# can never collide with an exploded single-character line.
LF_SENTINEL = "\x00LF"
CRLF_SENTINEL = "\x00CRLF"
_SENTINEL_TO_TERMINATOR = {LF_SENTINEL: LF, CRLF_SENTINEL: CRLF}
_TERMINATOR_TO_SENTINEL = {LF: LF_SENTINEL, CRLF: CRLF_SENTINEL}

_WS_RUN = re.compile(r"[ \t]+")


class DecodeError(ValueError):
    """Input bytes are not valid UTF-8 (raised only in strict mode)."""

    def __init__(self, offset: int, reason: str):
        super().__init__(f"invalid UTF-8 at byte offset {offset}: {reason}")
        self.offset = offset


class MalformedExplodedForm(ValueError):
    pass


class WhitespaceMode(str, enum.Enum):
    EXACT = "exact"
    IGNORE_SPACE_CHANGE = "ignore-space-change"

    @classmethod
    def parse(cls, value: Union[str, "WhitespaceMode"]) -> "WhitespaceMode":
        if isinstance(value, cls):
            return value
        aliases = {"ignore-space": cls.IGNORE_SPACE_CHANGE, "ignorespace": cls.IGNORE_SPACE_CHANGE}
        if value in aliases:
            return aliases[value]
        return cls(value)


@dataclass(frozen=True)
class Line:
    content: str
    terminator: str = LF

    def __post_init__(self):
        if "\n" in self.content:
            raise ValueError(f"line content contains a newline: {self.content!r}")
        if self.terminator not in TERMINATORS:
            raise ValueError(f"bad terminator {self.terminator!r}")

    @property
    def text(self) -> str:
        return self.content + self.terminator


@dataclass(frozen=True)
class Document:
    lines: tuple[Line, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        for line in self.lines[:-1]:
            if not line.terminator:
                raise ValueError("only the last line of a document may lack a terminator")

    @property
    def trailing_newline(self) -> bool:
        return bool(self.lines) and self.lines[-1].terminator != NONE

    @property
    def text(self) -> str:
        return "".join(line.text for line in self.lines)

    def to_bytes(self) -> bytes:
        return self.text.encode("utf-8", "surrogateescape")

    def __len__(self) -> int:
        return len(self.lines)

    def __getitem__(self, index):
        return self.lines[index]

    def __iter__(self):
        return iter(self.lines)

    @classmethod
    def from_lines(cls, lines: Iterable[Line]) -> "Document":
        return cls(tuple(lines))


EMPTY = Document(())


def _decode(data: bytes, strict: bool) -> str:
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        if strict:
            raise DecodeError(exc.start, exc.reason) from None
        return data.decode("utf-8", "surrogateescape")


def split_lines(text: Union[str, bytes], strict: bool = False) -> Document:
    """Split ``text`` into a :class:`Document`.

    Only ``\\n`` ends a line; a ``\\r`` directly before it makes the terminator
    CRLF. A lone ``\\r`` stays part of the content. Bytes input is decoded as
    UTF-8; with ``strict=False`` undecodable bytes pass through untouched.
    """
    if isinstance(text, (bytes, bytearray)):
        text = _decode(bytes(text), strict)
    lines = []
    start = 0
    n = len(text)
    while start < n:
        nl = text.find("\n", start)
        if nl < 0:
            lines.append(Line(text[start:], NONE))
            break
        if nl > start and text[nl - 1] == "\r":
            lines.append(Line(text[start : nl - 1], CRLF))
        else:
            lines.append(Line(text[start:nl], LF))
        start = nl + 1
    return Document(tuple(lines))


def join_lines(lines: Iterable[Line]) -> str:
    return "".join(line.text for line in lines)


def line_key(line: Union[Line, str], ws: WhitespaceMode = WhitespaceMode.EXACT) -> str:
    """Comparison key for ``line`` under ``ws``.

    Exact mode compares content and terminator byte-for-byte. In
    ignore-space-change mode every run of spaces/tabs counts as one space,
    trailing blanks are dropped, and CRLF equals LF; a missing final newline
    still differs from a present one.
    """
    if isinstance(line, str):
        line = Line(line, NONE)
    if ws is WhitespaceMode.EXACT:
        return line.content + line.terminator
    key = _WS_RUN.sub(" ", line.content).rstrip(" ")
    return key + ("\n" if line.terminator else "")


def keys(lines: Sequence[Line], ws: WhitespaceMode = WhitespaceMode.EXACT) -> list[str]:
    return [line_key(line, ws) for line in lines]


def explode_chars(doc: Document) -> Document:
    """One line per character; each terminator becomes a sentinel line."""
    out = []
    for line in doc.lines:
        out.extend(Line(ch, LF) for ch in line.content)
        if line.terminator:
            out.append(Line(_TERMINATOR_TO_SENTINEL[line.terminator], LF))
    return Document(tuple(out))


def implode_chars(doc: Document) -> Document:
    lines = []
    buf: list[str] = []
    for idx, line in enumerate(doc.lines):
        term = _SENTINEL_TO_TERMINATOR.get(line.content)
        if term is not None:
            lines.append(Line("".join(buf), term))
            buf = []
        elif len(line.content) == 1:
            buf.append(line.content)
        else:
            raise MalformedExplodedForm(
                f"line {idx + 1} is neither a single character nor a newline sentinel: {line.content!r}"
            )
    if buf:
        lines.append(Line("".join(buf), NONE))
    return Document(tuple(lines))

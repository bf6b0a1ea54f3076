"""Resolve conflicts between version numbers by taking the newest."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import zip_longest
from typing import Optional

from ..mergecore import Conflict, MergeResult, Resolved

_VERSION = re.compile(r"(?<!\d)(\d+(?:\.\d+)+)([-A-Za-z0-9._]*)")


@dataclass(frozen=True)
class VersionToken:
    components: tuple[int, ...]
    suffix: str
    span: tuple[int, int]
    raw: str

    def numeric_key(self, width: int) -> tuple[int, ...]:
        return self.components + (0,) * (width - len(self.components))


def find_version(line: str) -> Optional[VersionToken]:
    """First token like ``2.3.1`` (at least one period) plus any glued suffix."""
    m = _VERSION.search(line)
    if not m:
        return None
    comps = tuple(int(x) for x in m.group(1).split("."))
    return VersionToken(comps, m.group(2), m.span(), m.group(0))


def compare_versions(a: VersionToken, b: VersionToken) -> int:
    """Numeric comparison, shorter one padded with zeros; suffix ignored."""
    for x, y in zip_longest(a.components, b.components, fillvalue=0):
        if x != y:
            return -1 if x < y else 1
    return 0


def _resolve_version_conflict(c: Conflict):
    if not (len(c.base) == len(c.left) == len(c.right) == 1):
        return None
    lines = (c.base[0], c.left[0], c.right[0])
    toks = [find_version(ln.content) for ln in lines]
    if any(t is None for t in toks):
        return None
    frames = {(ln.content[: t.span[0]], ln.content[t.span[1]:]) for ln, t in zip(lines, toks)}
    if len(frames) != 1:
        return None
    base_v, left_v, right_v = toks
    if compare_versions(left_v, base_v) <= 0 or compare_versions(right_v, base_v) <= 0:
        return None
    order = compare_versions(left_v, right_v)
    if order == 0:
        # Same number spelled differently, or differing suffixes: no safe pick.
        return None
    return c.left if order > 0 else c.right


def fix_versions(result: MergeResult) -> MergeResult:
    """Replace single-line version conflicts where both parents bumped the base.

    Applies only when the three lines are identical apart from one version
    token and both parents' versions exceed the base's; the larger one wins.
    """
    segments = []
    for seg in result.segments:
        if isinstance(seg, Conflict):
            picked = _resolve_version_conflict(seg)
            if picked is not None:
                segments.append(Resolved(picked))
                continue
        segments.append(seg)
    return MergeResult.build(segments)

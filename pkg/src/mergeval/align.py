"""Alignment: pairwise Myers diff and three-way chunking.

``diff2`` produces a minimal insert/delete edit script. ``chunk3`` uses two
such scripts (base to left, base to right) to cut the three documents into
stable regions, where a base line survives unchanged in both parents, and
changed regions in between. ``refine_chunk3`` re-aligns one changed region
with a three-sequence dynamic program so that edits on neighbouring lines
can be told apart.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .textmodel import Document, Line, WhitespaceMode, keys

STABLE = "stable"
CHANGED = "changed"

DEFAULT_REFINE_CUTOFF = 200


@dataclass(frozen=True)
class Keep:
    count: int


@dataclass(frozen=True)
class Delete:
    count: int


@dataclass(frozen=True)
class Insert:
    lines: tuple[Line, ...]


Op = Union[Keep, Delete, Insert]


@dataclass(frozen=True)
class EditScript:
    ops: tuple[Op, ...]

    def apply(self, a: Sequence[Line]) -> list[Line]:
        out: list[Line] = []
        pos = 0
        for op in self.ops:
            if isinstance(op, Keep):
                out.extend(a[pos : pos + op.count])
                pos += op.count
            elif isinstance(op, Delete):
                pos += op.count
            else:
                out.extend(op.lines)
        if pos != len(a):
            raise ValueError("edit script does not consume the whole input")
        return out

    @property
    def cost(self) -> int:
        return sum(op.count if isinstance(op, Delete) else len(op.lines)
                   for op in self.ops if not isinstance(op, Keep))


@dataclass(frozen=True)
class Chunk3:
    kind: str
    base_range: tuple[int, int]
    left_range: tuple[int, int]
    right_range: tuple[int, int]

    @property
    def is_stable(self) -> bool:
        return self.kind == STABLE


class RefinementRefused(Exception):
    """A changed region is too large for the three-way dynamic program."""


# An aligner maps two key sequences to the list of matched index pairs,
# strictly increasing in both coordinates.
Aligner = Callable[[Sequence[str], Sequence[str]], list]


def _intern(a: Sequence[str], b: Sequence[str]) -> tuple[list[int], list[int]]:
    table: dict[str, int] = {}
    ia = [table.setdefault(x, len(table)) for x in a]
    ib = [table.setdefault(x, len(table)) for x in b]
    return ia, ib


def myers_matches(a: Sequence[str], b: Sequence[str]) -> list[tuple[int, int]]:
    """Matched index pairs of a shortest edit script (Myers 1986, greedy)."""
    a, b = _intern(a, b)
    n, m = len(a), len(b)
    # Strip common prefix and suffix; they are always part of an optimal match.
    pre = 0
    while pre < n and pre < m and a[pre] == b[pre]:
        pre += 1
    suf = 0
    while suf < n - pre and suf < m - pre and a[n - 1 - suf] == b[m - 1 - suf]:
        suf += 1
    head = [(i, i) for i in range(pre)]
    tail = [(n - suf + i, m - suf + i) for i in range(suf)]
    ca, cb = a[pre : n - suf], b[pre : m - suf]
    mid = _myers_core(ca, cb)
    return head + [(i + pre, j + pre) for i, j in mid] + tail


def _myers_core(a: list[int], b: list[int]) -> list[tuple[int, int]]:
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return []
    maxd = n + m
    offset = maxd + 1
    v = [0] * (2 * maxd + 3)
    trace = []
    found = False
    for d in range(maxd + 1):
        trace.append(v[offset - d - 1 : offset + d + 2])
        for k in range(-d, d + 1, 2):
            if k == -d or (k != d and v[offset + k - 1] < v[offset + k + 1]):
                x = v[offset + k + 1]
            else:
                x = v[offset + k - 1] + 1
            y = x - k
            while x < n and y < m and a[x] == b[y]:
                x += 1
                y += 1
            v[offset + k] = x
            if x >= n and y >= m:
                found = True
                break
        if found:
            break
    # Walk the trace backwards, collecting diagonal (match) moves. Each
    # snapshot holds v for diagonals -d-1..d+1, so diagonal k sits at k + d + 1.
    matches = []
    x, y = n, m
    for d in range(len(trace) - 1, -1, -1):
        snap = trace[d]
        k = x - y
        if k == -d or (k != d and snap[k - 1 + d + 1] < snap[k + 1 + d + 1]):
            prev_k = k + 1
        else:
            prev_k = k - 1
        prev_x = snap[prev_k + d + 1]
        prev_y = prev_x - prev_k
        while x > prev_x and y > prev_y:
            x -= 1
            y -= 1
            matches.append((x, y))
        if d:
            x, y = prev_x, prev_y
    matches.reverse()
    return matches


def script_from_matches(b: Sequence[Line], matches, n: int, m: int) -> EditScript:
    ops: list[Op] = []

    def push(op: Op):
        if ops and type(ops[-1]) is type(op):
            last = ops.pop()
            if isinstance(op, Insert):
                op = Insert(last.lines + op.lines)
            else:
                op = type(op)(last.count + op.count)
        ops.append(op)

    i = j = 0
    for mi, mj in list(matches) + [(n, m)]:
        if mi > i:
            push(Delete(mi - i))
        if mj > j:
            push(Insert(tuple(b[j:mj])))
        if mi < n:
            push(Keep(1))
        i, j = mi + 1, mj + 1
    return EditScript(tuple(ops))


def diff2(a: Document, b: Document, ws: WhitespaceMode = WhitespaceMode.EXACT,
          aligner: Aligner = myers_matches) -> EditScript:
    """Edit script turning ``a`` into ``b``, comparing lines by ``line_key``."""
    matches = aligner(keys(a.lines, ws), keys(b.lines, ws))
    return script_from_matches(b.lines, matches, len(a), len(b))


def _match_map(matches, n: int) -> list[Optional[int]]:
    out: list[Optional[int]] = [None] * n
    for i, j in matches:
        out[i] = j
    return out


def chunk3(base: Document, left: Document, right: Document,
           ws: WhitespaceMode = WhitespaceMode.EXACT,
           aligner: Aligner = myers_matches) -> list[Chunk3]:
    """Partition the three documents into stable and changed chunks."""
    bk = keys(base.lines, ws)
    ml = _match_map(aligner(bk, keys(left.lines, ws)), len(base))
    mr = _match_map(aligner(bk, keys(right.lines, ws)), len(base))
    nb, nl, nr = len(base), len(left), len(right)
    chunks: list[Chunk3] = []
    i = j = k = 0
    while True:
        run = 0
        while i + run < nb and ml[i + run] == j + run and mr[i + run] == k + run:
            run += 1
        if run:
            chunks.append(Chunk3(STABLE, (i, i + run), (j, j + run), (k, k + run)))
            i, j, k = i + run, j + run, k + run
        sync = i
        while sync < nb and (ml[sync] is None or mr[sync] is None):
            sync += 1
        if sync >= nb:
            if i < nb or j < nl or k < nr:
                chunks.append(Chunk3(CHANGED, (i, nb), (j, nl), (k, nr)))
            break
        jl, kr = ml[sync], mr[sync]
        chunks.append(Chunk3(CHANGED, (i, sync), (j, jl), (k, kr)))
        i, j, k = sync, jl, kr
    return chunks


# --- three-way refinement -------------------------------------------------

# Column kinds produced by the three-sequence alignment.
_B, _L, _R = 1, 2, 4


def _align3(b: list[int], l: list[int], r: list[int]) -> list[int]:
    """Sum-of-pairs alignment of three sequences.

    A column may hold any non-empty subset of {base, left, right} whose
    members are all equal; it scores one point per matching pair. Returns
    the column masks in order.
    """
    n, m, p = len(b), len(l), len(r)
    neg = np.int32(-(1 << 20))
    D = np.full((n + 1, m + 1, p + 1), neg, dtype=np.int32)
    r_arr = np.asarray(r, dtype=np.int64)
    eq_lr_by_j = [r_arr == x for x in l]
    for i in range(n + 1):
        eq_br = (r_arr == b[i - 1]) if i else None
        for j in range(m + 1):
            if i == 0 and j == 0:
                D[0, 0, :] = 0
                continue
            cand = np.full(p + 1, neg, dtype=np.int32)
            if i:
                np.maximum(cand, D[i - 1, j], out=cand)
            if j:
                np.maximum(cand, D[i, j - 1], out=cand)
            if i and j and b[i - 1] == l[j - 1]:
                np.maximum(cand, D[i - 1, j - 1] + 1, out=cand)
            if p:
                if i:
                    shifted = np.where(eq_br, D[i - 1, j, :-1] + 1, neg)
                    np.maximum(cand[1:], shifted, out=cand[1:])
                if j:
                    eq_lr = eq_lr_by_j[j - 1]
                    shifted = np.where(eq_lr, D[i, j - 1, :-1] + 1, neg)
                    np.maximum(cand[1:], shifted, out=cand[1:])
                    if i and b[i - 1] == l[j - 1]:
                        shifted = np.where(eq_br, D[i - 1, j - 1, :-1] + 3, neg)
                        np.maximum(cand[1:], shifted, out=cand[1:])
            D[i, j] = np.maximum.accumulate(cand)
    cols = []
    i, j, k = n, m, p
    while i or j or k:
        cur = D[i, j, k]
        if i and j and k and b[i - 1] == l[j - 1] == r[k - 1] and D[i - 1, j - 1, k - 1] + 3 == cur:
            cols.append(_B | _L | _R); i, j, k = i - 1, j - 1, k - 1
        elif i and j and b[i - 1] == l[j - 1] and D[i - 1, j - 1, k] + 1 == cur:
            cols.append(_B | _L); i, j = i - 1, j - 1
        elif i and k and b[i - 1] == r[k - 1] and D[i - 1, j, k - 1] + 1 == cur:
            cols.append(_B | _R); i, k = i - 1, k - 1
        elif j and k and l[j - 1] == r[k - 1] and D[i, j - 1, k - 1] + 1 == cur:
            cols.append(_L | _R); j, k = j - 1, k - 1
        elif k and D[i, j, k - 1] == cur:
            cols.append(_R); k -= 1
        elif j and D[i, j - 1, k] == cur:
            cols.append(_L); j -= 1
        else:
            cols.append(_B); i -= 1
    cols.reverse()
    return cols


@dataclass(frozen=True)
class _Hunk:
    side: str  # "left" or "right"
    start: int  # base range
    end: int


def _hunks(cols: list[int], side_bit: int, side: str) -> list[_Hunk]:
    """Base ranges that ``side`` changed, read off the column alignment."""
    out = []
    bi = 0
    start = None
    for col in cols:
        kept = bool(col & _B) and bool(col & side_bit)
        touches = bool(col & _B) or bool(col & side_bit)
        if kept:
            if start is not None:
                out.append(_Hunk(side, start, bi))
                start = None
        elif touches and start is None:
            start = bi
        if col & _B:
            bi += 1
    if start is not None:
        out.append(_Hunk(side, start, bi))
    return out


def _overlap(a: _Hunk, b: _Hunk) -> bool:
    if a.start == a.end and b.start == b.end:
        return a.start == b.start
    return a.start < b.end and b.start < a.end


def _boundaries(cols: list[int], side_bit: int, nb: int) -> tuple[list[int], list[int]]:
    """Side positions at each base boundary, before and after insertions there."""
    before = [-1] * (nb + 1)
    after = [0] * (nb + 1)
    bi = si = 0
    before[0] = 0
    for col in cols:
        if col & _B:
            after[bi] = si
            bi += 1
            if col & side_bit:
                si += 1
            before[bi] = si
        elif col & side_bit:
            si += 1
    after[bi] = si
    return before, after


def refine_chunk3(chunk: Chunk3, base: Document, left: Document, right: Document,
                  cutoff: int = DEFAULT_REFINE_CUTOFF,
                  ws: WhitespaceMode = WhitespaceMode.EXACT) -> list[Chunk3]:
    """Split a changed chunk into finer chunks using a three-way alignment.

    Each parent's edits become hunks in base coordinates. Hunks from the two
    parents that overlap (two insertions at the same point count as
    overlapping; merely touching ranges do not) fall into one changed chunk;
    base lines outside every hunk become stable chunks.

    Raises:
        RefinementRefused: if any side of the chunk exceeds ``cutoff`` lines.
    """
    (b0, b1), (l0, l1), (r0, r1) = chunk.base_range, chunk.left_range, chunk.right_range
    if max(b1 - b0, l1 - l0, r1 - r0) > cutoff:
        raise RefinementRefused(
            f"chunk sides {b1 - b0}/{l1 - l0}/{r1 - r0} exceed cutoff {cutoff}")
    table: dict[str, int] = {}
    bk = [table.setdefault(x, len(table)) for x in keys(base.lines[b0:b1], ws)]
    lk = [table.setdefault(x, len(table)) for x in keys(left.lines[l0:l1], ws)]
    rk = [table.setdefault(x, len(table)) for x in keys(right.lines[r0:r1], ws)]
    cols = _align3(bk, lk, rk)
    nb = len(bk)

    hunks = sorted(_hunks(cols, _L, "left") + _hunks(cols, _R, "right"),
                   key=lambda h: (h.start, h.end))
    groups: list[list[_Hunk]] = []
    for h in hunks:
        if groups and any(_overlap(h, g) for g in groups[-1]):
            groups[-1].append(h)
        else:
            groups.append([h])
    # Sorting by (start, end) may separate an insertion at p from a later
    # hunk it overlaps only through a chain; merge until stable.
    merged = True
    while merged:
        merged = False
        for idx in range(len(groups) - 1):
            if any(_overlap(a, b) for a in groups[idx] for b in groups[idx + 1]):
                groups[idx:idx + 2] = [groups[idx] + groups[idx + 1]]
                merged = True
                break

    lb, la = _boundaries(cols, _L, nb)
    rb, ra = _boundaries(cols, _R, nb)

    def side_end(group, side, start, s, e, before, after):
        # A side with no hunk ending at ``e`` only carries base lines through
        # the group; its insertions at ``e`` (if any) belong to a later group.
        own = [h for h in group if h.side == side]
        if any(h.end == e for h in own):
            return after[e]
        if own:
            return before[e]
        return start + (e - s)

    out: list[Chunk3] = []
    cur_b = cur_l = cur_r = 0
    for group in groups:
        s = min(h.start for h in group)
        e = max(h.end for h in group)
        # Everything between the previous group and ``s`` is unchanged on
        # both sides, so the cursors advance in lockstep.
        ls, rs = cur_l + (s - cur_b), cur_r + (s - cur_b)
        le = side_end(group, "left", ls, s, e, lb, la)
        re_ = side_end(group, "right", rs, s, e, rb, ra)
        if s > cur_b:
            out.append(Chunk3(STABLE, (b0 + cur_b, b0 + s), (l0 + cur_l, l0 + ls),
                              (r0 + cur_r, r0 + rs)))
        out.append(Chunk3(CHANGED, (b0 + s, b0 + e), (l0 + ls, l0 + le), (r0 + rs, r0 + re_)))
        cur_b, cur_l, cur_r = e, le, re_
    if cur_b < nb or cur_l < l1 - l0 or cur_r < r1 - r0:
        n = nb - cur_b
        out.append(Chunk3(STABLE, (b0 + cur_b, b1), (l0 + cur_l, l0 + cur_l + n),
                          (r0 + cur_r, r0 + cur_r + n)))
    return out

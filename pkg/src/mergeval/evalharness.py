"""Outcome classification, effort-reduction cost model and tool comparisons.

A scenario's correctness oracle here is its expected output rather than a
test suite: a clean merge that reproduces the expected files is *correct*,
any other clean merge is *incorrect*, and a merge with conflicts is
*unhandled*, unless a fixup tool can finish it and the finished result is
still wrong, in which case it is reclassified as incorrect.
"""

from __future__ import annotations

import enum
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence, Union

from .mergecore import MergeResult, has_conflict_markers, render
from .strategies.registry import Fixup, get_fixup, get_tool
from .textmodel import Document, WhitespaceMode, keys

SCHEMA_VERSION = 1
UNTAGGED = "untagged"
COMPARE_MODES = ("exact", "ignore-space")
ORACLE_NOTE = ("correctness oracle: comparison against each scenario's expected output "
               "(stands in for running the project's test suite)")
TIMING_RUNS = 3


def default_k_grid(num: int = 20, lo: float = 0.25, hi: float = 16.0) -> list[float]:
    """``num`` log-spaced cost factors from ``lo`` to ``hi`` inclusive."""
    if num == 1:
        return [lo]
    ratio = hi / lo
    return [lo * ratio ** (i / (num - 1)) for i in range(num)]


class UndefinedMetric(ValueError):
    pass


class InputMismatch(ValueError):
    pass


class Label(str, enum.Enum):
    CORRECT = "correct"
    INCORRECT = "incorrect"
    UNHANDLED = "unhandled"


@dataclass(frozen=True)
class FileTriple:
    path: str
    base: Document
    left: Document
    right: Document


@dataclass(frozen=True)
class MergeScenario:
    id: str
    files: tuple[FileTriple, ...]
    expected: Mapping[str, Document]
    tags: Mapping[str, str] = field(default_factory=dict)
    notes: str = ""

    def __post_init__(self):
        missing = [f.path for f in self.files if f.path not in self.expected]
        if missing:
            raise ValueError(f"scenario {self.id}: no expected output for {', '.join(missing)}")

    def file(self, path: str) -> FileTriple:
        for f in self.files:
            if f.path == path:
                return f
        raise KeyError(path)


@dataclass(frozen=True)
class Outcome:
    label: Label
    reclassified: bool = False
    files: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "label", Label(self.label))
        if self.reclassified and self.label is not Label.INCORRECT:
            raise ValueError("only incorrect outcomes can be reclassified")


@dataclass
class Tally:
    num_merges: int = 0
    num_correct: int = 0
    num_incorrect: int = 0
    num_unhandled: int = 0

    def __post_init__(self):
        if self.num_merges != self.num_correct + self.num_incorrect + self.num_unhandled:
            raise ValueError("tally counts do not add up")

    def add(self, label: Label) -> None:
        label = Label(label)
        self.num_merges += 1
        if label is Label.CORRECT:
            self.num_correct += 1
        elif label is Label.INCORRECT:
            self.num_incorrect += 1
        else:
            self.num_unhandled += 1

    @classmethod
    def of(cls, outcomes: Iterable[Union[Outcome, Label, str]]) -> "Tally":
        t = cls()
        for o in outcomes:
            t.add(o.label if isinstance(o, Outcome) else o)
        return t

    def scaled(self, c: int) -> "Tally":
        return Tally(self.num_merges * c, self.num_correct * c,
                     self.num_incorrect * c, self.num_unhandled * c)


@dataclass(frozen=True)
class CostModel:
    """Cost of an incorrect merge relative to an unhandled one."""

    k: float

    def __post_init__(self):
        if not self.k > 0:
            raise ValueError("cost factor k must be positive")

    def effort_reduction(self, t: Tally):
        return effort_reduction(t, self.k)


# --- comparison of outputs ---------------------------------------------------

def same_output(a: Document, b: Document, compare: str = "exact") -> bool:
    if compare == "exact":
        return a.text == b.text
    if compare == "ignore-space":
        ws = WhitespaceMode.IGNORE_SPACE_CHANGE
        return len(a) == len(b) and keys(a.lines, ws) == keys(b.lines, ws)
    raise ValueError(f"unknown compare mode {compare!r}; expected one of {COMPARE_MODES}")


def is_clean_file(result: MergeResult) -> bool:
    """Clean and free of marker fences, the way a wrapper would check a file."""
    return result.clean and not has_conflict_markers(render(result))


# --- classification --------------------------------------------------------

def classify(scenario: MergeScenario, results: Mapping[str, MergeResult],
             fixup: Union[str, Fixup] = "ivn", compare: str = "exact") -> Outcome:
    """Label one tool's results for ``scenario``.

    Conflicted files are handed to ``fixup``. If that clears every conflict
    and the completed merge still differs from the expected output, some
    clean hunk must have been wrong, so the outcome is incorrect
    (reclassified); otherwise it stays unhandled.
    """
    paths = [f.path for f in scenario.files]
    if set(results) != set(paths):
        raise InputMismatch(f"scenario {scenario.id}: results for {sorted(results)}, files {sorted(paths)}")
    detail = {}
    conflicted = []
    for p in paths:
        r = results[p]
        if not is_clean_file(r):
            detail[p] = "conflict"
            conflicted.append(p)
        elif same_output(r.document(), scenario.expected[p], compare):
            detail[p] = "match"
        else:
            detail[p] = "mismatch"
    if not conflicted:
        label = Label.CORRECT if all(v == "match" for v in detail.values()) else Label.INCORRECT
        return Outcome(label, False, detail)

    fix = get_fixup(fixup) if isinstance(fixup, str) else fixup
    completed_wrong = False
    for p in paths:
        r = results[p]
        if p in conflicted:
            f = scenario.file(p)
            r = fix(r, f.base, f.left, f.right)
            if not is_clean_file(r):
                return Outcome(Label.UNHANDLED, False, detail)
        if not same_output(r.document(), scenario.expected[p], compare):
            completed_wrong = True
    if completed_wrong:
        return Outcome(Label.INCORRECT, True, detail)
    return Outcome(Label.UNHANDLED, False, detail)


# --- cost model -----------------------------------------------------------

def effort_reduction(t: Tally, k):
    """``1 - (unhandled + incorrect * k) / merges``.

    Integer and :class:`~fractions.Fraction` inputs give an exact Fraction.
    """
    if t.num_merges <= 0:
        raise UndefinedMetric("effort reduction is undefined for zero merges")
    if not k > 0:
        raise ValueError("cost factor k must be positive")
    if isinstance(k, (int, Fraction)):
        return 1 - Fraction(t.num_unhandled + t.num_incorrect * k, t.num_merges)
    return 1.0 - (t.num_unhandled + t.num_incorrect * k) / t.num_merges


def er_curve(t: Tally, k_grid: Sequence) -> list[tuple]:
    return [(k, effort_reduction(t, k)) for k in k_grid]


def crossover_k(t1: Tally, t2: Tally) -> Optional[Fraction]:
    """Cost factor at which two tools' effort reductions are equal.

    None when the curves are parallel (equal incorrect rates).
    """
    i1 = Fraction(t1.num_incorrect, t1.num_merges)
    i2 = Fraction(t2.num_incorrect, t2.num_merges)
    if i1 == i2:
        return None
    u1 = Fraction(t1.num_unhandled, t1.num_merges)
    u2 = Fraction(t2.num_unhandled, t2.num_merges)
    return (u2 - u1) / (i1 - i2)


# --- cross-tool comparisons -----------------------------------------------

def pairwise_distinct(results: Mapping[str, Mapping[str, Mapping[str, MergeResult]]],
                      compare: str = "exact") -> tuple[list[str], list[list[int]]]:
    """Count scenarios where both tools merge cleanly yet produce different text.

    ``results`` maps tool -> scenario id -> path -> result.
    """
    tools = list(results)
    scenario_sets = {t: set(results[t]) for t in tools}
    if tools and any(s != scenario_sets[tools[0]] for s in scenario_sets.values()):
        raise InputMismatch("tools were run on different scenario sets")
    scenario_ids = sorted(scenario_sets[tools[0]]) if tools else []

    clean = {t: {s: all(is_clean_file(r) for r in results[t][s].values()) for s in scenario_ids}
             for t in tools}
    matrix = [[0] * len(tools) for _ in tools]
    for a in range(len(tools)):
        for b in range(a + 1, len(tools)):
            ta, tb = tools[a], tools[b]
            count = 0
            for s in scenario_ids:
                if not (clean[ta][s] and clean[tb][s]):
                    continue
                ra, rb = results[ta][s], results[tb][s]
                if set(ra) != set(rb):
                    raise InputMismatch(f"scenario {s}: tools disagree on file paths")
                if any(not same_output(ra[p].document(), rb[p].document(), compare) for p in ra):
                    count += 1
            matrix[a][b] = matrix[b][a] = count
    return tools, matrix


@dataclass(frozen=True)
class RuntimeStats:
    mean: float
    median: float
    max: float


def runtime_stats(samples: Mapping[str, Sequence]) -> dict[str, RuntimeStats]:
    """Per-tool mean/median/max of per-scenario times.

    A scenario entry may be a single time or a sequence of repeated runs, in
    which case its median is used.
    """
    out = {}
    for tool, per_scenario in samples.items():
        times = [statistics.median(s) if isinstance(s, (list, tuple)) else s for s in per_scenario]
        if not times:
            raise UndefinedMetric(f"no runtime samples for {tool}")
        out[tool] = RuntimeStats(statistics.fmean(times), statistics.median(times), max(times))
    return out


def breakdown_by_tag(outcomes: Iterable[tuple[Mapping[str, str], Outcome]],
                     tag_key: str) -> dict[str, Tally]:
    """Tally outcomes per value of ``tag_key``; scenarios without it count as untagged."""
    parts: dict[str, Tally] = {}
    for tags, outcome in outcomes:
        value = tags.get(tag_key, UNTAGGED)
        parts.setdefault(value, Tally()).add(outcome.label)
    return dict(sorted(parts.items()))


# --- whole-corpus evaluation ----------------------------------------------

@dataclass(frozen=True)
class Cell:
    tool: str
    scenario_id: str
    label: Label
    reclassified: bool
    elapsed: Optional[float]
    files: Mapping[str, str]


@dataclass
class Report:
    config: dict
    tools: list[str]
    scenario_ids: list[str]
    cells: list[Cell]
    tallies: dict[str, Tally]
    er_curves: dict[str, list[tuple[float, float]]]
    pairwise: list[list[int]]
    breakdowns: dict[str, dict[str, dict[str, Tally]]]
    runtime: Optional[dict[str, RuntimeStats]] = None
    schema_version: int = SCHEMA_VERSION


@dataclass(frozen=True)
class EvalConfig:
    tools: tuple[str, ...]
    fixup: str = "ivn"
    compare: str = "exact"
    k_grid: tuple[float, ...] = tuple(default_k_grid())
    jobs: int = 1
    timing: bool = False

    def echo(self) -> dict:
        return {
            "tools": {t: {"algorithm": get_tool(t).algorithm, "ws": get_tool(t).ws.value}
                      for t in self.tools},
            "compare": self.compare,
            "fixup": self.fixup,
            "k_grid": [float(k) for k in self.k_grid],
            "timing": self.timing,
            "oracle": ORACLE_NOTE,
        }


def _run_cell(args):
    tool, scenario, fixup, compare, timing = args
    spec = get_tool(tool)
    runs = TIMING_RUNS if timing else 1
    times = []
    for _ in range(runs):
        start = time.perf_counter()
        results = {f.path: spec.merge(f.base, f.left, f.right) for f in scenario.files}
        times.append(time.perf_counter() - start)
    outcome = classify(scenario, results, fixup, compare)
    elapsed = statistics.median(times) if timing else None
    return Cell(tool, scenario.id, outcome.label, outcome.reclassified, elapsed,
                dict(outcome.files)), results


def evaluate(scenarios: Sequence[MergeScenario], config: EvalConfig,
             progress: Optional[Callable[[int, int], None]] = None) -> Report:
    """Run every (tool, scenario) cell and reduce to a :class:`Report`.

    Cells may run in worker processes; the reduction only depends on the
    cell order, so the report is the same for any ``jobs``.
    """
    tools = list(dict.fromkeys(config.tools))
    for t in tools:
        get_tool(t)
    get_fixup(config.fixup)
    ids = [s.id for s in scenarios]
    if len(set(ids)) != len(ids):
        raise InputMismatch("duplicate scenario ids")
    tasks = [(t, s, config.fixup, config.compare, config.timing) for t in tools for s in scenarios]
    if config.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            done = list(pool.map(_run_cell, tasks, chunksize=max(1, len(tasks) // (4 * config.jobs))))
    else:
        done = []
        for n, task in enumerate(tasks, 1):
            done.append(_run_cell(task))
            if progress:
                progress(n, len(tasks))

    cells = [c for c, _ in done]
    results: dict[str, dict[str, dict[str, MergeResult]]] = {t: {} for t in tools}
    for cell, res in done:
        results[cell.tool][cell.scenario_id] = res

    by_tool = {t: [c for c in cells if c.tool == t] for t in tools}
    tallies = {t: Tally.of(c.label for c in by_tool[t]) for t in tools}
    curves = {t: (er_curve(tallies[t], config.k_grid) if tallies[t].num_merges else [])
              for t in tools}
    _, matrix = pairwise_distinct(results, config.compare)

    tags = {s.id: dict(s.tags) for s in scenarios}
    tag_keys = sorted({"source"} | {k for s in scenarios for k in s.tags})
    breakdowns = {
        key: _invert({t: breakdown_by_tag(((tags[c.scenario_id], Outcome(c.label, c.reclassified))
                                           for c in by_tool[t]), key) for t in tools})
        for key in tag_keys
    }
    runtime = None
    if config.timing and scenarios:
        runtime = runtime_stats({t: [c.elapsed for c in by_tool[t]] for t in tools})
    return Report(config=config.echo(), tools=tools, scenario_ids=ids, cells=cells,
                  tallies=tallies, er_curves=curves, pairwise=matrix,
                  breakdowns=breakdowns, runtime=runtime)


def _invert(per_tool: dict[str, dict[str, Tally]]) -> dict[str, dict[str, Tally]]:
    out: dict[str, dict[str, Tally]] = {}
    for tool, parts in per_tool.items():
        for value, tally in parts.items():
            out.setdefault(value, {})[tool] = tally
    return dict(sorted(out.items()))

"""On-disk corpus layout and report serialization.

A corpus directory holds ``manifest.json`` and one directory per scenario
with ``base/``, ``left/``, ``right/`` and ``expected/`` subtrees::

    {"schema_version": 1,
     "scenarios": [{"id": "s1", "tags": {"source": "main"}, "notes": ""}]}

Entry paths default to ``<id>/base`` and so on and may be overridden with
``base``/``left``/``right``/``expected`` keys, relative to the corpus root.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .evalharness import (SCHEMA_VERSION, Cell, FileTriple, Label, MergeScenario, Report,
                          RuntimeStats, Tally)
from .golden import import_golden_suite
from .textmodel import EMPTY, Document, split_lines

MANIFEST_NAME = "manifest.json"
SIDES = ("base", "left", "right", "expected")
SUMMARY_NAME = "summary.jsonl"
CELLS_CSV = "cells.csv"
CURVES_CSV = "er_curves.csv"

__all__ = [
    "CorpusError", "ManifestEntry", "CorpusManifest", "load_manifest", "load_scenario",
    "load_corpus", "write_corpus", "import_golden_suite", "write_report", "read_report",
]


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class ManifestEntry:
    id: str
    base: str
    left: str
    right: str
    expected: str
    tags: Mapping[str, str] = field(default_factory=dict)
    notes: str = ""

    def tree(self, side: str) -> str:
        return getattr(self, side)

    @classmethod
    def from_json(cls, obj: dict) -> "ManifestEntry":
        if not isinstance(obj, dict) or not isinstance(obj.get("id"), str) or not obj["id"]:
            raise CorpusError(f"manifest entry needs a non-empty string id: {obj!r}")
        sid = obj["id"]
        paths = {side: obj.get(side, f"{sid}/{side}") for side in SIDES}
        tags = obj.get("tags", {})
        if not isinstance(tags, dict) or not all(isinstance(v, str) for v in tags.values()):
            raise CorpusError(f"scenario {sid}: tags must map names to strings")
        return cls(sid, tags=dict(tags), notes=str(obj.get("notes", "")), **paths)

    def to_json(self) -> dict:
        out = {"id": self.id}
        for side in SIDES:
            if self.tree(side) != f"{self.id}/{side}":
                out[side] = self.tree(side)
        if self.tags:
            out["tags"] = dict(sorted(self.tags.items()))
        if self.notes:
            out["notes"] = self.notes
        return out


@dataclass(frozen=True)
class CorpusManifest:
    entries: tuple[ManifestEntry, ...]
    schema_version: int = SCHEMA_VERSION

    def validate(self, root: Path) -> None:
        seen = set()
        for e in self.entries:
            if e.id in seen:
                raise CorpusError(f"duplicate scenario id {e.id!r}")
            seen.add(e.id)
            for side in SIDES:
                rel = e.tree(side)
                if Path(rel).is_absolute() or ".." in Path(rel).parts:
                    raise CorpusError(f"scenario {e.id}: {side} path {rel!r} escapes the corpus")
                if not (root / rel).is_dir():
                    raise CorpusError(f"scenario {e.id}: {side} tree {rel!r} does not exist")


def load_manifest(root) -> CorpusManifest:
    root = Path(root)
    path = root / MANIFEST_NAME
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise CorpusError(f"no {MANIFEST_NAME} in {root}") from None
    except json.JSONDecodeError as exc:
        raise CorpusError(f"{path}: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("scenarios"), list):
        raise CorpusError(f"{path}: expected an object with a 'scenarios' list")
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise CorpusError(f"{path}: unsupported schema_version {version}")
    manifest = CorpusManifest(tuple(ManifestEntry.from_json(e) for e in data["scenarios"]))
    manifest.validate(root)
    return manifest


def _walk(tree: Path) -> dict[str, Path]:
    files = {}
    for dirpath, dirnames, filenames in os.walk(tree):
        dirnames.sort()
        for name in filenames:
            full = Path(dirpath) / name
            files[full.relative_to(tree).as_posix()] = full
    return files


def load_scenario(root, entry: ManifestEntry) -> MergeScenario:
    """Build a scenario from the entry's four trees.

    A path missing from base, left or right is an empty document on that
    side; every path must have an expected file.
    """
    root = Path(root)
    trees = {side: _walk(root / entry.tree(side)) for side in SIDES}
    paths = sorted(set(trees["base"]) | set(trees["left"]) | set(trees["right"]))
    for p in paths:
        if p not in trees["expected"]:
            raise CorpusError(f"scenario {entry.id}: no expected output for {p}")

    def read(side, p) -> Document:
        f = trees[side].get(p)
        return split_lines(f.read_bytes()) if f else EMPTY

    files = tuple(FileTriple(p, read("base", p), read("left", p), read("right", p)) for p in paths)
    expected = {p: read("expected", p) for p in sorted(trees["expected"])}
    return MergeScenario(entry.id, files, expected, dict(entry.tags), entry.notes)


def load_corpus(root) -> list[MergeScenario]:
    manifest = load_manifest(root)
    return [load_scenario(root, e) for e in manifest.entries]


def write_corpus(scenarios: Iterable[MergeScenario], root) -> Path:
    """Lay scenarios out on disk; empty sides are written as absent files."""
    root = Path(root)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for s in scenarios:
        for side in SIDES:
            (root / s.id / side).mkdir(parents=True, exist_ok=True)
        for f in s.files:
            for side in ("base", "left", "right"):
                doc = getattr(f, side)
                if len(doc):
                    _write_bytes(root / s.id / side / f.path, doc.to_bytes())
        for p, doc in s.expected.items():
            _write_bytes(root / s.id / "expected" / p, doc.to_bytes())
        entries.append(ManifestEntry(s.id, *(f"{s.id}/{side}" for side in SIDES),
                                     tags=dict(s.tags), notes=s.notes).to_json())
    manifest = {"schema_version": SCHEMA_VERSION, "scenarios": entries}
    (root / MANIFEST_NAME).write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    return root


def _write_bytes(path: Path, data: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


# --- reports ----------------------------------------------------------------

def _tally_json(t: Tally) -> dict:
    return {"num_merges": t.num_merges, "num_correct": t.num_correct,
            "num_incorrect": t.num_incorrect, "num_unhandled": t.num_unhandled}


def _tally(obj: dict) -> Tally:
    return Tally(obj["num_merges"], obj["num_correct"], obj["num_incorrect"], obj["num_unhandled"])


def _records(report: Report) -> list[dict]:
    v = report.schema_version
    recs = [{"record": "header", "schema_version": v, "config": report.config,
             "tools": report.tools, "scenarios": report.scenario_ids,
             "tag_keys": list(report.breakdowns)}]
    for c in report.cells:
        recs.append({"record": "cell", "schema_version": v, "tool": c.tool,
                     "scenario": c.scenario_id, "label": c.label.value,
                     "reclassified": c.reclassified, "elapsed": c.elapsed,
                     "files": dict(sorted(c.files.items()))})
    for t in report.tools:
        recs.append({"record": "tally", "schema_version": v, "tool": t, **_tally_json(report.tallies[t])})
    for t in report.tools:
        recs.append({"record": "er_curve", "schema_version": v, "tool": t,
                     "points": [[float(k), float(er)] for k, er in report.er_curves[t]]})
    recs.append({"record": "pairwise", "schema_version": v, "tools": report.tools,
                 "matrix": report.pairwise})
    for key, parts in report.breakdowns.items():
        for value, per_tool in parts.items():
            for t, tally in per_tool.items():
                recs.append({"record": "breakdown", "schema_version": v, "tag_key": key,
                             "tag_value": value, "tool": t, **_tally_json(tally)})
    if report.runtime is not None:
        for t, st in report.runtime.items():
            recs.append({"record": "runtime", "schema_version": v, "tool": t,
                         "mean": st.mean, "median": st.median, "max": st.max})
    return recs


def write_report(report: Report, out_dir, formats: Sequence[str] = ("jsonl", "csv")) -> list[Path]:
    """Write the summary (JSON lines) and/or flat CSV tables into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "jsonl" in formats:
        path = out / SUMMARY_NAME
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for rec in _records(report):
                fh.write(json.dumps(rec, sort_keys=False, separators=(",", ":")) + "\n")
        written.append(path)
    if "csv" in formats:
        path = out / CELLS_CSV
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["schema_version", "tool", "scenario", "label", "reclassified", "elapsed"])
            for c in report.cells:
                w.writerow([report.schema_version, c.tool, c.scenario_id, c.label.value,
                            int(c.reclassified), "" if c.elapsed is None else repr(c.elapsed)])
        written.append(path)
        path = out / CURVES_CSV
        with open(path, "w", encoding="utf-8", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["schema_version", "tool", "k", "effort_reduction"])
            for t in report.tools:
                for k, er in report.er_curves[t]:
                    w.writerow([report.schema_version, t, repr(float(k)), repr(float(er))])
        written.append(path)
    return written


def read_report(out_dir) -> Report:
    """Rebuild a :class:`Report` from the JSON-lines summary."""
    path = Path(out_dir) / SUMMARY_NAME
    recs = [json.loads(line) for line in path.read_text(encoding="utf-8").splitlines() if line]
    if not recs or recs[0].get("record") != "header":
        raise CorpusError(f"{path}: missing header record")
    head = recs[0]
    if head["schema_version"] != SCHEMA_VERSION:
        raise CorpusError(f"{path}: unsupported schema_version {head['schema_version']}")
    cells, tallies, curves = [], {}, {}
    breakdowns: dict = {key: {} for key in head["tag_keys"]}
    pairwise: list = []
    runtime: Optional[dict] = None
    for r in recs[1:]:
        kind = r["record"]
        if kind == "cell":
            cells.append(Cell(r["tool"], r["scenario"], Label(r["label"]), r["reclassified"],
                              r["elapsed"], r["files"]))
        elif kind == "tally":
            tallies[r["tool"]] = _tally(r)
        elif kind == "er_curve":
            curves[r["tool"]] = [(k, er) for k, er in r["points"]]
        elif kind == "pairwise":
            pairwise = r["matrix"]
        elif kind == "breakdown":
            breakdowns.setdefault(r["tag_key"], {}).setdefault(r["tag_value"], {})[r["tool"]] = _tally(r)
        elif kind == "runtime":
            runtime = runtime or {}
            runtime[r["tool"]] = RuntimeStats(r["mean"], r["median"], r["max"])
        else:
            raise CorpusError(f"{path}: unknown record kind {kind!r}")
    return Report(config=head["config"], tools=head["tools"], scenario_ids=head["scenarios"],
                  cells=cells, tallies=tallies, er_curves=curves, pairwise=pairwise,
                  breakdowns=breakdowns, runtime=runtime, schema_version=head["schema_version"])

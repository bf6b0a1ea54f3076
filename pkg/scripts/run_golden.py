"""Evaluate every registered tool on the built-in golden scenarios.

Prints the per-scenario label grid and writes a report directory.

    python3 scripts/run_golden.py --out results/golden
"""

import argparse

from mergeval.corpus import write_report
from mergeval.evalharness import EvalConfig, evaluate
from mergeval.golden import import_golden_suite
from mergeval.strategies import TOOL_NAMES

SHORT = {"correct": "ok", "incorrect": "BAD", "unhandled": "--"}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results/golden")
    ap.add_argument("--compare", choices=("exact", "ignore-space"), default="exact")
    args = ap.parse_args()

    suite = import_golden_suite()
    report = evaluate(suite, EvalConfig(TOOL_NAMES, compare=args.compare, timing=True))
    labels = {(c.tool, c.scenario_id): c for c in report.cells}

    width = max(len(s.id) for s in suite)
    print(f"{'scenario':<{width}}  " + "  ".join(f"{t[:10]:>10}" for t in report.tools))
    for s in suite:
        row = []
        for t in report.tools:
            c = labels[t, s.id]
            row.append(f"{SHORT[c.label.value] + ('*' if c.reclassified else ''):>10}")
        print(f"{s.id:<{width}}  " + "  ".join(row))
    print("(* = clean output reclassified incorrect after the fixup)")

    for p in write_report(report, args.out):
        print("wrote", p)


if __name__ == "__main__":
    main()

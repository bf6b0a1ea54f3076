"""Effort-reduction curves and pairwise crossover cost factors.

Works on a corpus directory or, by default, on the golden scenarios.

    python3 scripts/er_sweep.py --corpus path/to/corpus --k 0.5 1 2 4 8
"""

import argparse

from mergeval.corpus import load_corpus
from mergeval.evalharness import EvalConfig, crossover_k, effort_reduction, evaluate
from mergeval.golden import import_golden_suite
from mergeval.strategies import TOOL_NAMES


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus")
    ap.add_argument("--tools", nargs="+", default=list(TOOL_NAMES))
    ap.add_argument("--k", nargs="+", type=float, default=[0.5, 1, 2, 4, 8, 16])
    ap.add_argument("--jobs", type=int, default=1)
    args = ap.parse_args()

    scenarios = load_corpus(args.corpus) if args.corpus else import_golden_suite()
    report = evaluate(scenarios, EvalConfig(tuple(args.tools), k_grid=tuple(args.k), jobs=args.jobs))
    width = max(len(t) for t in report.tools)

    print(f"{'tool':<{width}}  " + "  ".join(f"k={k:<6g}" for k in args.k))
    for t in report.tools:
        tally = report.tallies[t]
        print(f"{t:<{width}}  " + "  ".join(f"{float(effort_reduction(tally, k)):+.4f}  "
                                           for k in args.k))

    print("\ncrossover k (the tool with fewer incorrect merges wins above it)")
    for i, a in enumerate(report.tools):
        for b in report.tools[i + 1:]:
            ta, tb = report.tallies[a], report.tallies[b]
            k = crossover_k(ta, tb)
            if k is None:
                print(f"  {a} vs {b}: parallel")
                continue
            safer = a if ta.num_incorrect < tb.num_incorrect else b
            print(f"  {a} vs {b}: {float(k):.4g} ({safer} above)")


if __name__ == "__main__":
    main()

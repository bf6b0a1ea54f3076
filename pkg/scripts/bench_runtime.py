"""Per-tool merge runtimes on synthetic Java-like files of growing size.

Each scenario edits a random base file on both sides: renames, inserted
methods, version bumps and import changes. Reports mean/median/max seconds
per tool (median of three runs per scenario).

    python3 scripts/bench_runtime.py --sizes 50 200 800 --scenarios 20
"""

import argparse
import random

from mergeval.evalharness import EvalConfig, FileTriple, MergeScenario, evaluate
from mergeval.strategies import TOOL_NAMES
from mergeval.textmodel import split_lines


def java_file(rng, n):
    lines = [f"import pkg.C{rng.randrange(30)};" for _ in range(5)]
    lines += ["", "class Demo {"]
    while len(lines) < n:
        name = f"m{len(lines)}"
        lines += [f"    int {name}(int x) {{", f"        return x * {rng.randrange(100)};", "    }", ""]
    lines += ["    String version = \"1.4.2\";", "}"]
    return lines


def mutate(rng, lines, edits):
    out = list(lines)
    for _ in range(edits):
        i = rng.randrange(len(out))
        roll = rng.random()
        if roll < 0.4:
            out[i] = out[i].replace("x", "value")
        elif roll < 0.7:
            out.insert(i, f"    // note {rng.randrange(1000)}")
        elif roll < 0.85 and len(out) > 10:
            del out[i]
        else:
            out[i] = out[i].replace("1.4.2", rng.choice(["1.4.3", "1.5.0"]))
    return out


def scenarios(seed, size, count):
    rng = random.Random(seed)
    out = []
    for i in range(count):
        base = java_file(rng, size)
        left, right = mutate(rng, base, 4), mutate(rng, base, 4)
        docs = [split_lines("\n".join(x) + "\n") for x in (base, left, right)]
        out.append(MergeScenario(f"n{size}-{i}", (FileTriple("Demo.java", *docs),),
                                 {"Demo.java": docs[1]}))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", nargs="+", type=int, default=[50, 200, 800])
    ap.add_argument("--scenarios", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    for size in args.sizes:
        report = evaluate(scenarios(args.seed, size, args.scenarios), EvalConfig(TOOL_NAMES, timing=True))
        print(f"\n{size} lines, {args.scenarios} scenarios")
        print(f"  {'tool':<20} {'mean ms':>9} {'median ms':>10} {'max ms':>9}")
        for t in report.tools:
            s = report.runtime[t]
            print(f"  {t:<20} {s.mean * 1e3:9.3f} {s.median * 1e3:10.3f} {s.max * 1e3:9.3f}")


if __name__ == "__main__":
    main()

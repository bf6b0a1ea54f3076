"""Acceptance criteria, one test each, each printing a single PASS/FAIL line."""

import itertools
import random
import time
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from mergeval.align import diff2
from mergeval.cli import main
from mergeval.evalharness import (EvalConfig, FileTriple, Label, MergeScenario, Outcome, Tally,
                                  breakdown_by_tag, effort_reduction, evaluate, pairwise_distinct)
from mergeval.golden import golden_case
from mergeval.corpus import write_report
from mergeval.mergecore import Conflict, MergeResult, Resolved, merge_lines, parse_conflicts, render
from mergeval.strategies import fix_imports, fix_versions, get_tool, merge_hires
from mergeval.textmodel import Document, Line, explode_chars, implode_chars, split_lines

from oracles import edit_distance, reference_outcomes, result_as_reference, small_documents

PROPERTY_CASES = 1000


@pytest.fixture
def verdict(capsys, request):
    def say(number, ok, detail):
        with capsys.disabled():
            print(f"\n[acceptance] criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail
    return say


def run_property(check, *strategies, cases=PROPERTY_CASES):
    """Run ``check`` on ``cases`` generated examples; returns how many ran."""
    count = [0]

    @settings(max_examples=cases, deadline=None, derandomize=True, database=None,
              suppress_health_check=list(HealthCheck))
    @given(st.tuples(*strategies))
    def prop(args):
        count[0] += 1
        check(*args)

    prop()
    return count[0]


def _merge(tool, case_id, path=None):
    s = golden_case(case_id).scenario()
    f = s.files[0] if path is None else s.file(path)
    return get_tool(tool).merge(f.base, f.left, f.right)


def test_criterion_1_golden_fidelity(verdict):
    start = time.perf_counter()
    failures = []

    def expect(label, result, text):
        if not (result.clean and result.document().text == text):
            failures.append(label)

    call = golden_case("rename-vs-call")
    expect("gitline rename-vs-call", _merge("gitline", call.id), call.documented["gitline"]["main.py"])
    if _merge("gitline", "rename-vs-value").clean:
        failures.append("gitline rename-vs-value should conflict")
    expect("hires 3183-11", _merge("hires", "3183-11"), "Set<Range> ranges = new HashSet<>();\n")
    expect("hires 25267-730", _merge("hires", "25267-730"), "<version>23.7.1</version>\n")
    expect("ivn 25267-730", _merge("ivn", "25267-730"), "<version>23.7.0</version>\n")
    parser = golden_case("1215-3280")
    expect("adjacent 1215-3280", _merge("adjacent", parser.id), parser.files["Sources.java"][3])
    dns = golden_case("5184-31")
    expect("adjacent 5184-31", _merge("adjacent", dns.id), dns.documented["adjacent"]["DNSCache.java"])
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 1.0
    verdict(1, ok, f"byte-exact golden outputs, {elapsed:.3f}s"
                   + (f"; failed: {', '.join(failures)}" if failures else ""))


def test_criterion_2_classification(verdict, tmp_path):
    start = time.perf_counter()
    assert main(["eval", "--golden", "--tools", "all", "--report", str(tmp_path)]) == 0
    elapsed = time.perf_counter() - start
    from mergeval.corpus import read_report
    cells = {(c.tool, c.scenario_id): c for c in read_report(tmp_path).cells}
    checks = {
        "hires incorrect on 25267-730": cells["hires", "25267-730"].label is Label.INCORRECT,
        "ivn correct on 25267-730": cells["ivn", "25267-730"].label is Label.CORRECT,
        "gitline reclassified on constructed scenario": (
            cells["gitline", "wrong-hunk-plus-import-conflict"].label is Label.INCORRECT
            and cells["gitline", "wrong-hunk-plus-import-conflict"].reclassified),
    }
    bad = [k for k, v in checks.items() if not v]
    verdict(2, not bad and elapsed < 1.0,
            f"{len(checks) - len(bad)}/{len(checks)} labels as documented, {elapsed:.3f}s"
            + (f"; failed: {', '.join(bad)}" if bad else ""))


def test_criterion_3_metric_arithmetic(verdict):
    t = Tally(100, 85, 5, 10)
    got = [effort_reduction(t, k) for k in (1, 2, 3)]
    want = [Fraction(85, 100), Fraction(80, 100), Fraction(75, 100)]
    floats = [effort_reduction(t, float(k)) for k in (1, 2, 3)]
    ok = (got == want
          and all(abs(f - float(w)) <= 1e-12 for f, w in zip(floats, want))
          and effort_reduction(Tally(100, 100, 0, 0), 2) == 1
          and effort_reduction(Tally(100, 0, 0, 100), 2) == 0)
    verdict(3, ok, f"ER(k=1,2,3) = {[str(g) for g in got]}; anchors 1 and 0")


def test_criterion_4_oracle_equivalence(verdict):
    start = time.perf_counter()
    docs = list(small_documents(("a\n", "b\n"), 3))
    total = disagreements = 0
    for b, l, r in itertools.product(docs, repeat=3):
        total += 1
        got = result_as_reference(merge_lines(*(split_lines("".join(x)) for x in (b, l, r))))
        if got not in reference_outcomes(b, l, r):
            disagreements += 1
    elapsed = time.perf_counter() - start
    verdict(4, disagreements == 0 and elapsed < 30,
            f"{total} triples, {disagreements} disagreements, {elapsed:.1f}s")


line_pool = ["a\n", "b\n", "a b\n", "  a\n", "c\r\n", "import x.A;\n", "<v>1.2.0</v>\n",
             "<v>1.3.0</v>\n", "A y;\n", "\n"]
documents = st.lists(st.sampled_from(line_pool), max_size=8).map(lambda xs: split_lines("".join(xs)))
texts = st.text(alphabet=st.sampled_from(list("ab \t\r\n\x00é")), max_size=40)
marker_free = st.sampled_from(["a", "b", "", "x y", "=", "<<< short"])
tlines = st.lists(st.builds(Line, marker_free, st.sampled_from(["\n", "\r\n"])), max_size=3).map(tuple)
results = st.lists(st.one_of(st.builds(Resolved, tlines), st.builds(Conflict, tlines, tlines, tlines)),
                   max_size=5).map(MergeResult.build)


def _identities(b, x):
    assert merge_lines(b, b, b).document() == b
    assert merge_lines(b, x, b).document() == x
    assert merge_lines(b, b, x).document() == x
    assert merge_lines(b, x, x).document() == x


def _swap(b, l, r):
    one, two = merge_lines(b, l, r), merge_lines(b, r, l)
    if one.clean:
        assert two.clean and two.document() == one.document()


def _round_trip(r):
    assert parse_conflicts(render(r)) == r


def _explode(text):
    d = split_lines(text)
    assert implode_chars(explode_chars(d)) == d


def _fixups(b, l, r):
    m = merge_lines(b, l, r)
    i1 = fix_imports(m, b, l, r)
    assert fix_imports(i1, b, l, r) == i1 and i1.num_conflicts <= m.num_conflicts
    v1 = fix_versions(m)
    assert fix_versions(v1) == v1 and v1.num_conflicts <= m.num_conflicts


def _hires(b, l, r):
    m = merge_lines(b, l, r)
    if m.clean:
        assert merge_hires(b, l, r) == m


def _random_corpus(seed, n):
    rng = random.Random(seed)
    scenarios = []
    for i in range(n):
        files = []
        expected = {}
        for p in range(rng.randint(1, 2)):
            sides = [split_lines("".join(rng.choices(line_pool, k=rng.randint(0, 6)))) for _ in range(3)]
            files.append(FileTriple(f"f{p}.java", *sides))
            expected[f"f{p}.java"] = rng.choice(sides[1:])
        tags = {"source": rng.choice(["main", "other"])} if rng.random() < 0.8 else {}
        scenarios.append(MergeScenario(f"r{i:04d}", tuple(files), expected, tags))
    return scenarios


def test_criterion_5_property_suites(verdict, tmp_path):
    counts = {
        "merge identities": run_property(_identities, documents, documents),
        "parent-swap symmetry": run_property(_swap, documents, documents, documents),
        "render/parse round trip": run_property(_round_trip, results),
        "explode/implode round trip": run_property(_explode, texts),
        "fixup idempotence and monotonicity": run_property(_fixups, documents, documents, documents),
        "hires clean passthrough": run_property(_hires, documents, documents, documents),
    }
    scenarios = _random_corpus(7, PROPERTY_CASES)
    written = {}
    for jobs in (1, 4):
        report = evaluate(scenarios, EvalConfig(("gitline", "hires", "adjacent", "ivn"), jobs=jobs))
        out = tmp_path / f"jobs{jobs}"
        write_report(report, out)
        written[jobs] = [(out / n).read_bytes() for n in ("summary.jsonl", "cells.csv", "er_curves.csv")]
    assert written[1] == written[4]
    counts["reports identical for --jobs 1 and 4"] = len(scenarios)
    short = {k: v for k, v in counts.items() if v < PROPERTY_CASES}
    verdict(5, not short, "; ".join(f"{k}: {v} cases" for k, v in counts.items()))


def test_criterion_6_diff_minimality(verdict):
    start = time.perf_counter()
    seqs = [s for n in range(7) for s in itertools.product("ab", repeat=n)]
    docs = {s: Document(tuple(Line(x) for x in s)) for s in seqs}
    excess = 0
    for a in seqs:
        for b in seqs:
            script = diff2(docs[a], docs[b])
            if script.apply(docs[a].lines) != list(docs[b].lines) or script.cost != edit_distance(a, b):
                excess += 1
    elapsed = time.perf_counter() - start
    verdict(6, excess == 0 and elapsed < 10,
            f"{len(seqs) ** 2} pairs, {excess} non-minimal scripts, {elapsed:.1f}s")


def test_criterion_7_matrix_and_breakdown_invariants(verdict):
    rng = random.Random(11)
    trials = 300
    for _ in range(trials):
        tools = [f"t{i}" for i in range(rng.randint(1, 5))]
        ids = [f"s{i}" for i in range(rng.randint(0, 8))]
        choices = [MergeResult.from_document(split_lines(x)) for x in ("a\n", "b\n", "a  \n", "")]
        choices.append(MergeResult.build([Conflict((), (Line("x"),), (Line("y"),))]))
        results = {t: {s: {"f": rng.choice(choices)} for s in ids} for t in tools}
        names, m = pairwise_distinct(results)
        n = len(names)
        assert all(m[i][i] == 0 for i in range(n))
        assert all(m[i][j] == m[j][i] for i in range(n) for j in range(n))
        assert all(0 <= m[i][j] <= len(ids) for i in range(n) for j in range(n))

        outcomes = []
        for s in ids:
            label = rng.choice(list(Label))
            tags = rng.choice([{}, {"source": "main"}, {"source": "other"}, {"kind": "x"}])
            outcomes.append((tags, Outcome(label, label is Label.INCORRECT and rng.random() < 0.5)))
        total = Tally.of(o for _, o in outcomes)
        for key in ("source", "kind"):
            parts = breakdown_by_tag(outcomes, key)
            summed = Tally()
            for t in parts.values():
                assert t.num_merges > 0
                summed = Tally(summed.num_merges + t.num_merges, summed.num_correct + t.num_correct,
                               summed.num_incorrect + t.num_incorrect,
                               summed.num_unhandled + t.num_unhandled)
            assert summed == total
    verdict(7, True, f"{trials} random outcome sets: symmetric, zero diagonal, tallies conserved")

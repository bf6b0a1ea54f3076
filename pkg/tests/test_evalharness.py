from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from mergeval.evalharness import (CostModel, EvalConfig, FileTriple, InputMismatch, Label,
                                  MergeScenario, Outcome, Tally, UndefinedMetric, breakdown_by_tag,
                                  classify, crossover_k, default_k_grid, effort_reduction,
                                  er_curve, evaluate, pairwise_distinct, runtime_stats)
from mergeval.golden import golden_case, import_golden_suite
from mergeval.mergecore import MergeResult
from mergeval.strategies import get_tool
from mergeval.textmodel import split_lines

D = split_lines


def one_file(base, left, right, expected, sid="s"):
    return MergeScenario(sid, (FileTriple("f.txt", D(base), D(left), D(right)),), {"f.txt": D(expected)})


def run(tool, scenario):
    return {f.path: get_tool(tool).merge(f.base, f.left, f.right) for f in scenario.files}


# --- classify ----------------------------------------------------------------

def test_clean_and_equal_is_correct():
    s = one_file("a\n", "b\n", "a\n", "b\n")
    assert classify(s, run("gitline", s)) == Outcome(Label.CORRECT, False, {"f.txt": "match"})


def test_clean_but_different_is_incorrect():
    s = one_file("a\n", "b\n", "a\n", "c\n")
    out = classify(s, run("gitline", s))
    assert out.label is Label.INCORRECT and not out.reclassified


def test_unfixable_conflict_is_unhandled():
    s = one_file("a\n", "b\n", "c\n", "b\n")
    assert classify(s, run("gitline", s)).label is Label.UNHANDLED


def test_fixup_completing_a_correct_merge_stays_unhandled():
    s = golden_case("25267-730").scenario()
    assert classify(s, run("gitline", s)).label is Label.UNHANDLED


def test_reclassification():
    s = golden_case("wrong-hunk-plus-import-conflict").scenario()
    out = classify(s, run("gitline", s))
    assert out == Outcome(Label.INCORRECT, True, {"Main.java": "conflict", "Util.java": "mismatch"})
    # With a fixup that does nothing the conflict simply remains.
    assert classify(s, run("gitline", s), fixup="identity").label is Label.UNHANDLED


def test_clean_result_containing_markers_is_never_correct():
    text = "<<<<<<< LEFT\nx\n=======\ny\n>>>>>>> RIGHT\n"
    s = one_file("", text, "", text)
    out = classify(s, {"f.txt": MergeResult.from_document(D(text))})
    assert out.label is Label.UNHANDLED


def test_ignore_space_compare():
    s = one_file("a\n", "b  c\n", "a\n", "b c\n")
    assert classify(s, run("gitline", s)).label is Label.INCORRECT
    assert classify(s, run("gitline", s), compare="ignore-space").label is Label.CORRECT


def test_classify_requires_all_files():
    s = one_file("a\n", "b\n", "a\n", "b\n")
    with pytest.raises(InputMismatch):
        classify(s, {})


def test_scenario_needs_expected_for_each_file():
    with pytest.raises(ValueError):
        MergeScenario("s", (FileTriple("f", D(""), D(""), D("")),), {})


def test_reclassified_only_when_incorrect():
    with pytest.raises(ValueError):
        Outcome(Label.UNHANDLED, True)


# --- effort reduction ------------------------------------------------------------

def test_effort_reduction_anchors():
    assert effort_reduction(Tally(100, 100, 0, 0), 3) == 1
    assert effort_reduction(Tally(100, 0, 0, 100), 3) == 0
    t = Tally(100, 85, 5, 10)
    assert [effort_reduction(t, k) for k in (1, 2, 3)] == [Fraction(85, 100), Fraction(80, 100),
                                                          Fraction(75, 100)]
    assert effort_reduction(t, 1.0) == pytest.approx(0.85, abs=1e-12)
    assert effort_reduction(Tally(1, 0, 1, 0), 5) == -4


def test_effort_reduction_errors():
    with pytest.raises(UndefinedMetric):
        effort_reduction(Tally(), 1)
    with pytest.raises(ValueError):
        effort_reduction(Tally(1, 1, 0, 0), 0)
    with pytest.raises(ValueError):
        CostModel(-1)
    with pytest.raises(ValueError):
        Tally(3, 1, 1, 0)


def test_er_curve_and_crossover():
    assert er_curve(Tally(10, 10, 0, 0), []) == []
    flat = er_curve(Tally(10, 5, 0, 5), [1, 2, 8])
    assert {er for _, er in flat} == {Fraction(1, 2)}
    a, b = Tally(100, 80, 10, 10), Tally(100, 70, 0, 30)
    k = crossover_k(a, b)
    assert k == 2
    assert effort_reduction(a, k) == effort_reduction(b, k)
    assert crossover_k(a, a) is None


def test_default_k_grid():
    grid = default_k_grid()
    assert len(grid) == 20 and grid[0] == 0.25 and grid[-1] == pytest.approx(16)
    ratios = {round(y / x, 12) for x, y in zip(grid, grid[1:])}
    assert len(ratios) == 1


tallies = st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)).filter(
    lambda t: sum(t) > 0).map(lambda t: Tally(sum(t), *t))
ks = st.fractions(min_value=Fraction(1, 8), max_value=20)


@given(tallies, ks, ks)
def test_er_monotone_in_k(t, k1, k2):
    lo, hi = min(k1, k2), max(k1, k2)
    if lo == hi:
        return
    lo_er, hi_er = effort_reduction(t, lo), effort_reduction(t, hi)
    if t.num_incorrect:
        assert hi_er < lo_er
    else:
        assert hi_er == lo_er


@given(tallies, tallies, ks, st.integers(1, 7))
def test_ranking_invariant_under_scaling(t1, t2, k, c):
    before = effort_reduction(t1, k) >= effort_reduction(t2, k)
    after = effort_reduction(t1.scaled(c), k) >= effort_reduction(t2.scaled(c), k)
    assert before == after


# --- comparisons ----------------------------------------------------------------

def test_pairwise_distinct_on_golden():
    scenarios = import_golden_suite()
    res = {t: {s.id: run(t, s) for s in scenarios} for t in ("gitline", "hires", "ivn")}
    tools, m = pairwise_distinct(res)
    assert tools == ["gitline", "hires", "ivn"]
    assert m[0][1] == 0 and m[0][2] == 0
    # hires and ivn are both clean on 25267-730 with different versions.
    assert m[1][2] == 1


def test_pairwise_mismatched_inputs():
    s = one_file("a\n", "a\n", "a\n", "a\n")
    with pytest.raises(InputMismatch):
        pairwise_distinct({"x": {"s": run("gitline", s)}, "y": {}})


def test_runtime_stats():
    st_ = runtime_stats({"t": [1.0, 2.0, 9.0], "one": [0.5], "rep": [[5.0, 1.0, 9.0]]})
    assert (st_["t"].mean, st_["t"].median, st_["t"].max) == (4.0, 2.0, 9.0)
    assert st_["one"].mean == st_["one"].median == st_["one"].max == 0.5
    assert st_["rep"].median == 5.0
    with pytest.raises(UndefinedMetric):
        runtime_stats({"t": []})


def test_breakdown_by_tag():
    outs = [({"source": "main"}, Outcome(Label.CORRECT))] * 3 + [({"source": "other"}, Outcome(Label.UNHANDLED))] * 2
    parts = breakdown_by_tag(outs, "source")
    assert parts == {"main": Tally(3, 3, 0, 0), "other": Tally(2, 0, 0, 2)}
    assert breakdown_by_tag([({}, Outcome(Label.CORRECT))], "source") == {"untagged": Tally(1, 1, 0, 0)}


# --- whole evaluation ------------------------------------------------------------

def test_evaluate_golden_labels():
    report = evaluate(import_golden_suite(), EvalConfig(("gitline", "hires", "ivn")))
    labels = {(c.tool, c.scenario_id): (c.label, c.reclassified) for c in report.cells}
    assert labels["hires", "3183-11"] == (Label.CORRECT, False)
    assert labels["hires", "25267-730"] == (Label.INCORRECT, False)
    assert labels["ivn", "25267-730"] == (Label.CORRECT, False)
    assert labels["gitline", "rename-vs-call"] == (Label.INCORRECT, False)
    assert labels["gitline", "wrong-hunk-plus-import-conflict"] == (Label.INCORRECT, True)
    for t in report.tools:
        assert report.tallies[t].num_merges == len(report.scenario_ids)
    assert report.runtime is None
    assert "expected output" in report.config["oracle"]


def test_evaluate_duplicate_tools_and_timing():
    report = evaluate(import_golden_suite()[:2], EvalConfig(("gitline", "gitline"), timing=True))
    assert report.tools == ["gitline"]
    assert report.pairwise == [[0]]
    assert report.runtime["gitline"].max >= report.runtime["gitline"].median >= 0

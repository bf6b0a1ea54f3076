import pytest
from hypothesis import given
from hypothesis import strategies as st

from mergeval.mergecore import (MARKER_LEN_ENV, Conflict, ConflictStyle, MalformedConflict,
                                MarkerInContent, MergeResult, Resolved, has_conflict_markers,
                                merge_lines, parse_conflicts, render)
from mergeval.textmodel import CRLF, NONE, Document, Line, WhitespaceMode, split_lines

from oracles import reference_outcomes, result_as_reference

alphabet = ["a\n", "b\n", "c\n", "a b\n", "  a\n"]
docs = st.lists(st.sampled_from(alphabet), max_size=8).map(lambda xs: split_lines("".join(xs)))


def D(text):
    return split_lines(text)


@given(docs, docs, docs)
def test_merge_lines_matches_reference_diff3(b, l, r):
    got = result_as_reference(merge_lines(b, l, r))
    outs = reference_outcomes([x.text for x in b], [x.text for x in l], [x.text for x in r])
    assert got in outs


@given(docs, docs)
def test_merge_identities(b, x):
    assert merge_lines(b, b, b).document() == b
    assert merge_lines(b, x, b).document() == x
    assert merge_lines(b, b, x).document() == x
    assert merge_lines(b, x, x).document() == x


@given(docs, docs, docs)
def test_parent_swap_symmetry(b, l, r):
    x, y = merge_lines(b, l, r), merge_lines(b, r, l)
    assert x.num_conflicts == y.num_conflicts
    if x.clean:
        assert y.document() == x.document()


def test_rename_vs_value_conflicts_and_rename_vs_call_merges():
    value = merge_lines(D("def main():\n    n = 128\n    print(n)\n"),
                       D("def main():\n    n_people = 128\n    print(n_people)\n"),
                       D("def main():\n    n = 64\n    print(n)\n"))
    assert value.num_conflicts == 1
    assert value.segments[0] == Resolved((Line("def main():"),))
    call = merge_lines(D("def mult(a,b):\n    return a*b\ndef main():\n    a = 3*5\n    print(a)\n"),
                       D("def multiply(a,b):\n    return a*b\ndef main():\n    a = 3*5\n    print(a)\n"),
                       D("def mult(a,b):\n    return a*b\ndef main():\n    a = mult(3,5)\n    print(a)\n"))
    assert call.document().text == (
        "def multiply(a,b):\n    return a*b\ndef main():\n    a = mult(3,5)\n    print(a)\n")


def test_ignore_space_emits_left_bytes():
    r = merge_lines(D("x\n *  \ny\n"), D("x\n * </p>\ny\n"), D("x\n *\ny\n"),
                    WhitespaceMode.IGNORE_SPACE_CHANGE)
    assert r.document().text == "x\n * </p>\ny\n"
    assert not merge_lines(D(" * \n"), D(" * </p>\n"), D(" *\n")).clean


def test_empty_inputs():
    empty = Document()
    assert merge_lines(empty, empty, empty).document() == empty
    r = merge_lines(empty, D("a\n"), D("b\n"))
    assert r.conflicts == [Conflict((), (Line("a"),), (Line("b"),))]


def test_unterminated_last_lines_never_run_together():
    r = merge_lines(D("a\n"), D("a\nb"), D("a\n"))
    assert r.document().text == "a\nb"
    spliced = MergeResult.build([Resolved((Line("x", NONE),)), Resolved((Line("y"),))])
    assert spliced.document().text == "x\ny\n"


# --- rendering ---------------------------------------------------------------

def _sample_conflict():
    return MergeResult.build([Resolved((Line("top"),)),
                              Conflict((Line("b"),), (Line("l1"), Line("same")), (Line("r1"), Line("same"))),
                              Resolved((Line("end"),))])


def test_render_diff3():
    text = render(_sample_conflict())
    assert text == ("top\n<<<<<<< LEFT\nl1\nsame\n||||||| BASE\nb\n=======\nr1\nsame\n"
                    ">>>>>>> RIGHT\nend\n")


def test_render_merge_style_and_labels():
    style = ConflictStyle("merge", labels=("ours", "base", "theirs"))
    text = render(_sample_conflict(), style)
    assert "|||||||" not in text
    assert text.startswith("top\n<<<<<<< ours\n")
    assert ">>>>>>> theirs\n" in text


def test_render_zdiff3_hoists_common_suffix_and_trims_base():
    text = render(_sample_conflict(), ConflictStyle("zdiff3"))
    assert text == ("top\n<<<<<<< LEFT\nl1\n||||||| BASE\n=======\nr1\n>>>>>>> RIGHT\n"
                    "same\nend\n")


def test_render_uses_document_line_endings():
    r = MergeResult.build([Conflict((), (Line("a", CRLF),), (Line("b", CRLF),))])
    assert render(r) == "<<<<<<< LEFT\r\na\r\n||||||| BASE\r\n=======\r\nb\r\n>>>>>>> RIGHT\r\n"


def test_render_strict_rejects_marker_lookalikes():
    r = MergeResult.build([Conflict((), (Line("======="),), (Line("x"),))])
    with pytest.raises(MarkerInContent):
        render(r, strict=True)


def test_marker_length_from_environment(monkeypatch):
    monkeypatch.setenv(MARKER_LEN_ENV, "9")
    style = ConflictStyle()
    assert style.marker_len == 9
    r = MergeResult.build([Conflict((), (Line("a"),), (Line("b"),))])
    text = render(r, style)
    assert text.startswith("<" * 9 + " LEFT\n")
    assert has_conflict_markers(text)
    assert not has_conflict_markers("<<<<<<< x\n")


def test_bad_style_rejected():
    with pytest.raises(ValueError):
        ConflictStyle("fancy")
    with pytest.raises(ValueError):
        ConflictStyle(marker_len=3)


# --- parsing -------------------------------------------------------------

plain = st.sampled_from(["a", "b", "", "x y", "=", "<<< short"])
tlines = st.lists(st.builds(Line, plain, st.sampled_from(["\n", "\r\n"])), max_size=3).map(tuple)
segments = st.lists(st.one_of(st.builds(Resolved, tlines),
                              st.builds(Conflict, tlines, tlines, tlines)), max_size=5)
results = segments.map(MergeResult.build)


@given(results)
def test_render_parse_round_trip_diff3(r):
    assert parse_conflicts(render(r)) == r


@given(results, st.sampled_from(["merge", "zdiff3"]))
def test_render_parse_preserves_both_sides(r, style):
    back = parse_conflicts(render(r, ConflictStyle(style)))
    assert back.side("left") == r.side("left")
    assert back.side("right") == r.side("right")
    assert back.num_conflicts <= r.num_conflicts


def test_parse_merge_style_gives_empty_base():
    r = parse_conflicts("<<<<<<< L\na\n=======\nb\n>>>>>>> R\n")
    assert r.conflicts == [Conflict((), (Line("a"),), (Line("b"),))]


def test_parse_separator_outside_fence_is_text():
    assert parse_conflicts("=======\n").clean


@pytest.mark.parametrize("text,line", [
    ("a\n<<<<<<< L\nx\n", 2),
    ("<<<<<<< L\n<<<<<<< L\n", 2),
    ("a\n>>>>>>> R\n", 2),
    ("||||||| B\n", 1),
    ("<<<<<<< L\nx\n>>>>>>> R\n", 3),
    ("<<<<<<< L\n||||||| B\n||||||| B\n", 3),
    ("<<<<<<< L\n=======\n=======\n", 3),
])
def test_parse_malformed(text, line):
    with pytest.raises(MalformedConflict) as info:
        parse_conflicts(text)
    assert info.value.line_no == line

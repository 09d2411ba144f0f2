import pytest
from hypothesis import given, settings

from casekb.amr import (PenmanError, arguments_of, is_negated, isomorphic, parse_penman, predicate_nodes,
                        read_amr_file, serialize_penman, split_blocks)

from strategies import amr_graphs, triple_set

BREAK_AND_STEAL = """(a / and
    :op1 (b / break-01
        :ARG0 (s / suspect)
        :ARG1 (w / window
            :mod (r / rear)
            :part-of (v / vehicle)))
    :op2 (s2 / steal-01
        :ARG0 s
        :ARG1 (w2 / wallet)))"""


def test_parse_break_and_steal_shape():
    g = parse_penman(BREAK_AND_STEAL)
    assert g.root == "a"
    assert [n.concept for n in predicate_nodes(g)] == ["break-01", "steal-01"]
    # the suspect is shared by both predicates
    assert arguments_of(g, "b")[":ARG0"] == "s" == arguments_of(g, "s2")[":ARG0"]
    assert len(g.nodes) == 8


def test_inverse_role_normalizes():
    g = parse_penman("(w / window :ARG1-of (b / break-01 :ARG0 (p / person)))")
    norm = {(e.source, e.label, e.target) for e in g.normalized_edges()}
    assert ("b", ":ARG1", "w") in norm
    assert arguments_of(g, "b")[":ARG1"] == "w"


def test_consist_of_is_not_inverse():
    g = parse_penman("(g / group :consist-of (p / person))")
    assert g.edges[0].normalized() == g.edges[0]


def test_polarity_marks_negation():
    assert is_negated(parse_penman("(t / take-01 :polarity - :ARG1 (w / wallet))"), "t")
    assert not is_negated(parse_penman("(t / take-01 :ARG1 (w / wallet))"), "t")


def test_comments_and_alignments_ignored():
    g = parse_penman("# ::snt He ran.\n(r / run-02~e.1 :ARG0 (h / he~e.0))")
    assert g.node("r").concept == "run-02"
    assert g.alignments["r"] == "~e.1"


@pytest.mark.parametrize("bad", [
    "", "(a / b", "(a / b))", "(a / b :ARG0 (a / c))", "a / b", "(a b)", "(a / b :ARG0)",
])
def test_malformed_raises(bad):
    with pytest.raises(PenmanError):
        parse_penman(bad)


def test_split_blocks_and_file(tmp_path):
    text = "# header only\n\n(a / run-01)\n\n# ::snt two\n(b / walk-01\n  :ARG0 (c / cat))\n"
    assert len(split_blocks(text)) == 2
    f = tmp_path / "x.amr.txt"
    f.write_text(text)
    graphs = read_amr_file(f)
    assert [g.sentence_index for g in graphs] == [0, 1]


def test_serialize_break_and_steal_roundtrip_exact():
    g = parse_penman(BREAK_AND_STEAL)
    assert serialize_penman(g) == BREAK_AND_STEAL


@settings(max_examples=300, deadline=None)
@given(amr_graphs())
def test_roundtrip_is_isomorphic(g):
    for indent in (4, None):
        back = parse_penman(serialize_penman(g, indent))
        assert isomorphic(g, back)
        assert triple_set(back) == triple_set(g)


@settings(max_examples=100, deadline=None)
@given(amr_graphs())
def test_serialization_is_fixed_point(g):
    once = serialize_penman(g)
    assert serialize_penman(parse_penman(once)) == once

import pytest

from casekb.amr import parse_penman
from casekb.extraction import extract_events, mark_sentence_heads
from casekb.temporal import (PrecedenceEdge, axiom_edges, build_case_graph, build_graph, export_dot, find_cue,
                             load_cues)


def case_events(components, penmans, pseudonyms=None):
    c = components
    events = []
    for i, p in enumerate(penmans):
        events += extract_events(parse_penman(p, i), pseudonyms or {}, c.lexicon, c.rules, c.score, "T")
    return events


def graph(components, sentences, penmans, pseudonyms=None):
    events = case_events(components, penmans, pseudonyms)
    return events, build_case_graph(events, sentences, "T", components.cues, list(components.axioms),
                                    components.schema)


def pairs(g, support=None):
    return {(e.source, e.target) for e in g.edges if support is None or e.support == support}


def test_before_within_sentence(components):
    events, g = graph(components, ["The suspect broke the window before entering the home."], [
        "(b / break-01 :ARG0 (s / suspect) :ARG1 (w / window) "
        ":time (b2 / before :op1 (e / enter-01 :ARG0 s :ARG1 (h / home))))"])
    assert ("e0_b", "e0_e") in pairs(g, "cue")


def test_then_across_sentences(components):
    events, g = graph(components, ["Suspect (S) entered the home.", "Then Victim (V) discovered the damage."], [
        '(e / enter-01 :ARG0 (p / person :name (n / name :op1 "S")) :ARG1 (h / home))',
        '(d / discover-01 :ARG0 (p / person :name (n / name :op1 "V")) :ARG1 (d2 / damage))'],
        {"S": "Suspect_Unknown", "V": "Victim_1"})
    assert pairs(g) == {("e0_e", "e1_d")}
    assert g.edges[0].support == "cue" and g.edges[0].cue == "then"


AXIOM_CASES = {
    "forced_entry_before_theft": (["S kicked the door.", "S took a wallet."], [
        "(k / kick-01 :ARG0 (s / suspect) :ARG1 (d / door))", "(t / take-01 :ARG0 (s / suspect) :ARG1 (w / wallet))"],
        ("e0_k", "e1_t")),
    "call_before_report_taken": (["V called police.", "V reported a theft."], [
        "(c / call-02 :ARG0 (v / victim) :ARG1 (p / police))", "(r / report-01 :ARG0 (v / victim) :ARG1 (t / theft))"],
        ("e0_c", "e1_r")),
    "return_before_discovery": (["V returned home.", "V discovered damage."], [
        "(r / return-01 :ARG1 (v / victim) :ARG4 (h / home))", "(d / discover-01 :ARG0 (v / victim) :ARG1 (d2 / damage))"],
        ("e0_r", "e1_d")),
    "arrest_before_booking": (["Officers arrested S.", "S was booked."], [
        "(a / arrest-01 :ARG0 (o / officer) :ARG1 (s / suspect))", "(b / book-01 :ARG1 (s / suspect))"],
        ("e0_a", "e1_b")),
}


@pytest.mark.parametrize("axiom", sorted(AXIOM_CASES))
def test_axiom_pairs(components, axiom):
    sentences, penmans, edge = AXIOM_CASES[axiom]
    _, g = graph(components, sentences, penmans)
    (e,) = g.edges
    assert (e.source, e.target) == edge
    assert e.support == "axiom" and e.axiom == axiom


@pytest.mark.parametrize("axiom", sorted(AXIOM_CASES))
def test_axiom_pairs_reversed_order_still_forward(components, axiom):
    sentences, penmans, (src, tgt) = AXIOM_CASES[axiom]
    events = case_events(components, list(reversed(penmans)))
    edges = axiom_edges(events, list(components.axioms), components.schema)
    classes = {e.event_id: e.event_class for e in events}
    want = next(a for a in components.axioms if a.axiom_id == axiom)
    assert [(classes[e.source], classes[e.target]) for e in edges] == [(want.source_class, want.target_class)]


def test_call_axiom_is_local(components):
    sentences, penmans, _ = AXIOM_CASES["call_before_report_taken"]
    filler = "(w / wait-01 :ARG1 (v / victim))"
    _, g = graph(components, [sentences[0], "V waited.", "V waited.", sentences[1]],
                 [penmans[0], filler, filler, penmans[1]])
    assert not g.edges


def test_cue_beats_opposing_axiom(components):
    _, g = graph(components, ["S stole a bicycle.", "Then S smashed the window of the garage."], [
        "(s / steal-01 :ARG0 (p / suspect) :ARG1 (b / bicycle))",
        "(s2 / smash-01 :ARG0 (p / suspect) :ARG1 (w / window :part-of (g / garage)))"])
    assert pairs(g) == {("e0_s", "e1_s2")}
    assert g.edges[0].support == "cue"
    (conflict,) = g.conflicts
    assert conflict["kept"]["source"] == "e0_s"
    assert conflict["dropped"]["axiom"] == "forced_entry_before_theft"


def test_cue_and_axiom_agree(components):
    _, g = graph(components, ["S kicked the door.", "Then S took a wallet."], AXIOM_CASES["forced_entry_before_theft"][1])
    (e,) = g.edges
    assert e.support == "cue+axiom"


def test_negated_events_excluded(components):
    _, g = graph(components, ["S kicked the door.", "S did not take anything."], [
        "(k / kick-01 :ARG0 (s / suspect) :ARG1 (d / door))",
        "(t / take-01 :polarity - :ARG0 (s / suspect) :ARG1 (a / anything))"])
    assert not g.edges
    assert "e1_t" not in g.nodes


def test_dot_styles(components):
    _, g = graph(components, ["S kicked the door.", "Then S took a wallet.", "V called police.", "V reported it."], [
        *AXIOM_CASES["forced_entry_before_theft"][1], *AXIOM_CASES["call_before_report_taken"][1]])
    dot = export_dot(g)
    for e in g.edges:
        line = next(ln for ln in dot.splitlines() if f'"{e.source}" -> "{e.target}"' in ln)
        assert ("style=dashed" in line) == (e.support == "axiom")
        assert ("style=solid" in line) == (e.support != "axiom")
    assert dot.startswith('digraph "T" {') and dot.endswith("}\n")


def test_cycles_reported():
    a = PrecedenceEdge("x", "y", "cue")
    b = PrecedenceEdge("y", "x", "axiom")
    g = build_graph([a], [], case_id="C")
    g2 = build_graph([a, PrecedenceEdge("y", "z", "cue"), PrecedenceEdge("z", "x", "cue")], [b], case_id="C")
    assert g.cycles == []
    assert g2.cycles == [["x", "y", "z"]]


def test_find_cue_positions():
    cues = load_cues()
    assert find_cue("Then he left.", cues) == "then"
    assert find_cue("He then left.", cues) == "then"
    assert find_cue("After that he left.", cues) == "after"
    assert find_cue("He left after lunch.", cues) is None
    assert find_cue("Upon returning, V saw it.", cues) == "upon returning"


def test_sentence_heads(components):
    events = case_events(components, [AXIOM_CASES["forced_entry_before_theft"][1][0]])
    mark_sentence_heads(events)
    assert sum(e.sentence_head for e in events) == 1

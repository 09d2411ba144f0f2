import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casekb.ontology import Assertion, CaseKB, class_assertion, data_assertion, object_assertion
from casekb.pipeline import load_case_outputs
from casekb.turtle import TurtleError, export_turtle, import_turtle

from seeding import clean_kb


def _same(a: CaseKB, b: CaseKB) -> bool:
    return sorted(x.key() for x in a) == sorted(x.key() for x in b) and a.case_id == b.case_id


def test_roundtrip_clean_kb(components):
    kb = clean_kb(components)
    text = export_turtle(kb)
    assert _same(import_turtle(text), kb)
    assert export_turtle(import_turtle(text)) == text


def test_one_triple_per_line_with_provenance(components):
    body = [ln for ln in export_turtle(clean_kb(components)).splitlines() if ln and not ln.startswith("@")]
    assert all(ln.count(" .  # ") == 1 for ln in body)
    assert any("# metadata m:offense" in ln for ln in body)


def test_corpus_roundtrip(corpus_run):
    out, _ = corpus_run
    for r in load_case_outputs(out):
        kb = CaseKB.from_dict(r["kb"])
        ttl = (out / r["case_id"] / f"{r['case_id']}.ttl").read_text()
        assert _same(import_turtle(ttl), kb)


def test_garbage_rejected():
    with pytest.raises(TurtleError):
        import_turtle("@prefix kb: <urn:casekb:case:X#> .\nthis is not turtle\n")


names = st.text(st.characters(min_codepoint=33, max_codepoint=0x2FF), min_size=1, max_size=12)
values = st.text(st.characters(min_codepoint=1, max_codepoint=0x2FF), max_size=20)


@st.composite
def kbs(draw):
    kb = CaseKB(draw(names))
    for _ in range(draw(st.integers(0, 12))):
        s, o = draw(names), draw(names)
        ev = draw(st.one_of(st.none(), st.integers(0, 50), st.sampled_from(["offense", "case_number"])))
        kind = draw(st.sampled_from(["class", "object", "data", "diff"]))
        prov = draw(st.sampled_from(["narrative", "metadata"]))
        if kind == "class":
            a = class_assertion(draw(st.sampled_from(["TheftEvent", "Person", "Item"])), s, ev, prov)
        elif kind == "object":
            a = object_assertion(draw(st.sampled_from(["hasAgent", "inEvent"])), s, o, ev, prov)
        elif kind == "data":
            a = data_assertion("predicateSense", s, draw(values), draw(st.sampled_from(["string", "decimal"])), ev, prov)
        else:
            a = Assertion("DifferentFrom", s, "", o, prov, ev)
        kb.add([a])
    return kb


@settings(max_examples=200, deadline=None)
@given(kbs())
def test_roundtrip_property(kb):
    assert _same(import_turtle(export_turtle(kb)), kb)

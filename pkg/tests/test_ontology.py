import pytest

from casekb.ontology import (CaseKB, Schema, SchemaError, default_schema, map_metadata, ontology_indicators,
                             resolve_inconsistencies, validate)

from seeding import SEEDS, clean_kb


def test_clean_kb_is_consistent(components):
    kb = clean_kb(components)
    assert validate(kb).consistent
    victim = [a for a in kb if a.predicate == "hasVictim"]
    assert [(a.subject, a.object) for a in victim] == [("e1_g", "Victim_1")]


@pytest.mark.parametrize("family", sorted(SEEDS))
def test_seeded_defect_reported_exactly(components, family):
    kb = SEEDS[family](clean_kb(components))
    report = validate(kb)
    assert report.ids() == [family]
    resolved, log = resolve_inconsistencies(kb, report)
    assert validate(resolved).consistent
    assert log and log[0]["constraint_id"] == family
    assert validate(kb).ids() == [family]  # input untouched


def test_theft_without_item_is_demoted(components):
    kb = SEEDS["theft_has_stolen_item"](clean_kb(components))
    resolved, log = resolve_inconsistencies(kb)
    assert log[0]["action"] == "demote"
    classes = {a.object for a in resolved if a.subject == "e0_s2" and a.kind == "ClassAssertion"}
    assert classes == {"CrimeEvent"}


def test_metadata_assertions_never_quarantined(components):
    kb = clean_kb(components)
    resolved, _ = resolve_inconsistencies(SEEDS["event_in_case"](kb))
    assert {a.id for a in kb if a.provenance == "metadata"} <= set(resolved.assertions)


def test_add_is_idempotent(components):
    kb = clean_kb(components)
    n = len(kb)
    kb.add(list(kb))
    assert len(kb) == n


def test_kb_dict_roundtrip(components):
    kb = clean_kb(components)
    assert CaseKB.from_dict(kb.to_dict()).to_dict() == kb.to_dict()


def test_metadata_mapping_skips_unknown_and_empty():
    facts = map_metadata({"case_id": "X", "offense": "Robbery", "statute": "", "weather": "rain"})
    assert {(a.predicate, a.object) for a in facts} == {("", "Case"), ("offenseTitle", "Robbery")}


def test_schema_is_a_tree():
    schema = default_schema()
    assert schema.is_subclass("ForcedEntryEvent", "CrimeEvent")
    assert not schema.is_subclass("ForcedEntryEvent", "EntryEvent")
    with pytest.raises(SchemaError):
        Schema.from_dict({"version": "x", "classes": {"A": "B", "B": "A"}})
    with pytest.raises(SchemaError):
        Schema.from_dict({"classes": {"Thing": None, "A": "B", "B": "A"}, "object_properties": {},
                          "data_properties": {}})


def test_indicators_brute_force(components):
    kb = clean_kb(components)
    ind = ontology_indicators(kb)
    kinds = [a.kind for a in kb]
    assert ind["class_assertions"] == kinds.count("ClassAssertion")
    assert ind["object_property_assertions"] == kinds.count("ObjectPropertyAssertion")
    assert ind["data_property_assertions"] == kinds.count("DataPropertyAssertion")
    assert ind["abox_assertions"] == len(kb)
    assert ind["individuals"] == len(kb.individuals())
    assert ind["assertions_per_individual"] == pytest.approx(len(kb) / len(kb.individuals()))
    assert ind["logical_share"] + ind["declaration_share"] + ind["annotation_share"] == pytest.approx(1.0)

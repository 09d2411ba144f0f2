import pytest

from casekb.lexicon import Lexicon, UnknownPredicate, split_sense_label


def test_split_sense_label():
    assert split_sense_label("turn-over-12") == ("turn over", "turn_over.12")
    assert split_sense_label("steal-01") == ("steal", "steal.01")
    with pytest.raises(ValueError):
        split_sense_label("window")


def test_full_path(components):
    path = components.lexicon.ground_predicate("steal-01")
    assert path.path_kind == "full"
    assert path.sense.sense_id == "steal.01"
    assert "steal-10.5" in path.verbnet_classes
    assert "steal.v.01" in path.wordnet_synsets


def test_lemma_fallback_when_sense_unmapped(components):
    assert components.lexicon.ground_predicate("turn-over-12").path_kind == "lemma_fallback"


def test_unknown_predicate(components):
    with pytest.raises(UnknownPredicate):
        components.lexicon.ground_predicate("florbnicate-01")


@pytest.mark.parametrize("word,target", [
    ("sedan", "vehicle"), ("car", "vehicle"), ("wallet", "property_item"), ("window", "structure_part"),
    ("door", "structure_part"),
])
def test_is_a(components, word, target):
    assert components.lexicon.is_a(word, target)


def test_is_a_negative(components):
    assert not components.lexicon.is_a("wallet", "vehicle")
    assert not components.lexicon.is_a("florb", "vehicle")


def test_hypernym_closure_contains_chain(components):
    lex = components.lexicon
    closure = lex.hypernym_closure("sedan.n.01")
    assert {"sedan.n.01", "car.n.01", "motor_vehicle.n.01", "vehicle.n.01", "entity.n.01"} <= closure


def test_argument_types(components):
    lex = components.lexicon
    assert lex.type_argument("window") == {"structure_part"}
    assert "property_item" in lex.type_argument("wallet")
    assert lex.type_argument("florb") == frozenset()


def test_snapshot_is_stable():
    a, b = Lexicon.from_snapshot(), Lexicon.from_snapshot()
    assert a.fingerprint() == b.fingerprint()

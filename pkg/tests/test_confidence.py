import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casekb.amr import parse_penman
from casekb.confidence import (ConfigError, ScoreConfig, ScoringInput, ambiguity_penalty, default_score_config,
                               high_conf_fraction, score_event)
from casekb.extraction import extract_events
from casekb.fixtures import DECOMPOSITIONS, decomposed_confidence

CFG_FILE = Path(__file__).parents[1] / "src" / "casekb" / "data" / "score_config.json"
RAW = json.loads(CFG_FILE.read_text())


def oracle(e: ScoringInput) -> Fraction:
    """Exact-rational re-derivation of the score straight from the JSON constants."""
    F = lambda x: Fraction(str(x))  # noqa: E731
    c = F(RAW["bucket_base"][e.bucket])
    if e.path_kind == "full":
        c += F(RAW["full_path_bonus"])
    elif e.path_kind == "lemma_fallback":
        c += F(RAW["lemma_fallback_bonus"])
    c += F(RAW["anchor_bonus"]) * e.anchor_matched + F(RAW["object_bonus"]) * e.object_evidence
    if e.negated:
        c -= F(RAW["negation_penalty_core"] if e.bucket == "incident_core" else RAW["negation_penalty_other"])
    if e.hedged:
        c -= F(RAW["hedge_penalty"])
    amb = RAW["ambiguity"]
    c -= min(F(amb["max"]), F(amb["per_synset"]) * max(0, e.n_synsets - 1)
             + F(amb["per_verbnet_class"]) * max(0, e.n_verbnet - 1))
    if e.rule_has_object_tag:
        c = min(c, F(RAW["object_cap"]))
    c = min(max(c, Fraction(0)), Fraction(1))
    if e.prior is not None:
        a = F(RAW["alpha"])
        c = a * F(e.prior) + (1 - a) * c
    return min(max(c + F(e.specificity_bonus), Fraction(0)), Fraction(1))


inputs = st.builds(
    ScoringInput,
    bucket=st.sampled_from(sorted(RAW["bucket_base"])),
    path_kind=st.sampled_from(["full", "lemma_fallback", None]),
    anchor_matched=st.booleans(),
    object_evidence=st.booleans(),
    negated=st.booleans(),
    hedged=st.booleans(),
    n_synsets=st.integers(0, 40),
    n_verbnet=st.integers(0, 8),
    prior=st.one_of(st.none(), st.sampled_from([0.70, 0.75, 0.78, 0.85, 0.88]).map(float)),
    rule_has_object_tag=st.booleans(),
    specificity_bonus=st.sampled_from([0.0, 0.01, 0.03]),
)


def test_kick_walkthrough_terms():
    b = score_event(ScoringInput("incident_core", "full", True, True, n_synsets=6, n_verbnet=1, prior=0.85,
                                 rule_has_object_tag=True, specificity_bonus=0.03))
    assert b.base == 0.55 and b.path_bonus == 0.25 and b.structure_bonus == pytest.approx(0.40)
    assert b.object_cap_applied and b.bounded == 0.98
    assert b.blended == pytest.approx(0.889)
    assert round(b.final, 3) == 0.919


@settings(max_examples=500, deadline=None)
@given(inputs)
def test_matches_exact_oracle(e):
    assert score_event(e).final == pytest.approx(float(oracle(e)), abs=1e-12)


@settings(max_examples=300, deadline=None)
@given(inputs)
def test_bounded(e):
    assert 0.0 <= score_event(e).final <= 1.0


@settings(max_examples=300, deadline=None)
@given(inputs)
def test_negation_and_hedging_never_raise_score(e):
    from dataclasses import replace
    plain = score_event(replace(e, negated=False, hedged=False)).final
    assert score_event(replace(e, negated=True)).final <= plain + 1e-12
    assert score_event(replace(e, hedged=True)).final <= plain + 1e-12


@given(st.integers(0, 500), st.integers(0, 500))
def test_ambiguity_penalty_capped(ns, nv):
    p = ambiguity_penalty(ns, nv, default_score_config())
    assert 0.0 <= p <= RAW["ambiguity"]["max"]


def test_ambiguity_single_sense_is_free():
    assert ambiguity_penalty(1, 1, default_score_config()) == 0.0
    assert ambiguity_penalty(0, 0, default_score_config()) == 0.0


def test_unknown_bucket():
    with pytest.raises(ValueError):
        score_event(ScoringInput("mystery", "full"))


def test_config_rejects_bad_alpha(tmp_path):
    bad = dict(RAW, alpha=1.5)
    p = tmp_path / "s.json"
    p.write_text(json.dumps(bad))
    with pytest.raises(ConfigError):
        ScoreConfig.load(p)


def test_high_conf_fraction():
    assert high_conf_fraction([0.9, 0.8, 0.5, 0.1]) == 0.5
    assert high_conf_fraction([]) is None
    with pytest.raises(ValueError):
        high_conf_fraction([0.5], tau=1.2)


@pytest.mark.parametrize("key", sorted(DECOMPOSITIONS))
def test_hand_decompositions_match_scorer(key):
    base, path, anchor, obj, neg, hedge, amb, capped, prior, bonus = DECOMPOSITIONS[key]
    # rebuild an input whose terms reproduce the hand decomposition, then compare both routes
    value = decomposed_confidence(DECOMPOSITIONS[key])
    raw = base + path + anchor + obj - neg - hedge - amb
    if capped:
        raw = min(raw, 0.98)
    raw = max(0.0, min(1.0, raw))
    blended = raw if prior is None else 0.7 * prior + 0.3 * raw
    assert value == round(max(0.0, min(1.0, blended + bonus)), 3)


def test_reference_predicates_rows_via_extraction(reference_predicates, components):
    for row in reference_predicates["rows"]:
        g = parse_penman(row["penman"])
        ev = extract_events(g, {}, components.lexicon, components.rules, components.score, "t")[0]
        assert ev.event_class == row["event_class"]
        assert abs(ev.confidence - row["expected"]) <= reference_predicates["tolerance"], row["predicate"]


def test_reference_predicates_ambiguity_counts_frozen(reference_predicates, components):
    for sense, counts in reference_predicates["ambiguity_counts"].items():
        assert list(components.lexicon.ambiguity_counts(sense)) == counts

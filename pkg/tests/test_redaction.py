import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casekb.fixtures import FIRST, LAST, ORGS, STREETS
from casekb.redaction import (PLACEHOLDER_RE, RedactionAudit, RedactionConfigError, RedactionRuleSet, audit_summary,
                              normalize_ocr, redact, reverse_redaction, split_sentences)

META = {"persons": [{"name": "Dana Whitfield", "role": "victim"}, {"name": "Okafor", "role": "officer"}]}
TEXT = ("On 03/14/2023 Dana Whitfield (V) called 911. Officer Okafor met Dana Whitfield at 12 Maple Street. "
        "Call 585-222-1234.")


def test_basic_redaction():
    narrative, audit = redact(TEXT, META)
    assert narrative.text == ("On [DATE_1] [PERSON_1] (V) called 911. Officer [PERSON_2] met [PERSON_1] at "
                              "[ADDRESS_1]. Call [PHONE_1].")
    assert audit.pseudonym_map == {"PERSON_1": "Victim_1", "PERSON_2": "Officer", "V": "Victim_1"}
    assert reverse_redaction(narrative.text, audit) == TEXT


def test_audit_dict_roundtrip():
    _, audit = redact(TEXT, META)
    again = RedactionAudit.from_dict(json.loads(json.dumps(audit.to_dict())))
    assert again.to_dict() == audit.to_dict()


def test_existing_placeholders_kept_and_counters_continue():
    narrative, audit = redact("[PERSON_3] met Dana Whitfield.", META)
    assert narrative.text == "[PERSON_3] met [PERSON_4]."
    assert reverse_redaction(narrative.text, audit) == "[PERSON_3] met Dana Whitfield."


def test_reverse_detects_tampering():
    narrative, audit = redact(TEXT, META)
    with pytest.raises(ValueError):
        reverse_redaction(narrative.text.replace("[PHONE_1]", "[PHONE_9]"), audit)


def test_ocr_normalization():
    assert normalize_ocr("THE SUSPECT (S) TOOK A WALLET FROM [PERSON_1]. | SAW HIM.") == \
        "The suspect (S) took a wallet from [PERSON_1]. I saw him."
    assert normalize_ocr("Already mixed case.") == "Already mixed case."


def test_sentence_split_handles_abbreviations():
    text = "Mr. Smith arrived. He left. Then he came back!"
    assert [text[s:e] for _, s, e in split_sentences(text)] == ["Mr. Smith arrived.", "He left.", "Then he came back!"]


def test_bad_rule_rejected():
    with pytest.raises(RedactionConfigError):
        RedactionRuleSet.from_dict({"patterns": [{"category": "PERSON", "pattern": "(("}]})
    with pytest.raises(RedactionConfigError):
        RedactionRuleSet.from_dict({"patterns": [{"category": "SSN", "pattern": r"\d"}]})


def test_audit_summary_counts():
    audits = [redact(TEXT, META)[1], redact("Nothing to hide here.", {})[1]]
    summary = audit_summary(audits)
    rows = {r["category"]: r["total"] for r in summary["rows"]}
    assert rows["PERSON"] == 3 and rows["PHONE"] == 1 and rows["DATE"] == 1
    assert summary["total"] == 6
    assert summary["avg_per_report"] == 3.0


people = st.tuples(st.sampled_from(FIRST), st.sampled_from(LAST)).map(" ".join)
pieces = st.one_of(
    people,
    st.builds(lambda n, s: f"{n} {s}", st.integers(1, 999), st.sampled_from(STREETS)),
    st.sampled_from(ORGS),
    st.builds(lambda a, b: f"585-{a}-{b}", st.integers(200, 999), st.integers(1000, 9999)),
    st.sampled_from(["the suspect", "a wallet", "was seen near", "and then", "reported that", "(V)", "S1"]),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(pieces, min_size=1, max_size=14), st.lists(people, max_size=3))
def test_reversible_and_stable(parts, known):
    text = " ".join(parts) + "."
    meta = {"persons": [{"name": n, "role": "victim"} for n in known]}
    narrative, audit = redact(text, meta)
    assert reverse_redaction(narrative.text, audit) == text
    by_key = {}
    for s in audit.substitutions:
        by_key.setdefault((s.category, s.surface.casefold()), set()).add(s.placeholder)
    assert all(len(v) == 1 for v in by_key.values())
    labels = [next(iter(v)) for v in by_key.values()]
    assert len(labels) == len(set(labels))
    for s in audit.substitutions:
        assert PLACEHOLDER_RE.fullmatch(narrative.text[s.redacted_start:s.redacted_end])
        assert text[s.start:s.end] == s.surface

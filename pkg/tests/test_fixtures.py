import filecmp
import json
import re
from pathlib import Path

import pytest

from casekb.fixtures import OFFENSES, PREDICATE_FIXTURES, TEMPLATES, generate_fixture_corpus, review_rows

DATA = Path(__file__).parents[1] / "src" / "casekb" / "data"


def test_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    generate_fixture_corpus(42, 10, a)
    generate_fixture_corpus(42, 10, b)
    cmp = filecmp.dircmp(a, b)
    assert not cmp.left_only and not cmp.right_only
    for sub in cmp.common_dirs:
        assert filecmp.cmpfiles(a / sub, b / sub, [p.name for p in (a / sub).iterdir()], shallow=False)[1:] == ([], [])


def test_seed_changes_surface_only():
    x, y = generate_fixture_corpus(1, 10), generate_fixture_corpus(2, 10)
    assert [c["gold"]["events"] for c in x] == [c["gold"]["events"] for c in y]
    assert [c["narrative"] for c in x] != [c["narrative"] for c in y]


def test_every_offense_category():
    cases = generate_fixture_corpus(42, 10)
    assert {c["metadata"]["offense"] for c in cases} == set(OFFENSES)
    assert {c["metadata"]["offense"] for c in cases[:5]} == set(OFFENSES)


def test_required_scenarios_present():
    names = {t["name"] for t in TEMPLATES}
    assert {"forced_entry_walkthrough", "vehicle_window_wallet", "street_robbery_two_unknown",
            "pawned_goods_no_item", "cue_overrides_axiom"} <= names
    assert any("broke the rear passenger window" in t["text"] and "stole a wallet" in t["text"] for t in TEMPLATES)


def test_bad_size():
    with pytest.raises(ValueError):
        generate_fixture_corpus(42, 0)


def test_sentence_and_graph_counts_agree(corpus_dir):
    from casekb.amr import split_blocks
    from casekb.redaction import normalize_ocr, split_sentences

    for case in sorted(corpus_dir.iterdir()):
        text = normalize_ocr((case / f"{case.name}.narrative.txt").read_text())
        blocks = split_blocks((case / f"{case.name}.amr.txt").read_text())
        assert len(split_sentences(text)) == len(blocks), case.name


def test_predicate_fixtures_sources():
    sources = {f["predicate"]: f["source"] for f in PREDICATE_FIXTURES}
    assert sources["kick-01"] == "published"
    assert sum(s == "calibration" for s in sources.values()) == 5


def test_review_rows_cover_five_cases_six_reviewers():
    votes, system = review_rows()
    assert {r["case_id"] for r in votes} == {f"R{i}" for i in range(1, 6)}
    assert {r["reviewer_id"] for r in votes} == {f"r{i}" for i in range(1, 7)}
    assert {r["question_id"] for r in system} == {f"Q{i}" for i in range(1, 10)}


# -- independent rule applier -------------------------------------------------------


def _ancestors(classes, c):
    out = []
    while c is not None:
        out.append(c)
        c = classes.get(c)
    return out


def apply_rules(events, sentences):
    """Cue and axiom edges recomputed from the raw config files, cues first."""
    cues = json.loads((DATA / "cues.json").read_text())
    axioms = json.loads((DATA / "axioms.json").read_text())["axioms"]
    classes = json.loads((DATA / "schema.json").read_text())["classes"]
    events = [e for e in events if not e["negated"]]
    ids = {e["event_id"] for e in events}
    edges = {}
    heads = {e["sentence_index"]: e["event_id"] for e in events if e["sentence_head"]}
    for i in range(len(sentences) - 1):
        nxt = sentences[i + 1].strip().lower()
        hit = False
        for c in cues["inter_sentence"]:
            pat = r"\b" + r"\s+".join(map(re.escape, c["token"].split())) + r"\b"
            if (re.match(pat, nxt) if c["position"] == "initial" else re.search(pat, nxt)):
                hit = True
                break
        if hit and i in heads and i + 1 in heads and heads[i] != heads[i + 1]:
            edges[(heads[i], heads[i + 1])] = "cue"
    for e in events:
        text = sentences[e["sentence_index"]].lower()
        for op, other in e["time_links"]:
            if other not in ids or other == e["event_id"]:
                continue
            if op == "before":
                edges[(e["event_id"], other)] = "cue"
            elif op == "after" or (op == "time" and any(re.search(rf"\b{w}\b", text)
                                                         for w in cues["time_predicate_cues"])):
                edges[(other, e["event_id"])] = "cue"
    for ax in axioms:
        for a in events:
            for b in events:
                if a is b or ax["source"] not in _ancestors(classes, a["event_class"]):
                    continue
                if ax["target"] not in _ancestors(classes, b["event_class"]):
                    continue
                gap = ax.get("max_sentence_gap")
                if gap is not None and abs(a["sentence_index"] - b["sentence_index"]) > gap:
                    continue
                key = (a["event_id"], b["event_id"])
                if key in edges:
                    edges[key] = "cue+axiom" if edges[key] != "axiom" else "axiom"
                elif (key[1], key[0]) in edges and edges[(key[1], key[0])] != "axiom":
                    continue
                else:
                    edges[key] = "axiom"
    return sorted((s, t, sup) for (s, t), sup in edges.items())


def test_gold_edges_reproduced_by_rule_applier(corpus_dir, corpus_run):
    out, _ = corpus_run
    from casekb.redaction import split_sentences

    for gold_file in sorted(corpus_dir.glob("*/*.gold.json")):
        gold = json.loads(gold_file.read_text())
        cid = gold["case_id"]
        events = json.loads((out / cid / "events.json").read_text())["events"]
        text = (out / cid / "redacted.txt").read_text()
        sentences = [text[s:e] for _, s, e in split_sentences(text)]
        assert apply_rules(events, sentences) == sorted((e["source"], e["target"], e["support"]) for e in gold["edges"]), cid


def test_gold_matches_pipeline(corpus_dir, corpus_run):
    out, _ = corpus_run
    for gold_file in sorted(corpus_dir.glob("*/*.gold.json")):
        gold = json.loads(gold_file.read_text())
        o = out / gold["case_id"]
        events = {e["event_id"]: e for e in json.loads((o / "events.json").read_text())["events"]}
        for eid, cls in gold["events"].items():
            assert events[eid]["event_class"] == cls
        for eid, conf in gold["confidence"].items():
            assert events[eid]["confidence"] == conf
        val = json.loads((o / "validation.json").read_text())
        assert sorted({v["constraint_id"] for v in val["initial"]["violations"]}) == sorted(gold["violations"])
        assert val["final"]["consistent"]
        audit = json.loads((o / "audit.json").read_text())
        assert audit["pseudonym_map"] == gold["pseudonyms"]
        assert [[s["category"], s["placeholder"], s["surface"]] for s in audit["substitutions"]] == \
            [[r["category"], r["placeholder"], r["surface"]] for r in gold["redactions"]]
        kb = json.loads((o / "facts.json").read_text())
        assert sum(a["kind"] == "DifferentFrom" for a in kb["assertions"]) == gold["different_from"]

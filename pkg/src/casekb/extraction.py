"""Event mentions from AMR graphs: grounding, two-stage typing, scoring, frames."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import combinations
from pathlib import Path

from .amr import AmrGraph, arguments_of, is_negated, predicate_nodes, unquote
from .confidence import ScoreBreakdown, ScoreConfig, ScoringInput, default_score_config, score_event
from .lexicon import Lexicon, SemanticPath, UnknownPredicate, split_sense_label
from .ontology import Assertion

ARG_ROLE_RE = re.compile(r"^:ARG\d$")
EXTRA_ARG_ROLES = (":instrument", ":path", ":location", ":source", ":destination")
ROLE_NOUNS = {
    "suspect": "Suspect", "victim": "Victim", "witness": "Witness",
    "officer": "Officer", "policeman": "Officer", "police": "Officer", "deputy": "Officer",
}
ROLE_PREFIXES = ("Suspect", "Victim", "Witness", "Officer")
PLACEHOLDER_RE = re.compile(r"^\[?([A-Z]+_\d+)\]?$")


class RuleError(ValueError):
    pass


# -- rules -------------------------------------------------------------------------


@dataclass(frozen=True)
class TypingRule:
    rule_id: str
    anchor_lemmas: frozenset[str]
    anchor_classes: frozenset[str]
    any_predicate: bool
    required_tags: tuple[str, ...]
    event_class: str
    prior: float | None
    specificity_bonus: float = 0.0
    class_by_lemma: dict = field(default_factory=dict, hash=False, compare=False)

    def matches(self, lemma: str, verbnet_classes: tuple[str, ...]) -> bool:
        return (self.any_predicate or lemma in self.anchor_lemmas
                or bool(self.anchor_classes.intersection(verbnet_classes)))

    def class_for(self, lemma: str) -> str:
        return self.class_by_lemma.get(lemma, self.event_class)


@dataclass(frozen=True)
class RuleSet:
    rules: tuple[TypingRule, ...]
    tag_groups: dict[str, frozenset[str]]
    object_roles: tuple[str, ...]
    bucket_by_lemma: dict[str, str]
    bucket_by_class: dict[str, str]
    bucket_default: str
    hedge_cues: frozenset[str]
    concept_types: dict[str, frozenset[str]]

    @classmethod
    def from_dict(cls, raw: dict) -> RuleSet:
        groups = {k: frozenset(v) for k, v in raw["tag_groups"].items()}
        rules = []
        seen = set()
        for r in raw["rules"]:
            rid = r["rule_id"]
            if rid in seen:
                raise RuleError(f"duplicate rule_id {rid}")
            seen.add(rid)
            prior = r.get("prior")
            if prior is not None and not 0.0 <= prior <= 1.0:
                raise RuleError(f"{rid}: prior must lie in [0, 1]")
            missing = set(r.get("required_tags", [])) - set(groups)
            if missing:
                raise RuleError(f"{rid}: unknown required tags {sorted(missing)}")
            anchors = r.get("anchors", {})
            rules.append(TypingRule(
                rid, frozenset(anchors.get("lemmas", [])), frozenset(anchors.get("verbnet_classes", [])),
                bool(anchors.get("any")), tuple(r.get("required_tags", [])), r["event_class"], prior,
                float(r.get("specificity_bonus", 0.0)), dict(r.get("class_by_lemma", {}))))
        b = raw["buckets"]
        return cls(tuple(rules), groups, tuple(raw["object_roles"]), dict(b["by_lemma"]),
                   dict(b["by_class"]), b["default"], frozenset(raw.get("hedge_cues", [])),
                   {k: frozenset(v) for k, v in raw.get("concept_types", {}).items()})

    @classmethod
    def load(cls, path: str | Path) -> RuleSet:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def event_classes(self) -> set[str]:
        out = set(self.bucket_by_class)
        for r in self.rules:
            out.add(r.event_class)
            out.update(r.class_by_lemma.values())
        return out

    def bucket_for(self, lemma: str, event_class: str) -> str:
        key = lemma.replace(" ", "-")
        if key in self.bucket_by_lemma:
            return self.bucket_by_lemma[key]
        return self.bucket_by_class.get(event_class, self.bucket_default)


@lru_cache(maxsize=None)
def default_rules() -> RuleSet:
    return RuleSet.load(Path(str(resources.files("casekb") / "data" / "typing_rules.json")))


# -- records -----------------------------------------------------------------------


@dataclass(frozen=True)
class ParticipantRef:
    entity_id: str
    label: str
    concept: str
    types: tuple[str, ...]
    sentence_index: int
    variable: str
    role: str | None = None
    is_event: bool = False
    part_of: str | None = None
    members: tuple[ParticipantRef, ...] = ()

    def flat(self) -> list[ParticipantRef]:
        """The participant itself, or its conjuncts for an ``and`` node."""
        return [m for member in self.members for m in member.flat()] if self.members else [self]

    def to_dict(self) -> dict:
        d = {"entity_id": self.entity_id, "label": self.label, "concept": self.concept,
             "types": list(self.types), "sentence_index": self.sentence_index,
             "variable": self.variable, "role": self.role, "is_event": self.is_event,
             "part_of": self.part_of}
        if self.members:
            d["members"] = [m.to_dict() for m in self.members]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> ParticipantRef:
        return cls(d["entity_id"], d["label"], d["concept"], tuple(d["types"]), d["sentence_index"],
                   d["variable"], d.get("role"), d.get("is_event", False), d.get("part_of"),
                   tuple(cls.from_dict(m) for m in d.get("members", [])))


@dataclass
class EventMention:
    event_id: str
    case_id: str
    sentence_index: int
    variable: str
    predicate_sense: str
    lemma: str
    event_class: str
    bucket: str
    args: dict[str, ParticipantRef]
    negated: bool
    hedged: bool
    typing_rule_id: str | None
    candidate_classes: list[str]
    semantic_path: SemanticPath | None
    confidence: float
    score_breakdown: ScoreBreakdown
    sentence_head: bool = False
    value_mentions: list[str] = field(default_factory=list)
    time_links: list[tuple[str, str]] = field(default_factory=list)

    def participants(self) -> list[ParticipantRef]:
        return [p for a in self.args.values() for p in a.flat() if not p.is_event]

    def to_dict(self) -> dict:
        return {
            "event_id": self.event_id, "case_id": self.case_id,
            "sentence_index": self.sentence_index, "variable": self.variable,
            "predicate_sense": self.predicate_sense, "lemma": self.lemma,
            "event_class": self.event_class, "bucket": self.bucket,
            "args": {k: v.to_dict() for k, v in sorted(self.args.items())},
            "negated": self.negated, "hedged": self.hedged,
            "typing_rule_id": self.typing_rule_id, "candidate_classes": list(self.candidate_classes),
            "semantic_path": self.semantic_path.to_dict() if self.semantic_path else None,
            "confidence": round(self.confidence, 3),
            "score_breakdown": self.score_breakdown.to_dict(),
            "sentence_head": self.sentence_head, "value_mentions": list(self.value_mentions),
            "time_links": [list(t) for t in self.time_links],
        }

    @classmethod
    def from_dict(cls, d: dict) -> EventMention:
        sb = dict(d["score_breakdown"])
        return cls(
            d["event_id"], d["case_id"], d["sentence_index"], d["variable"], d["predicate_sense"],
            d["lemma"], d["event_class"], d["bucket"],
            {k: ParticipantRef.from_dict(v) for k, v in d["args"].items()},
            d["negated"], d["hedged"], d["typing_rule_id"], list(d["candidate_classes"]),
            SemanticPath.from_dict(d["semantic_path"]) if d["semantic_path"] else None,
            d["confidence"], ScoreBreakdown(**sb), d.get("sentence_head", False),
            list(d.get("value_mentions", [])), [tuple(t) for t in d.get("time_links", [])])


@dataclass(frozen=True)
class Frame:
    frame_id: str
    kind: str  # "Entry" | "Theft"
    event_id: str
    slots: dict
    evidence: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"frame_id": self.frame_id, "kind": self.kind, "event_id": self.event_id,
                "slots": self.slots, "evidence": list(self.evidence)}

    @classmethod
    def from_dict(cls, d: dict) -> Frame:
        return cls(d["frame_id"], d["kind"], d["event_id"], d["slots"], tuple(d["evidence"]))


# -- grounding ---------------------------------------------------------------------


def _normalize_key(name: str) -> str:
    return name.strip().strip("[]").strip()


def _role_of(label: str) -> str | None:
    for prefix in ROLE_PREFIXES:
        if label.startswith(prefix):
            return prefix
    return None


def _name_string(g: AmrGraph, var: str) -> str | None:
    for e in g.outgoing(var):
        if e.label == ":name" and not e.constant:
            ops = sorted((x for x in g.outgoing(e.target) if x.label.startswith(":op") and x.constant),
                         key=lambda x: int(x.label[3:]) if x.label[3:].isdigit() else 0)
            if ops:
                return " ".join(unquote(o.target) for o in ops)
    return None


def _resolve_role_noun(role: str, pseudonyms: dict[str, str]) -> str:
    shorthand = {"Suspect": "S", "Victim": "V", "Witness": "W", "Officer": "I"}[role]
    if shorthand in pseudonyms:
        return pseudonyms[shorthand]
    labels = sorted({v for v in pseudonyms.values() if _role_of(v) == role})
    return labels[0] if len(labels) == 1 else role


class _Grounder:
    def __init__(self, g: AmrGraph, pseudonyms: dict[str, str], lex: Lexicon, rules: RuleSet):
        self.g = g
        self.pseudonyms = {_normalize_key(k): v for k, v in pseudonyms.items()}
        self.lex = lex
        self.rules = rules
        self.sent = g.sentence_index
        self._part_of = {}
        for e in g.normalized_edges():
            if e.label == ":part" and not e.constant:
                self._part_of.setdefault(e.target, e.source)

    def event_id(self, var: str) -> str:
        return f"e{self.sent}_{var}"

    def ground(self, var: str, depth: int = 0) -> ParticipantRef:
        node = self.g.node(var)
        if node.is_predicate:
            return ParticipantRef(self.event_id(var), node.concept, node.concept, (), self.sent, var, is_event=True)
        if node.concept == "and" and depth < 3:
            ops = [e.target for e in self.g.outgoing(var) if e.label.startswith(":op") and not e.constant]
            members = tuple(self.ground(t, depth + 1) for t in ops)
            types = tuple(sorted({t for m in members for t in m.types}))
            return ParticipantRef(f"x{self.sent}_{var}", "and", "and", types, self.sent, var, members=members)
        label = self._person_label(var)
        if label is not None:
            key = _name_string(self.g, var)
            key = _normalize_key(key) if key else None
            entity_id = key if label == "Unknown_Person" and key else label
            return ParticipantRef(entity_id, label, node.concept, ("person",), self.sent, var, _role_of(label))
        name = _name_string(self.g, var)
        if name and PLACEHOLDER_RE.match(name.strip()):
            placeholder = PLACEHOLDER_RE.match(name.strip()).group(1)
            types = self._types(node.concept)
            return ParticipantRef(placeholder, placeholder, node.concept, types, self.sent, var,
                                  part_of=self._whole(var))
        return ParticipantRef(f"x{self.sent}_{var}", node.concept, node.concept, self._types(node.concept),
                              self.sent, var, part_of=self._whole(var))

    def _whole(self, var: str) -> str | None:
        whole = self._part_of.get(var)
        return self.g.node(whole).concept if whole else None

    def _types(self, concept: str) -> tuple[str, ...]:
        tags = self.rules.concept_types.get(concept) or self.lex.type_argument(concept)
        return tuple(sorted(tags)) if tags else ("Unknown",)

    def _person_label(self, var: str) -> str | None:
        node = self.g.node(var)
        name = _name_string(self.g, var)
        if name:
            key = _normalize_key(name)
            if key in self.pseudonyms:
                return self.pseudonyms[key]
            if PLACEHOLDER_RE.match(key) and key.startswith("PERSON_"):
                return "Unknown_Person"
        if node.concept == "i":
            return self.pseudonyms.get("I", "Officer")
        if node.concept in ROLE_NOUNS:
            return _resolve_role_noun(ROLE_NOUNS[node.concept], self.pseudonyms)
        if node.concept == "person":
            for e in self.g.outgoing(var):
                if e.constant or e.label not in (":mod", ":ARG0-of", ":ARG1-of", ":ARG2-of"):
                    continue
                lemma = self.g.node(e.target).lemma
                if lemma in ROLE_NOUNS:
                    return _resolve_role_noun(ROLE_NOUNS[lemma], self.pseudonyms)
        return None


# -- extraction ------------------------------------------------------------------


def _is_hedged(g: AmrGraph, var: str, cues: frozenset[str]) -> bool:
    for parent, role in g.parents(var):
        if role == ":ARG1" and g.node(parent).lemma in cues:
            return True
    for e in g.outgoing(var):
        if not e.constant and e.label in (":mod", ":manner") and g.node(e.target).lemma in cues:
            return True
    return False


def _value_mentions(g: AmrGraph, var: str) -> list[str]:
    out, seen, frontier = [], {var}, [var]
    for _ in range(4):
        nxt = []
        for v in frontier:
            for e in g.outgoing(v):
                if e.constant or e.target in seen or e.label.endswith("-of"):
                    continue
                seen.add(e.target)
                node = g.node(e.target)
                if node.concept == "monetary-quantity":
                    quant = g.attribute(e.target, ":quant") or "?"
                    unit = next((g.node(u.target).concept for u in g.outgoing(e.target)
                                 if u.label == ":unit" and not u.constant), "")
                    out.append(f"{quant} {unit}".strip())
                elif not node.is_predicate:
                    nxt.append(e.target)
        frontier = nxt
    return out


def _time_links(g: AmrGraph, var: str, event_id) -> list[tuple[str, str]]:
    links = []
    for e in g.outgoing(var):
        if e.label != ":time" or e.constant:
            continue
        t = g.node(e.target)
        if t.concept in ("before", "after"):
            for op in g.outgoing(t.variable):
                if op.label == ":op1" and not op.constant and g.node(op.target).is_predicate:
                    links.append((t.concept, event_id(op.target)))
        elif t.is_predicate:
            links.append(("time", event_id(t.variable)))
    return links


def _satisfied(rule: TypingRule, objects: list[ParticipantRef], rules: RuleSet) -> bool:
    for tag in rule.required_tags:
        wanted = rules.tag_groups[tag]
        if not any(wanted.intersection(o.types) for o in objects):
            return False
    return True


def extract_events(
    g: AmrGraph,
    pseudonyms: dict[str, str],
    lex: Lexicon,
    rules: RuleSet | None = None,
    score_config: ScoreConfig | None = None,
    case_id: str = "case",
) -> list[EventMention]:
    """One mention per predicate node of ``g``, typed, grounded and scored."""
    rules = rules or default_rules()
    cfg = score_config or default_score_config()
    gr = _Grounder(g, pseudonyms, lex, rules)
    events = []
    for node in predicate_nodes(g):
        var = node.variable
        lemma, _ = split_sense_label(node.concept)
        try:
            path: SemanticPath | None = lex.ground_predicate(node.concept)
        except UnknownPredicate:
            path = None
        vn = path.verbnet_classes if path else ()
        args = {role: gr.ground(t) for role, t in arguments_of(g, var).items()
                if ARG_ROLE_RE.match(role) or role in EXTRA_ARG_ROLES}
        objects = [p for role in rules.object_roles if role in args for p in args[role].flat()
                   if not p.is_event]

        stage1 = [r for r in rules.rules if r.matches(lemma, vn)]
        stage2 = [r for r in stage1 if _satisfied(r, objects, rules)]
        winner = min(stage2, key=lambda r: (-len(r.required_tags),
                                            -(r.prior if r.prior is not None else -1.0), r.rule_id),
                     default=None)
        event_class = winner.class_for(lemma) if winner else "NarrativeAction"
        bucket = rules.bucket_for(lemma, event_class)
        negated = is_negated(g, var)
        hedged = _is_hedged(g, var, rules.hedge_cues)
        n_syn, n_vn = lex.ambiguity_counts(node.concept)
        has_obj_tag = bool(winner and any(t in rules.tag_groups for t in winner.required_tags))
        breakdown = score_event(ScoringInput(
            bucket=bucket,
            path_kind=path.path_kind if path else None,
            anchor_matched=bool(winner and not winner.any_predicate),
            object_evidence=has_obj_tag,
            negated=negated,
            hedged=hedged,
            n_synsets=n_syn,
            n_verbnet=n_vn,
            prior=winner.prior if winner else None,
            rule_has_object_tag=has_obj_tag,
            specificity_bonus=winner.specificity_bonus if winner else 0.0,
        ), cfg)
        events.append(EventMention(
            event_id=gr.event_id(var), case_id=case_id, sentence_index=g.sentence_index,
            variable=var, predicate_sense=node.concept, lemma=lemma, event_class=event_class,
            bucket=bucket, args=args, negated=negated, hedged=hedged,
            typing_rule_id=winner.rule_id if winner else None,
            candidate_classes=sorted({r.class_for(lemma) for r in stage1}),
            semantic_path=path, confidence=breakdown.final, score_breakdown=breakdown,
            value_mentions=_value_mentions(g, var), time_links=_time_links(g, var, gr.event_id),
        ))
    mark_sentence_heads(events)
    return events


def mark_sentence_heads(events: list[EventMention]) -> None:
    """Flag the highest-confidence non-context_admin event of each sentence (first wins ties)."""
    best: dict[int, EventMention] = {}
    for e in events:
        e.sentence_head = False
        if e.bucket == "context_admin":
            continue
        cur = best.get(e.sentence_index)
        if cur is None or e.confidence > cur.confidence:
            best[e.sentence_index] = e
    for e in best.values():
        e.sentence_head = True


# -- unknown actors ----------------------------------------------------------------


def unknown_suspects(events: list[EventMention], pseudonyms: dict[str, str]) -> list[str]:
    labels = {v for v in pseudonyms.values() if v.startswith("Suspect_Unknown")}
    labels |= {p.entity_id for e in events for p in e.participants()
               if p.label.startswith("Suspect_Unknown")}
    return sorted(labels)


def separate_unknown_actors(events: list[EventMention], pseudonyms: dict[str, str]) -> list[Assertion]:
    """DifferentFrom for every pair of distinct unknown suspects."""
    first_seen: dict[str, int] = {}
    for e in events:
        for p in e.participants():
            first_seen.setdefault(p.entity_id, e.sentence_index)
    out = []
    for x, y in combinations(unknown_suspects(events, pseudonyms), 2):
        evidence = min(first_seen.get(x, 0), first_seen.get(y, 0))
        out.append(Assertion("DifferentFrom", x, "", y, provenance="narrative", evidence=evidence))
    return out


# -- frames ----------------------------------------------------------------------


ENTRY_CLASSES = ("EntryEvent", "ForcedEntryEvent")


def fill_frames(events: list[EventMention], stolen_item_roles: dict[str, list[str]] | None = None) -> list[Frame]:
    """Entry frames for (forced) entries and Theft frames for thefts, in event order."""
    roles = stolen_item_roles or {"default": [":ARG1"], "rob": [":ARG2"]}
    frames = []
    for e in events:
        if e.event_class in ENTRY_CLASSES:
            objs = [p for r in (":ARG1", ":path", ":location", ":ARG2") if r in e.args
                    for p in e.args[r].flat() if not p.is_event]
            point = next((p for p in objs if {"structure_part", "vehicle_part"} & set(p.types)), None)
            structure = point.part_of if point and point.part_of else None
            if structure is None:
                structure = next((p.concept for p in objs if p is not point
                                  and {"structure", "vehicle"} & set(p.types)), None)
            tool = e.args.get(":instrument")
            frames.append(Frame(f"f_{e.event_id}", "Entry", e.event_id, {
                "entry_point": point.concept if point else None,
                "entry_method": e.lemma,
                "entry_structure": structure,
                "entry_tool": tool.concept if tool and not tool.is_event else None,
            }, (e.sentence_index,)))
        elif e.event_class == "TheftEvent":
            items = [p.concept for r in roles.get(e.lemma, roles["default"]) if r in e.args
                     for p in e.args[r].flat() if not p.is_event]
            frames.append(Frame(f"f_{e.event_id}", "Theft", e.event_id, {
                "stolen_items": items,
                "value_mentions": list(e.value_mentions),
            }, (e.sentence_index,)))
    return frames

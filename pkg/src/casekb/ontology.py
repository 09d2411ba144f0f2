"""Case knowledge base: schema, evidence-linked assertions, validation and repair."""

from __future__ import annotations

import hashlib
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field, replace
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

log = logging.getLogger(__name__)

KINDS = ("ClassAssertion", "ObjectPropertyAssertion", "DataPropertyAssertion", "DifferentFrom")
CONSTRAINTS = (
    "participation_in_event",
    "event_in_case",
    "agent_on_participation",
    "theft_has_stolen_item",
    "theft_item_typed",
    "victim_on_event",
    "different_from_merged",
)
CASE_INDIVIDUAL = "case"
# metadata keys consumed elsewhere (redaction, pseudonyms); not facts
_NON_FACT_METADATA = {"case_id", "persons", "organizations", "addresses", "plates", "phones", "locations"}


class SchemaError(ValueError):
    pass


# -- schema ------------------------------------------------------------------------


@dataclass(frozen=True)
class Schema:
    classes: dict[str, str | None]  # class -> parent
    object_properties: dict[str, dict]
    data_properties: dict[str, dict]
    annotations: dict[str, str] = field(default_factory=dict)
    tag_classes: dict[str, str] = field(default_factory=dict)
    role_classes: dict[str, str] = field(default_factory=dict)
    metadata_properties: dict[str, str] = field(default_factory=dict)
    top: str = "Thing"
    version: str = ""

    def __post_init__(self) -> None:
        roots = [c for c, p in self.classes.items() if p is None]
        if roots != [self.top]:
            raise SchemaError(f"subclass graph must have the single root {self.top!r}, found {roots}")
        for c, p in self.classes.items():
            if p is not None and p not in self.classes:
                raise SchemaError(f"{c} has undeclared parent {p}")
        for c in self.classes:
            seen = set()
            while c is not None:
                if c in seen:
                    raise SchemaError(f"subclass cycle through {c}")
                seen.add(c)
                c = self.classes[c]
        for name, spec in self.object_properties.items():
            for key in ("domain", "range"):
                if spec.get(key) not in self.classes:
                    raise SchemaError(f"object property {name} needs one declared {key}")
        for name, spec in self.data_properties.items():
            if spec.get("domain") not in self.classes or not spec.get("range"):
                raise SchemaError(f"data property {name} needs a domain and a range")
        for cls in list(self.tag_classes.values()) + list(self.role_classes.values()):
            if cls not in self.classes:
                raise SchemaError(f"mapped class {cls} is not declared")
        if not self.is_subclass("TheftEvent", "CrimeEvent"):
            raise SchemaError("TheftEvent must be a subclass of CrimeEvent")

    @classmethod
    def from_dict(cls, raw: dict) -> Schema:
        missing = [k for k in ("classes", "object_properties", "data_properties") if k not in raw]
        if missing:
            raise SchemaError(f"schema lacks {', '.join(missing)}")
        return cls(dict(raw["classes"]), dict(raw["object_properties"]), dict(raw["data_properties"]),
                   dict(raw.get("annotations", {})), dict(raw.get("tag_classes", {})),
                   dict(raw.get("role_classes", {})), dict(raw.get("metadata_properties", {})),
                   raw.get("top", "Thing"), raw.get("version", ""))

    @classmethod
    def load(cls, path: str | Path) -> Schema:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def ancestors(self, cls: str) -> list[str]:
        """``cls`` and every superclass, nearest first."""
        out = []
        while cls is not None:
            out.append(cls)
            cls = self.classes.get(cls)
        return out

    def is_subclass(self, sub: str, sup: str) -> bool:
        return sub in self.classes and sup in self.ancestors(sub)


@lru_cache(maxsize=None)
def default_schema() -> Schema:
    return Schema.load(Path(str(resources.files("casekb") / "data" / "schema.json")))


@lru_cache(maxsize=None)
def default_templates() -> dict:
    with open(Path(str(resources.files("casekb") / "data" / "templates.json")), encoding="utf-8") as fh:
        return json.load(fh)


# -- assertions --------------------------------------------------------------------


@dataclass(frozen=True)
class Assertion:
    """One ABox fact.

    ``ClassAssertion`` keeps the class in ``object`` and an empty ``predicate``.
    Data values are strings typed by ``datatype``.
    """

    kind: str
    subject: str
    predicate: str
    object: str
    provenance: str = "narrative"
    evidence: int | str | None = None
    datatype: str | None = None

    @property
    def id(self) -> str:
        key = "\x1f".join((self.kind, self.subject, self.predicate, self.object))
        return "a" + hashlib.sha1(key.encode()).hexdigest()[:12]

    def key(self) -> tuple:
        return (self.kind, self.subject, self.predicate, self.object, self.provenance,
                str(self.evidence), self.datatype or "")

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "subject": self.subject, "predicate": self.predicate,
                "object": self.object, "provenance": self.provenance, "evidence": self.evidence,
                "datatype": self.datatype}

    @classmethod
    def from_dict(cls, d: dict) -> Assertion:
        return cls(d["kind"], d["subject"], d["predicate"], d["object"], d["provenance"],
                   d.get("evidence"), d.get("datatype"))


def class_assertion(cls: str, ind: str, evidence, provenance="narrative") -> Assertion:
    return Assertion("ClassAssertion", ind, "", cls, provenance, evidence)


def object_assertion(prop: str, s: str, o: str, evidence, provenance="narrative") -> Assertion:
    return Assertion("ObjectPropertyAssertion", s, prop, o, provenance, evidence)


def data_assertion(prop: str, s: str, value: str, datatype: str, evidence, provenance="narrative") -> Assertion:
    return Assertion("DataPropertyAssertion", s, prop, value, provenance, evidence, datatype)


@dataclass
class CaseKB:
    """Assertions keyed by content id; adding the same fact twice is a no-op."""

    case_id: str
    schema: Schema = field(default_factory=default_schema)
    assertions: dict[str, Assertion] = field(default_factory=dict)
    quarantine: dict[str, Assertion] = field(default_factory=dict)
    n_sentences: int = 0

    def add(self, items: Iterable[Assertion]) -> None:
        for a in items:
            if a.kind not in KINDS:
                raise ValueError(f"unknown assertion kind {a.kind!r}")
            self.assertions.setdefault(a.id, a)

    def __iter__(self):
        return iter(self.assertions.values())

    def __len__(self) -> int:
        return len(self.assertions)

    def sorted_assertions(self) -> list[Assertion]:
        return sorted(self.assertions.values(), key=lambda a: (a.subject, a.kind, a.predicate, a.object))

    def individuals(self) -> set[str]:
        out = set()
        for a in self.assertions.values():
            out.add(a.subject)
            if a.kind in ("ObjectPropertyAssertion", "DifferentFrom"):
                out.add(a.object)
        return out

    def types_of(self) -> dict[str, set[str]]:
        """Individual -> asserted classes closed under declared subclass edges."""
        types: dict[str, set[str]] = defaultdict(set)
        for a in self.assertions.values():
            if a.kind == "ClassAssertion":
                types[a.subject].update(self.schema.ancestors(a.object))
        return types

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "schema_version": self.schema.version,
            "assertions": [a.to_dict() for a in self.sorted_assertions()],
            "quarantine": [a.to_dict() for a in sorted(self.quarantine.values(),
                                                       key=lambda a: (a.subject, a.kind, a.predicate, a.object))],
        }

    @classmethod
    def from_dict(cls, d: dict, schema: Schema | None = None) -> CaseKB:
        kb = cls(d["case_id"], schema or default_schema())
        kb.add(Assertion.from_dict(x) for x in d["assertions"])
        for x in d.get("quarantine", []):
            a = Assertion.from_dict(x)
            kb.quarantine[a.id] = a
        return kb


# -- mapping -----------------------------------------------------------------------


def _entity_classes(p, schema: Schema) -> list[str]:
    classes = [schema.tag_classes[t] for t in p.types if t in schema.tag_classes]
    if p.role and p.role in schema.role_classes:
        classes.append(schema.role_classes[p.role])
    return classes or ["Entity"]


def map_event_to_assertions(e, schema: Schema | None = None, templates: dict | None = None) -> list[Assertion]:
    """Class, participation, role and template facts for one event mention."""
    schema = schema or default_schema()
    templates = templates or default_templates()
    ev, s = e.event_id, e.sentence_index
    out = [
        class_assertion(e.event_class, ev, s),
        object_assertion("inCase", ev, CASE_INDIVIDUAL, s),
        data_assertion("confidence", ev, f"{e.confidence:.3f}", "decimal", s),
        data_assertion("predicateSense", ev, e.predicate_sense, "string", s),
    ]
    role_props = {":ARG0": "hasAgent", ":ARG1": "hasPatient", ":instrument": "hasInstrument"}
    links = [(role_props[r], p) for r, arg in sorted(e.args.items()) if r in role_props
             for p in arg.flat() if not p.is_event]
    if links:
        part = f"p_{ev}"
        out.append(class_assertion("Participation", part, s))
        out.append(object_assertion("inEvent", part, ev, s))
        for prop, p in links:
            out.append(object_assertion(prop, part, p.entity_id, s))
    for p in e.participants():
        out.extend(class_assertion(c, p.entity_id, s) for c in _entity_classes(p, schema))

    if schema.is_subclass(e.event_class, "TheftEvent"):
        roles = templates.get("stolen_item_roles", {"default": [":ARG1"]})
        for r in roles.get(e.lemma, roles["default"]):
            if r in e.args:
                out.extend(object_assertion("hasStolenItem", ev, p.entity_id, s)
                           for p in e.args[r].flat() if not p.is_event)
    for t in templates.get("templates", []):
        if schema.is_subclass(e.event_class, t["applies_to"]):
            out.extend(data_assertion(d["property"], ev, d["value"], d["datatype"], s)
                       for d in t["data_assertions"])
    if schema.is_subclass(e.event_class, "CrimeEvent"):
        for r in templates.get("victim_roles", []):
            if r in e.args:
                out.extend(object_assertion("hasVictim", ev, p.entity_id, s)
                           for p in e.args[r].flat() if p.role == "Victim")
    return list(dict.fromkeys(out))


def map_metadata(metadata: dict, schema: Schema | None = None) -> list[Assertion]:
    schema = schema or default_schema()
    out = [class_assertion("Case", CASE_INDIVIDUAL, "metadata", provenance="metadata")]
    for key in sorted(metadata):
        prop = schema.metadata_properties.get(key)
        if prop is None:
            if key not in _NON_FACT_METADATA:
                log.warning("ignoring unknown metadata key %r", key)
            continue
        value = metadata[key]
        if value is None or value == "":
            continue
        rng = schema.data_properties[prop]["range"]
        out.append(data_assertion(prop, CASE_INDIVIDUAL, str(value), rng, key, provenance="metadata"))
    return out


def build_kb(case_id: str, events, metadata: dict, extra: Iterable[Assertion] = (),
             schema: Schema | None = None, n_sentences: int = 0, templates: dict | None = None) -> CaseKB:
    kb = CaseKB(case_id, schema or default_schema(), n_sentences=n_sentences)
    kb.add(map_metadata(metadata, kb.schema))
    for e in events:
        kb.add(map_event_to_assertions(e, kb.schema, templates))
    kb.add(extra)
    return kb


# -- validation --------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    constraint_id: str
    assertion_ids: tuple[str, ...]
    message: str

    def to_dict(self) -> dict:
        return {"constraint_id": self.constraint_id, "assertion_ids": list(self.assertion_ids),
                "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    case_id: str
    violations: tuple[Violation, ...]

    @property
    def consistent(self) -> bool:
        return not self.violations

    def ids(self) -> list[str]:
        return [v.constraint_id for v in self.violations]

    def to_dict(self) -> dict:
        return {"case_id": self.case_id, "consistent": self.consistent,
                "violations": [v.to_dict() for v in self.violations]}


def validate(kb: CaseKB) -> ValidationReport:
    """Closed-world check of the participation, case, role, theft and victim constraints."""
    types = kb.types_of()
    typed = lambda ind, cls: cls in types.get(ind, ())  # noqa: E731
    by_prop: dict[str, list[Assertion]] = defaultdict(list)
    class_asserts: dict[str, list[Assertion]] = defaultdict(list)
    for a in kb.sorted_assertions():
        if a.kind == "ObjectPropertyAssertion":
            by_prop[a.predicate].append(a)
        elif a.kind == "ClassAssertion":
            class_asserts[a.subject].append(a)
    out: list[Violation] = []

    def typing_ids(ind: str, cls: str) -> tuple[str, ...]:
        return tuple(a.id for a in class_asserts[ind] if kb.schema.is_subclass(a.object, cls))

    linked = {a.subject for a in by_prop["inEvent"] if typed(a.object, "Event")}
    for ind in sorted(i for i in types if typed(i, "Participation") and i not in linked):
        out.append(Violation("participation_in_event", typing_ids(ind, "Participation"),
                             f"participation {ind} is not linked to an event"))
    in_case = {a.subject for a in by_prop["inCase"] if typed(a.object, "Case")}
    for ind in sorted(i for i in types if typed(i, "Event") and i not in in_case):
        out.append(Violation("event_in_case", typing_ids(ind, "Event"), f"event {ind} has no inCase link"))

    for a in by_prop["hasAgent"]:
        if not typed(a.subject, "Participation"):
            out.append(Violation("agent_on_participation", (a.id,),
                                 f"hasAgent subject {a.subject} is not a Participation"))

    has_item = {a.subject for a in by_prop["hasStolenItem"]}
    for ind in sorted(i for i in types if typed(i, "TheftEvent") and i not in has_item):
        out.append(Violation("theft_has_stolen_item", typing_ids(ind, "TheftEvent"),
                             f"theft {ind} has no stolen item"))
    for a in by_prop["hasStolenItem"]:
        if not typed(a.object, "Item"):
            out.append(Violation("theft_item_typed", (a.id,), f"stolen item {a.object} is not an Item"))

    for a in by_prop["hasVictim"]:
        if not typed(a.subject, "Event"):
            out.append(Violation("victim_on_event", (a.id,), f"hasVictim subject {a.subject} is not an Event"))

    for a in kb.sorted_assertions():
        if a.kind == "DifferentFrom" and a.subject == a.object:
            out.append(Violation("different_from_merged", (a.id,),
                                 f"{a.subject} is declared different from itself"))
    return ValidationReport(kb.case_id, tuple(out))


def resolve_inconsistencies(kb: CaseKB, report: ValidationReport | None = None,
                            max_rounds: int = 20) -> tuple[CaseKB, list[dict]]:
    """Quarantine offending narrative assertions until the kb validates.

    Thefts without a stolen item are demoted to CrimeEvent. Metadata assertions
    are never touched, so their violations survive. The input kb is not modified.
    """
    out = CaseKB(kb.case_id, kb.schema, dict(kb.assertions), dict(kb.quarantine), kb.n_sentences)
    log_entries: list[dict] = []
    report = report or validate(out)
    for _ in range(max_rounds):
        acted = False
        for v in report.violations:
            for aid in v.assertion_ids:
                a = out.assertions.get(aid)
                if a is None or a.provenance != "narrative":
                    continue
                del out.assertions[aid]
                out.quarantine[aid] = a
                entry = {"constraint_id": v.constraint_id, "action": "quarantine", "assertion_id": aid}
                if v.constraint_id == "theft_has_stolen_item":
                    demoted = replace(a, object="CrimeEvent")
                    out.add([demoted])
                    entry.update(action="demote", replacement_id=demoted.id)
                log_entries.append(entry)
                acted = True
        report = validate(out)
        if not acted or report.consistent:
            break
    return out, log_entries


# -- indicators --------------------------------------------------------------------


def _ratio(num: float, den: float) -> float | None:
    return num / den if den else None


def ontology_indicators(kb: CaseKB | Iterable[CaseKB]) -> dict:
    """Axiom counts and derived ratios for one kb or a corpus of kbs."""
    kbs = [kb] if isinstance(kb, CaseKB) else list(kb)
    schema = kbs[0].schema if kbs else default_schema()
    n_ca = n_opa = n_dpa = n_diff = 0
    individuals: set[tuple[str, str]] = set()
    for k in kbs:
        for a in k:
            n_ca += a.kind == "ClassAssertion"
            n_opa += a.kind == "ObjectPropertyAssertion"
            n_dpa += a.kind == "DataPropertyAssertion"
            n_diff += a.kind == "DifferentFrom"
        individuals.update((k.case_id, i) for i in k.individuals())
    n_subclass = sum(1 for p in schema.classes.values() if p is not None)
    props = {**schema.object_properties, **schema.data_properties}
    n_domain = sum(1 for p in props.values() if p.get("domain"))
    n_range = sum(1 for p in props.values() if p.get("range"))
    n_abox = n_ca + n_opa + n_dpa
    n_l = n_abox + n_diff + n_subclass + n_domain + n_range
    n_ind = len(individuals)
    n_d = len(schema.classes) + len(props) + n_ind
    n_ann = len(schema.annotations)
    n_ax = n_l + n_d + n_ann
    n_c = len(schema.classes)
    obj, data = schema.object_properties, schema.data_properties
    return {
        "axioms": n_ax,
        "logical_axioms": n_l,
        "declaration_axioms": n_d,
        "annotation_axioms": n_ann,
        "logical_share": _ratio(n_l, n_ax),
        "declaration_share": _ratio(n_d, n_ax),
        "annotation_share": _ratio(n_ann, n_ax),
        "class_assertions": n_ca,
        "object_property_assertions": n_opa,
        "data_property_assertions": n_dpa,
        "abox_assertions": n_abox,
        "assertions_per_individual": _ratio(n_abox, n_ind),
        "object_assertions_per_individual": _ratio(n_opa, n_ind),
        "data_assertions_per_individual": _ratio(n_dpa, n_ind),
        "classes": n_c,
        "individuals": n_ind,
        "individuals_per_class": _ratio(n_ind, n_c) if n_ind else None,
        "obj_domain_coverage": _ratio(sum(1 for p in obj.values() if p.get("domain")), len(obj)),
        "obj_range_coverage": _ratio(sum(1 for p in obj.values() if p.get("range")), len(obj)),
        "data_domain_coverage": _ratio(sum(1 for p in data.values() if p.get("domain")), len(data)),
        "data_range_coverage": _ratio(sum(1 for p in data.values() if p.get("range")), len(data)),
    }

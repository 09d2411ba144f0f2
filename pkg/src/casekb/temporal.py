"""Temporal precedence graphs from narrative cues and domain axioms."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .ontology import Schema, default_schema


@dataclass(frozen=True)
class PrecedenceAxiom:
    axiom_id: str
    source_class: str
    target_class: str
    same_case: bool = True
    max_sentence_gap: int | None = None


@dataclass(frozen=True)
class CueConfig:
    inter_sentence: tuple[tuple[str, str], ...]  # (token, position)
    intra_sentence: dict = field(default_factory=dict, hash=False)
    time_predicate_cues: tuple[str, ...] = ()


@dataclass(frozen=True)
class PrecedenceEdge:
    source: str
    target: str
    support: str  # "cue" | "axiom" | "cue+axiom"
    cue: str | None = None
    axiom: str | None = None
    evidence: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"source": self.source, "target": self.target, "support": self.support,
                "cue": self.cue, "axiom": self.axiom, "evidence": list(self.evidence)}

    @classmethod
    def from_dict(cls, d: dict) -> PrecedenceEdge:
        return cls(d["source"], d["target"], d["support"], d.get("cue"), d.get("axiom"),
                   tuple(d.get("evidence", ())))


@dataclass
class TemporalGraph:
    case_id: str
    nodes: dict[str, dict]  # event id -> {"event_class", "predicate", "sentence_index"}
    edges: list[PrecedenceEdge]
    conflicts: list[dict] = field(default_factory=list)
    cycles: list[list[str]] = field(default_factory=list)

    def counts(self) -> dict[str, int]:
        out = {"cue": 0, "axiom": 0, "cue+axiom": 0}
        for e in self.edges:
            out[e.support] += 1
        return out

    def reachable(self, source: str, target: str) -> bool:
        adj: dict[str, list[str]] = {}
        for e in self.edges:
            adj.setdefault(e.source, []).append(e.target)
        seen, stack = {source}, [source]
        while stack:
            for nxt in adj.get(stack.pop(), ()):
                if nxt == target:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    def to_dict(self) -> dict:
        return {"case_id": self.case_id,
                "nodes": {k: self.nodes[k] for k in sorted(self.nodes)},
                "edges": [e.to_dict() for e in self.edges],
                "conflicts": self.conflicts, "cycles": self.cycles, "counts": self.counts()}


def _data(name: str) -> Path:
    return Path(str(resources.files("casekb") / "data" / name))


def load_axioms(path: str | Path | None = None, schema: Schema | None = None) -> list[PrecedenceAxiom]:
    schema = schema or default_schema()
    with open(path or _data("axioms.json"), encoding="utf-8") as fh:
        raw = json.load(fh)
    out = []
    for a in raw["axioms"]:
        for key in ("source", "target"):
            if a[key] not in schema.classes:
                raise ValueError(f"axiom {a['axiom_id']}: unknown class {a[key]}")
        out.append(PrecedenceAxiom(a["axiom_id"], a["source"], a["target"], a.get("same_case", True),
                                   a.get("max_sentence_gap")))
    return out


def load_cues(path: str | Path | None = None) -> CueConfig:
    with open(path or _data("cues.json"), encoding="utf-8") as fh:
        raw = json.load(fh)
    return CueConfig(tuple((c["token"], c["position"]) for c in raw["inter_sentence"]),
                     dict(raw.get("intra_sentence", {})), tuple(raw.get("time_predicate_cues", ())))


@lru_cache(maxsize=None)
def default_cues() -> CueConfig:
    return load_cues()


def find_cue(sentence: str, cues: CueConfig) -> str | None:
    """First configured inter-sentence cue present in ``sentence``."""
    text = sentence.strip().lower()
    for token, position in cues.inter_sentence:
        pattern = r"\b" + r"\s+".join(map(re.escape, token.split())) + r"\b"
        if position == "initial":
            if re.match(pattern, text):
                return token
        elif re.search(pattern, text):
            return token
    return None


def cue_edges(events, sentences: list[str], cues: CueConfig | None = None) -> list[PrecedenceEdge]:
    cues = cues or default_cues()
    heads = {e.sentence_index: e for e in events if e.sentence_head}
    ids = {e.event_id for e in events}
    out = []
    for i in range(len(sentences) - 1):
        token = find_cue(sentences[i + 1], cues)
        a, b = heads.get(i), heads.get(i + 1)
        if token and a and b and a.event_id != b.event_id:
            out.append(PrecedenceEdge(a.event_id, b.event_id, "cue", cue=token, evidence=(i, i + 1)))
    for e in events:
        text = sentences[e.sentence_index].lower() if e.sentence_index < len(sentences) else ""
        for op, other in e.time_links:
            if other not in ids or other == e.event_id:
                continue
            direction = cues.intra_sentence.get(op)
            token = op
            if op == "time":
                token = next((w for w in cues.time_predicate_cues if re.search(rf"\b{w}\b", text)), None)
                direction = "reverse" if token else None
            if direction == "forward":
                out.append(PrecedenceEdge(e.event_id, other, "cue", cue=token, evidence=(e.sentence_index,)))
            elif direction == "reverse":
                out.append(PrecedenceEdge(other, e.event_id, "cue", cue=token, evidence=(e.sentence_index,)))
    return out


def axiom_edges(events, axioms: list[PrecedenceAxiom] | None = None,
                schema: Schema | None = None) -> list[PrecedenceEdge]:
    schema = schema or default_schema()
    axioms = load_axioms(schema=schema) if axioms is None else axioms
    out = []
    for ax in axioms:
        sources = [e for e in events if schema.is_subclass(e.event_class, ax.source_class)]
        targets = [e for e in events if schema.is_subclass(e.event_class, ax.target_class)]
        for a in sources:
            for b in targets:
                if a.event_id == b.event_id or (ax.same_case and a.case_id != b.case_id):
                    continue
                if ax.max_sentence_gap is not None and abs(a.sentence_index - b.sentence_index) > ax.max_sentence_gap:
                    continue
                out.append(PrecedenceEdge(a.event_id, b.event_id, "axiom", axiom=ax.axiom_id,
                                          evidence=tuple(sorted({a.sentence_index, b.sentence_index}))))
    return out


def _find_cycles(nodes: list[str], edges: list[PrecedenceEdge]) -> list[list[str]]:
    """Strongly connected components with more than one node (Tarjan)."""
    adj: dict[str, list[str]] = {n: [] for n in nodes}
    for e in edges:
        adj.setdefault(e.source, []).append(e.target)
        adj.setdefault(e.target, [])
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    stack: list[str] = []
    on_stack: set[str] = set()
    comps: list[list[str]] = []
    counter = [0]

    def strong(v: str) -> None:
        index[v] = low[v] = counter[0]
        counter[0] += 1
        stack.append(v)
        on_stack.add(v)
        for w in sorted(adj[v]):
            if w not in index:
                strong(w)
                low[v] = min(low[v], low[w])
            elif w in on_stack:
                low[v] = min(low[v], index[w])
        if low[v] == index[v]:
            comp = []
            while True:
                w = stack.pop()
                on_stack.discard(w)
                comp.append(w)
                if w == v:
                    break
            if len(comp) > 1:
                comps.append(sorted(comp))

    for v in sorted(adj):
        if v not in index:
            strong(v)
    return sorted(comps)


def build_graph(cue: list[PrecedenceEdge], axiom: list[PrecedenceEdge], events=(),
                case_id: str = "") -> TemporalGraph:
    """Merge cue and axiom edges; cues win over opposing axioms."""
    merged: dict[tuple[str, str], PrecedenceEdge] = {}
    conflicts = []
    for e in cue:
        if e.source == e.target:
            continue
        key = (e.source, e.target)
        if key in merged:
            old = merged[key]
            merged[key] = PrecedenceEdge(old.source, old.target, "cue", old.cue,
                                         evidence=tuple(sorted(set(old.evidence) | set(e.evidence))))
        else:
            merged[key] = e
    for e in axiom:
        if e.source == e.target:
            continue
        key, rev = (e.source, e.target), (e.target, e.source)
        old = merged.get(key)
        if old is not None:
            if old.support == "cue":
                merged[key] = PrecedenceEdge(old.source, old.target, "cue+axiom", old.cue, e.axiom,
                                             tuple(sorted(set(old.evidence) | set(e.evidence))))
            continue
        opposing = merged.get(rev)
        if opposing is not None and opposing.support in ("cue", "cue+axiom"):
            conflicts.append({"kept": opposing.to_dict(), "dropped": e.to_dict(),
                              "reason": "narrative cue outranks domain axiom"})
            continue
        merged[key] = e
    edges = sorted(merged.values(), key=lambda x: (x.source, x.target))
    nodes = {ev.event_id: {"event_class": ev.event_class, "predicate": ev.predicate_sense,
                           "sentence_index": ev.sentence_index} for ev in events}
    for e in edges:
        for n in (e.source, e.target):
            nodes.setdefault(n, {"event_class": "Event", "predicate": "", "sentence_index": -1})
    if not case_id and events:
        case_id = events[0].case_id
    return TemporalGraph(case_id, nodes, edges, conflicts, _find_cycles(sorted(nodes), edges))


def _q(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: TemporalGraph) -> str:
    """Graphviz DOT: solid edges for cue support, dashed for axiom-only support."""
    lines = [f"digraph {_q(g.case_id or 'temporal')} {{", "  rankdir=LR;", "  node [shape=box];"]
    for nid in sorted(g.nodes, key=lambda n: (g.nodes[n]["sentence_index"], n)):
        info = g.nodes[nid]
        label = f"{info['event_class']}\\n{info['predicate']}\\ns{info['sentence_index']}"
        lines.append(f'  {_q(nid)} [label="{label}"];')
    for e in g.edges:
        style = "dashed" if e.support == "axiom" else "solid"
        tag = "+".join(x for x in (e.cue, e.axiom) if x)
        lines.append(f"  {_q(e.source)} -> {_q(e.target)} [style={style}, label={_q(tag)}, support={_q(e.support)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def build_case_graph(events, sentences: list[str], case_id: str = "", cues: CueConfig | None = None,
                     axioms: list[PrecedenceAxiom] | None = None, schema: Schema | None = None) -> TemporalGraph:
    events = [e for e in events if not e.negated]
    return build_graph(cue_edges(events, sentences, cues), axiom_edges(events, axioms, schema), events, case_id)

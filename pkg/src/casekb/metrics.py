"""Corpus-level extraction and ordering metrics computed from per-case outputs.

A case output is the JSON-level dict the pipeline writes: ``events`` (event
mention dicts), ``frames`` (frame dicts) and ``temporal`` (graph dict).
Edges supported by both a cue and an axiom count as cue edges.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from statistics import median

ENTRY_SLOTS = ("entry_point", "entry_method", "entry_structure", "entry_tool")
THEFT_SLOTS = ("stolen_items", "value_mentions")


def _frac(num: int, den: int) -> float | None:
    return num / den if den else None


@dataclass
class CorpusMetrics:
    total_cases: int = 0
    total_events: int = 0
    arg0_present: float | None = None
    arg1_present: float | None = None
    both_args: float | None = None
    participants_median: float | None = None
    participants_max: int | None = None
    tau: float = 0.80
    high_conf: float | None = None
    grounded_events: int = 0
    full_path: float | None = None
    lemma_fallback: float | None = None
    total_frames: int = 0
    entry_frames: int = 0
    theft_frames: int = 0
    slot_fill: dict[str, float | None] = field(default_factory=dict)
    total_edges: int = 0
    avg_edges_per_case: float | None = None
    cue_edges: int = 0
    axiom_edges: int = 0
    cue_fraction: float | None = None
    axiom_fraction: float | None = None
    bucket_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def compute_corpus_metrics(cases: list[dict], tau: float = 0.80) -> CorpusMetrics:
    events = [e for c in cases for e in c.get("events", [])]
    frames = [f for c in cases for f in c.get("frames", [])]
    edges = [e for c in cases for e in (c.get("temporal") or {}).get("edges", [])]
    n = len(events)
    m = CorpusMetrics(total_cases=len(cases), total_events=n, tau=tau)
    arg0 = sum(1 for e in events if ":ARG0" in e["args"])
    arg1 = sum(1 for e in events if ":ARG1" in e["args"])
    both = sum(1 for e in events if ":ARG0" in e["args"] and ":ARG1" in e["args"])
    m.arg0_present, m.arg1_present, m.both_args = _frac(arg0, n), _frac(arg1, n), _frac(both, n)

    per_case = [len(_participants(c.get("events", []))) for c in cases]
    if per_case:
        m.participants_median = float(median(per_case))
        m.participants_max = max(per_case)
    m.high_conf = _frac(sum(1 for e in events if e["confidence"] >= tau), n)

    grounded = [e for e in events if e.get("semantic_path")]
    m.grounded_events = len(grounded)
    full = sum(1 for e in grounded if e["semantic_path"]["path_kind"] == "full")
    m.full_path = _frac(full, len(grounded))
    m.lemma_fallback = _frac(len(grounded) - full, len(grounded))

    entry = [f for f in frames if f["kind"] == "Entry"]
    theft = [f for f in frames if f["kind"] == "Theft"]
    m.total_frames, m.entry_frames, m.theft_frames = len(frames), len(entry), len(theft)
    m.slot_fill = {s: _frac(sum(1 for f in entry if f["slots"].get(s)), len(entry)) for s in ENTRY_SLOTS}
    m.slot_fill.update({s: _frac(sum(1 for f in theft if f["slots"].get(s)), len(theft)) for s in THEFT_SLOTS})

    m.total_edges = len(edges)
    m.avg_edges_per_case = _frac(len(edges), len(cases))
    m.cue_edges = sum(1 for e in edges if e["support"] in ("cue", "cue+axiom"))
    m.axiom_edges = len(edges) - m.cue_edges
    m.cue_fraction, m.axiom_fraction = _frac(m.cue_edges, len(edges)), _frac(m.axiom_edges, len(edges))
    m.bucket_counts = dict(sorted(Counter(e["bucket"] for e in events).items()))
    return m


def _participants(events: list[dict]) -> set[str]:
    out = set()
    stack = [a for e in events for a in e["args"].values()]
    while stack:
        p = stack.pop()
        if p.get("members"):
            stack.extend(p["members"])
        elif not p.get("is_event"):
            out.add(p["entity_id"])
    return out


def sense_frequencies(cases: list[dict]) -> dict[str, Counter]:
    """Predicate sense counts per offense category (``offense`` metadata)."""
    out: dict[str, Counter] = {}
    for c in cases:
        cat = c.get("offense") or "Unknown"
        out.setdefault(cat, Counter()).update(e["predicate_sense"] for e in c.get("events", []))
    return out


def _pct(x: float | None) -> str:
    return "--" if x is None else f"{100 * x:.1f}%"


def render_table(m: CorpusMetrics) -> str:
    """Aligned plain-text report in the layout of the corpus results table."""
    med = "--" if m.participants_median is None else f"{m.participants_median:g}"
    mx = "--" if m.participants_max is None else str(m.participants_max)
    avg = "--" if m.avg_edges_per_case is None else f"{m.avg_edges_per_case:.2f}"
    rows = [
        ("Events", ""),
        ("  Total events", f"{m.total_events:,}"),
        ("  Cases", f"{m.total_cases:,}"),
        ("  ARG0 present", _pct(m.arg0_present)),
        ("  ARG1 present", _pct(m.arg1_present)),
        ("  ARG0 and ARG1", _pct(m.both_args)),
        ("  Participants/case (med./max.)", f"{med} / {mx}"),
        (f"  High confidence (>= {m.tau:.2f})", _pct(m.high_conf)),
        ("Semantic path", ""),
        ("  Full PB->VN->WN", _pct(m.full_path)),
        ("  Lemma fallback", _pct(m.lemma_fallback)),
        ("Frames", ""),
        ("  Total frames", f"{m.total_frames:,}"),
        ("  Entry point filled", _pct(m.slot_fill.get("entry_point"))),
        ("  Entry method filled", _pct(m.slot_fill.get("entry_method"))),
        ("  Entry structure filled", _pct(m.slot_fill.get("entry_structure"))),
        ("  Entry tool filled", _pct(m.slot_fill.get("entry_tool"))),
        ("  Stolen items filled", _pct(m.slot_fill.get("stolen_items"))),
        ("  Value mentions filled", _pct(m.slot_fill.get("value_mentions"))),
        ("Temporal ordering", ""),
        ("  Total edges", f"{m.total_edges:,}"),
        ("  Avg. edges/case", avg),
        ("  Cue edges", _pct(m.cue_fraction)),
        ("  Axiom edges", _pct(m.axiom_fraction)),
    ]
    width = max(len(r[0]) for r in rows)
    lines = [f"{'Metric'.ljust(width)}  Value", "-" * (width + 12)]
    lines += [f"{k.ljust(width)}  {v}".rstrip() for k, v in rows]
    lines += [
        "",
        "Notes: path fractions are over grounded events; entry slots are over Entry frames and",
        "theft slots over Theft frames; edges supported by both a cue and an axiom count as cue.",
    ]
    return "\n".join(lines) + "\n"

"""Brute-force recounts straight from the files a run leaves on disk.

Nothing here imports the metrics module; edges are counted from the DOT files.
"""

import json
import re
from pathlib import Path
from statistics import median

_DOT_EDGE = re.compile(r'^\s*"[^"]+" -> "[^"]+" \[style=(\w+), .*support="([^"]+)"\];$')


def _entities(arg, acc):
    if arg.get("members"):
        for m in arg["members"]:
            _entities(m, acc)
    elif not arg.get("is_event"):
        acc.add(arg["entity_id"])


def recount(out_dir: Path, tau: float = 0.80) -> dict:
    events, frames, per_case, styles = [], [], [], []
    cases = 0
    for case_dir in sorted(p.parent for p in Path(out_dir).glob("*/status.json")):
        status = json.loads((case_dir / "status.json").read_text())
        if status["status"] != "ok":
            continue
        cases += 1
        doc = json.loads((case_dir / "events.json").read_text())
        events += doc["events"]
        frames += doc["frames"]
        acc = set()
        for e in doc["events"]:
            for a in e["args"].values():
                _entities(a, acc)
        per_case.append(len(acc))
        for line in (case_dir / "temporal.dot").read_text().splitlines():
            m = _DOT_EDGE.match(line)
            if m:
                styles.append(m.groups())

    def frac(k, n):
        return k / n if n else None

    n = len(events)
    out = {
        "total_cases": cases,
        "total_events": n,
        "arg0_present": frac(sum(":ARG0" in e["args"] for e in events), n),
        "arg1_present": frac(sum(":ARG1" in e["args"] for e in events), n),
        "both_args": frac(sum(":ARG0" in e["args"] and ":ARG1" in e["args"] for e in events), n),
        "participants_median": float(median(per_case)) if per_case else None,
        "participants_max": max(per_case) if per_case else None,
        "high_conf": frac(sum(e["confidence"] >= tau for e in events), n),
    }
    grounded = [e for e in events if e["semantic_path"] is not None]
    full = [e for e in grounded if e["semantic_path"]["path_kind"] == "full"]
    out["full_path"] = frac(len(full), len(grounded))
    out["lemma_fallback"] = frac(len(grounded) - len(full), len(grounded))
    entry = [f for f in frames if f["kind"] == "Entry"]
    theft = [f for f in frames if f["kind"] == "Theft"]
    for slot in ("entry_point", "entry_method", "entry_structure", "entry_tool"):
        out[f"slot_fill.{slot}"] = frac(sum(bool(f["slots"][slot]) for f in entry), len(entry))
    for slot in ("stolen_items", "value_mentions"):
        out[f"slot_fill.{slot}"] = frac(sum(bool(f["slots"][slot]) for f in theft), len(theft))
    out["total_frames"] = len(frames)
    out["total_edges"] = len(styles)
    out["avg_edges_per_case"] = frac(len(styles), cases)
    solid = sum(style == "solid" for style, _ in styles)
    out["cue_fraction"] = frac(solid, len(styles))
    out["axiom_fraction"] = frac(len(styles) - solid, len(styles))
    assert all((style == "dashed") == (support == "axiom") for style, support in styles)
    return out


def flatten_metrics(m: dict) -> dict:
    flat = {k: v for k, v in m.items() if not isinstance(v, dict)}
    flat.update({f"slot_fill.{k}": v for k, v in m["slot_fill"].items()})
    return flat


def compare(system: dict, oracle: dict, places: int = 4) -> list[str]:
    """Keys where the two disagree at ``places`` decimals."""
    bad = []
    for k, want in oracle.items():
        got = system[k]
        if (got is None) != (want is None) or (want is not None and round(got, places) != round(want, places)):
            bad.append(f"{k}: {got} != {want}")
    return bad

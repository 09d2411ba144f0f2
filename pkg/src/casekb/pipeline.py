"""Per-case processing and corpus runs with isolated failures and deterministic outputs."""

from __future__ import annotations

import csv
import io
import json
import logging
import os
import shlex
import shutil
import subprocess
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .amr import AmrGraph, PenmanError, parse_penman, read_amr_file, split_blocks
from .config import Components, PipelineConfig, load_components
from .extraction import EventMention, Frame, extract_events, fill_frames, separate_unknown_actors
from .metrics import compute_corpus_metrics, render_table, sense_frequencies
from .ontology import CaseKB, build_kb, ontology_indicators, resolve_inconsistencies, validate
from .redaction import RedactedNarrative, RedactionAudit, audit_summary, normalize_ocr, redact, split_sentences
from .temporal import TemporalGraph, build_case_graph, export_dot
from .turtle import export_turtle

log = logging.getLogger(__name__)

NARRATIVE_SUFFIX = ".narrative.txt"


class CaseSkipped(Exception):
    pass


@dataclass(frozen=True)
class CaseBundle:
    case_id: str
    narrative: Path
    metadata: Path | None = None
    amr: Path | None = None

    @classmethod
    def from_narrative(cls, narrative: str | Path) -> CaseBundle:
        narrative = Path(narrative)
        case_id = narrative.name[: -len(NARRATIVE_SUFFIX)]
        meta = narrative.with_name(f"{case_id}.metadata.json")
        amr = narrative.with_name(f"{case_id}.amr.txt")
        return cls(case_id, narrative, meta if meta.exists() else None, amr if amr.exists() else None)


def discover_bundles(cases_dir: str | Path) -> list[CaseBundle]:
    """Every ``<id>.narrative.txt`` below ``cases_dir``, sorted by case id."""
    found = sorted(Path(cases_dir).rglob(f"*{NARRATIVE_SUFFIX}"))
    bundles = [CaseBundle.from_narrative(p) for p in found]
    ids = [b.case_id for b in bundles]
    dupes = sorted({i for i in ids if ids.count(i) > 1})
    if dupes:
        raise ValueError(f"duplicate case ids: {dupes}")
    return sorted(bundles, key=lambda b: b.case_id)


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def parse_with_adapter(command: str, sentences: list[str], timeout: float = 300.0) -> list[AmrGraph]:
    """Run an external text-to-AMR command: sentences on stdin, PENMAN blocks on stdout."""
    proc = subprocess.run(shlex.split(command), input="\n".join(sentences) + "\n", capture_output=True,
                          text=True, timeout=timeout, check=False)
    if proc.returncode != 0:
        raise RuntimeError(f"parser exited with {proc.returncode}: {proc.stderr.strip()[:200]}")
    return [parse_penman(b, i) for i, b in enumerate(split_blocks(proc.stdout))]


# -- stages ------------------------------------------------------------------------


def read_metadata(bundle: CaseBundle) -> dict:
    return json.loads(bundle.metadata.read_text(encoding="utf-8")) if bundle.metadata else {}


def redact_stage(bundle: CaseBundle, comp: Components) -> tuple[RedactedNarrative, RedactionAudit]:
    text = bundle.narrative.read_text(encoding="utf-8")
    return redact(normalize_ocr(text), read_metadata(bundle), comp.redaction, bundle.case_id)


def load_graphs(bundle: CaseBundle, comp: Components, sentences: list[str]) -> list[AmrGraph]:
    if bundle.amr is not None:
        graphs = read_amr_file(bundle.amr)
    elif comp.config.parser_command:
        graphs = parse_with_adapter(comp.config.parser_command, sentences)
    else:
        raise CaseSkipped("no AMR file and no parser adapter configured")
    if len(graphs) != len(sentences):
        raise ValueError(f"{len(sentences)} sentences but {len(graphs)} AMR graphs")
    return graphs


def extract_stage(bundle: CaseBundle, comp: Components, sentences: list[str],
                  pseudonyms: dict[str, str]) -> tuple[list[EventMention], list[Frame]]:
    events: list[EventMention] = []
    for g in load_graphs(bundle, comp, sentences):
        events.extend(extract_events(g, pseudonyms, comp.lexicon, comp.rules, comp.score, bundle.case_id))
    return events, fill_frames(events, comp.templates.get("stolen_item_roles"))


def kb_stage(case_id: str, events: list[EventMention], metadata: dict, pseudonyms: dict[str, str],
             comp: Components, n_sentences: int) -> tuple[CaseKB, dict]:
    """Merge narrative and metadata facts, validate, repair, re-validate."""
    different = separate_unknown_actors(events, pseudonyms)
    kb = build_kb(case_id, events, metadata, different, comp.schema, n_sentences, comp.templates)
    initial = validate(kb)
    resolved, resolution_log = resolve_inconsistencies(kb, initial)
    return resolved, {"initial": initial.to_dict(), "resolution_log": resolution_log,
                      "final": validate(resolved).to_dict()}


def temporal_stage(case_id: str, events: list[EventMention], sentences: list[str], comp: Components) -> TemporalGraph:
    return build_case_graph(events, sentences, case_id, comp.cues, list(comp.axioms), comp.schema)


def process_case(bundle: CaseBundle, comp: Components) -> dict:
    """Run every stage for one case and return its outputs as JSON-ready values.

    Raises :class:`CaseSkipped` when no AMR source is available.
    """
    metadata = read_metadata(bundle)
    narrative, audit = redact_stage(bundle, comp)
    sentences = narrative.sentence_texts()
    out = {"case_id": bundle.case_id, "offense": metadata.get("offense"),
           "redacted": narrative.text, "audit": audit.to_dict()}
    events, frames = extract_stage(bundle, comp, sentences, audit.pseudonym_map)
    kb, validation = kb_stage(bundle.case_id, events, metadata, audit.pseudonym_map, comp, len(sentences))
    graph = temporal_stage(bundle.case_id, events, sentences, comp)
    out.update(
        events=[e.to_dict() for e in events],
        frames=[f.to_dict() for f in frames],
        kb=kb.to_dict(),
        turtle=export_turtle(kb),
        validation=validation,
        temporal=graph.to_dict(),
        dot=export_dot(graph),
    )
    return out


def _case_files(result: dict) -> dict[str, str]:
    cid = result["case_id"]
    files = {"redacted.txt": result["redacted"], "audit.json": dump_json(result["audit"])}
    if "events" in result:
        files.update({
            "events.json": dump_json({"case_id": cid, "events": result["events"], "frames": result["frames"]}),
            "facts.json": dump_json(result["kb"]),
            "validation.json": dump_json(result["validation"]),
            f"{cid}.ttl": result["turtle"],
            "temporal.json": dump_json(result["temporal"]),
            "temporal.dot": result["dot"],
        })
    files["status.json"] = dump_json({"case_id": cid, "status": result["status"], "reason": result["reason"]})
    return files


def write_case(result: dict, out_root: Path) -> Path:
    """Write into a scratch directory, then swap it into place."""
    final = out_root / result["case_id"]
    scratch = out_root / f".{result['case_id']}.partial"
    shutil.rmtree(scratch, ignore_errors=True)
    scratch.mkdir(parents=True)
    for name, text in _case_files(result).items():
        (scratch / name).write_text(text, encoding="utf-8")
    if final.exists():
        shutil.rmtree(final)
    os.replace(scratch, final)
    return final


def run_case(bundle: CaseBundle, comp: Components, out_root: str | Path | None = None) -> dict:
    """Process one case; any stage error marks it failed instead of propagating."""
    try:
        result = process_case(bundle, comp)
        result.update(status="ok", reason=None)
    except CaseSkipped as exc:
        result = _partial(bundle, comp)
        result.update(status="skipped", reason=str(exc))
    except (PenmanError, ValueError, KeyError, OSError, RuntimeError, subprocess.SubprocessError) as exc:
        result = {"case_id": bundle.case_id, "offense": None, "redacted": "",
                  "audit": {"case_id": bundle.case_id, "substitutions": [], "pseudonym_map": {}},
                  "status": "failed", "reason": f"{type(exc).__name__}: {exc}"}
    if out_root is not None:
        write_case(result, Path(out_root))
    return result


def _partial(bundle: CaseBundle, comp: Components) -> dict:
    metadata = read_metadata(bundle)
    narrative, audit = redact_stage(bundle, comp)
    return {"case_id": bundle.case_id, "offense": metadata.get("offense"),
            "redacted": narrative.text, "audit": audit.to_dict()}


# -- file stages -------------------------------------------------------------------
#
# Each stage reads what the previous one wrote into out/<case_id>/ and adds its
# own files, so the chain redact, extract, validate, temporal reproduces `run`.

STAGES = ("redact", "extract", "validate", "temporal")


def _read(path: Path):
    return json.loads(path.read_text(encoding="utf-8"))


def _status(case_dir: Path, case_id: str, status: str, reason: str | None) -> None:
    _write(case_dir / "status.json", dump_json({"case_id": case_id, "status": status, "reason": reason}))


def _events_from(case_dir: Path) -> list[EventMention]:
    return [EventMention.from_dict(e) for e in _read(case_dir / "events.json")["events"]]


def _redacted_from(case_dir: Path, case_id: str) -> tuple[RedactedNarrative, RedactionAudit]:
    text = (case_dir / "redacted.txt").read_text(encoding="utf-8")
    audit = RedactionAudit.from_dict(_read(case_dir / "audit.json"))
    return RedactedNarrative(case_id, text, split_sentences(text)), audit


def run_stage(stage: str, bundle: CaseBundle, comp: Components, out_root: str | Path) -> dict:
    """Run one stage for one case against its output directory; failures are recorded, not raised."""
    if stage not in STAGES:
        raise ValueError(f"unknown stage {stage!r}")
    cid = bundle.case_id
    case_dir = Path(out_root) / cid
    case_dir.mkdir(parents=True, exist_ok=True)
    if stage != "redact" and (case_dir / "status.json").exists():
        prior = _read(case_dir / "status.json")
        if prior["status"] != "ok":
            return {"case_id": cid, "stage": stage, "status": prior["status"], "reason": prior["reason"]}
    status, reason = "ok", None
    try:
        if stage == "redact":
            narrative, audit = redact_stage(bundle, comp)
            _write(case_dir / "redacted.txt", narrative.text)
            _write(case_dir / "audit.json", dump_json(audit.to_dict()))
        elif stage == "extract":
            narrative, audit = _redacted_from(case_dir, cid)
            events, frames = extract_stage(bundle, comp, narrative.sentence_texts(), audit.pseudonym_map)
            _write(case_dir / "events.json", dump_json({"case_id": cid, "events": [e.to_dict() for e in events],
                                                        "frames": [f.to_dict() for f in frames]}))
        elif stage == "validate":
            narrative, audit = _redacted_from(case_dir, cid)
            kb, validation = kb_stage(cid, _events_from(case_dir), read_metadata(bundle), audit.pseudonym_map,
                                      comp, len(narrative.sentences))
            _write(case_dir / "facts.json", dump_json(kb.to_dict()))
            _write(case_dir / "validation.json", dump_json(validation))
            _write(case_dir / f"{cid}.ttl", export_turtle(kb))
        else:
            narrative, _ = _redacted_from(case_dir, cid)
            graph = temporal_stage(cid, _events_from(case_dir), narrative.sentence_texts(), comp)
            _write(case_dir / "temporal.json", dump_json(graph.to_dict()))
            _write(case_dir / "temporal.dot", export_dot(graph))
    except CaseSkipped as exc:
        status, reason = "skipped", str(exc)
    except (PenmanError, ValueError, KeyError, OSError, RuntimeError, subprocess.SubprocessError) as exc:
        status, reason = "failed", f"{type(exc).__name__}: {exc}"
    _status(case_dir, cid, status, reason)
    return {"case_id": cid, "stage": stage, "status": status, "reason": reason}


# -- corpus ------------------------------------------------------------------------

_WORKER: Components | None = None


def _init_worker(cfg: PipelineConfig) -> None:
    global _WORKER
    _WORKER = load_components(cfg)


def _work(args: tuple[CaseBundle, str]) -> dict:
    bundle, out_root = args
    return run_case(bundle, _WORKER, out_root)


def run_corpus(bundles: list[CaseBundle], cfg: PipelineConfig, out_root: str | Path,
               comp: Components | None = None) -> dict:
    """Process all bundles (in parallel when ``cfg.workers > 1``) and write the corpus report."""
    if not bundles:
        raise ValueError("no case bundles to process")
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    bundles = sorted(bundles, key=lambda b: b.case_id)
    if cfg.workers > 1 and len(bundles) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers, initializer=_init_worker, initargs=(cfg,)) as pool:
            results = list(pool.map(_work, [(b, str(out_root)) for b in bundles]))
    else:
        comp = comp or load_components(cfg)
        results = [run_case(b, comp, out_root) for b in bundles]
    return write_corpus_report(results, cfg, out_root, comp)


def corpus_report(results: list[dict], cfg: PipelineConfig, comp: Components | None = None) -> dict:
    ok = [r for r in results if r["status"] == "ok"]
    metrics = compute_corpus_metrics(ok, cfg.tau)
    schema = comp.schema if comp else None
    kbs = [CaseKB.from_dict(r["kb"], schema) for r in ok]
    freqs = sense_frequencies(ok)
    audits = [RedactionAudit.from_dict(r["audit"]) for r in results if r["status"] != "failed"]
    return {
        "config_digest": cfg.digest(),
        "tau": cfg.tau,
        "seed": cfg.seed,
        "metrics": metrics.to_dict(),
        "redaction": audit_summary(audits),
        "ontology": ontology_indicators(kbs) if kbs else None,
        "sense_frequencies": {cat: dict(sorted(c.items())) for cat, c in sorted(freqs.items())},
        "validation": {r["case_id"]: {"initial": [v["constraint_id"] for v in r["validation"]["initial"]["violations"]],
                                      "consistent_after_resolution": r["validation"]["final"]["consistent"]}
                       for r in ok},
        "cases": [{"case_id": r["case_id"], "status": r["status"], "reason": r["reason"]} for r in results],
    }


def render_report_text(report: dict) -> str:
    from .metrics import CorpusMetrics

    lines = [render_table(CorpusMetrics(**report["metrics"]))]
    red = report["redaction"]
    lines.append(f"{'Placeholder':<12} {'Total':>7} {'Avg./report':>12}")
    for row in red["rows"]:
        lines.append(f"{row['category']:<12} {row['total']:>7} {row['avg_per_report']:>12.2f}")
    lines.append(f"{'Total':<12} {red['total']:>7} {red['avg_per_report']:>12.2f}\n")
    bad = [c for c in report["cases"] if c["status"] != "ok"]
    ok = len(report["cases"]) - len(bad)
    lines.append(f"Cases: {ok} ok, {len(bad)} not processed")
    for c in bad:
        lines.append(f"  {c['case_id']:<16} {c['status']:<8} {c['reason']}")
    lines.append(f"Config digest: {report['config_digest']}")
    return "\n".join(lines) + "\n"


def _flatten(d: dict, prefix: str = "") -> list[tuple[str, object]]:
    rows = []
    for k, v in sorted(d.items()):
        if isinstance(v, dict):
            rows.extend(_flatten(v, f"{prefix}{k}."))
        else:
            rows.append((prefix + k, v))
    return rows


def metrics_csv(report: dict) -> str:
    """``metric,value`` rows: corpus metrics, redaction counts and case statuses."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "value"])
    for k, v in _flatten(report["metrics"]):
        w.writerow([k, "" if v is None else (f"{v:.4f}" if isinstance(v, float) else v)])
    for row in report["redaction"]["rows"]:
        w.writerow([f"redaction.{row['category']}", row["total"]])
    for c in report["cases"]:
        w.writerow([f"case.{c['case_id']}", c["status"]])
    return buf.getvalue()


def write_corpus_report(results: list[dict], cfg: PipelineConfig, out_root: Path,
                        comp: Components | None = None) -> dict:
    report = corpus_report(results, cfg, comp)
    _write(out_root / "metrics_report.json", dump_json(report))
    _write(out_root / "metrics_report.txt", render_report_text(report))
    _write(out_root / "metrics.csv", metrics_csv(report))
    summary = {
        "config_digest": report["config_digest"],
        "config": {k: v for k, v in cfg.to_dict().items() if k not in ("workers",) and not isinstance(v, str)},
        "cases": report["cases"],
        "counts": {s: sum(1 for c in report["cases"] if c["status"] == s) for s in ("ok", "skipped", "failed")},
    }
    _write(out_root / "run_summary.json", dump_json(summary))
    if cfg.figures:
        render_figures(results, report, cfg, out_root / "figures")
    return report


def render_figures(results: list[dict], report: dict, cfg: PipelineConfig, fig_dir: Path) -> list[Path]:
    from collections import Counter

    from .plots import confidence_histogram, sense_frequency_figure

    ok = [r for r in results if r["status"] == "ok"]
    trivial = {e["predicate_sense"] for r in ok for e in r["events"] if e["bucket"] == "context_admin"}
    freqs = {cat: Counter(c) for cat, c in report["sense_frequencies"].items()}
    return [
        sense_frequency_figure(freqs, trivial, fig_dir / "sense_frequency.png"),
        confidence_histogram([e["confidence"] for r in ok for e in r["events"]], cfg.tau,
                             fig_dir / "confidence_histogram.png"),
    ]


_REQUIRED = ("events.json", "facts.json", "validation.json", "temporal.json")


def load_case_outputs(out_root: str | Path) -> list[dict]:
    """Reassemble per-case results from a previous run's output directory."""
    results = []
    for status_file in sorted(Path(out_root).glob("*/status.json")):
        d = status_file.parent
        st = json.loads(status_file.read_text(encoding="utf-8"))
        r = {"case_id": st["case_id"], "status": st["status"], "reason": st["reason"],
             "audit": _read(d / "audit.json") if (d / "audit.json").exists()
             else {"case_id": st["case_id"], "substitutions": [], "pseudonym_map": {}}}
        if st["status"] == "ok":
            missing = [f for f in _REQUIRED if not (d / f).exists()]
            if missing:
                r.update(status="failed", reason=f"incomplete outputs: missing {', '.join(missing)}")
            else:
                ev = _read(d / "events.json")
                r.update(events=ev["events"], frames=ev["frames"], kb=_read(d / "facts.json"),
                         validation=_read(d / "validation.json"), temporal=_read(d / "temporal.json"))
                r["offense"] = _offense_from_kb(r["kb"])
        results.append(r)
    return results


def _offense_from_kb(kb: dict) -> str | None:
    for a in kb.get("assertions", []):
        if a.get("predicate") == "offenseTitle" and a.get("subject") == "case":
            return a["object"]
    return None

"""Command-line entry point: ``casekb <subcommand> [options]``.

Exit codes: 0 on success, 1 on a configuration or usage error, 2 when at
least one case failed.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .confidence import ConfigError
from .config import PipelineConfig, load_components
from .pipeline import (STAGES, discover_bundles, dump_json, load_case_outputs, render_report_text,
                       run_corpus, run_stage, write_corpus_report, _write)

EXIT_OK, EXIT_CONFIG, EXIT_FAILED = 0, 1, 2

log = logging.getLogger("casekb")


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # usage errors count as configuration errors
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", type=Path, help="JSON pipeline config (defaults to the bundled data files)")
    p.add_argument("--cases", type=Path, help="directory of case bundles (<id>.narrative.txt ...)")
    p.add_argument("--out", type=Path, help="output directory")
    p.add_argument("--tau", type=float, help="high-confidence threshold (default 0.80)")
    p.add_argument("--workers", type=int, help="parallel case workers (default 1)")
    p.add_argument("--format", choices=("json", "text"), default="text", help="stdout summary format")
    p.add_argument("--seed", type=int, help="seed for generated fixtures (default 42)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="casekb", description="Case-narrative event extraction and knowledge-base builder.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    stage_help = {
        "redact": "normalize and redact narratives (redacted.txt, audit.json)",
        "extract": "extract typed, scored events from AMR (events.json)",
        "validate": "build, validate and repair the case knowledge base (facts.json, validation.json, .ttl)",
        "temporal": "order events by cues and axioms (temporal.json, temporal.dot)",
    }
    for stage in STAGES:
        sub.add_parser(stage, parents=[common], help=stage_help[stage])
    sub.add_parser("run", parents=[common], help="full pipeline plus corpus report")
    sub.add_parser("report", parents=[common], help="corpus metrics and figures from an output directory")
    ev = sub.add_parser("eval-review", parents=[common], help="agreement and P/R/F1 from reviewer votes")
    ev.add_argument("--votes", type=Path, help="review_votes.csv (default: <cases>/review_votes.csv)")
    ev.add_argument("--system-answers", type=Path, help="system_answers.csv (default: next to the votes)")
    fx = sub.add_parser("fixtures", parents=[common], help="write the synthetic fixture corpus")
    fx.add_argument("--n-cases", type=int, default=10)
    return parser


def _config(args) -> PipelineConfig:
    return PipelineConfig.load(args.config, tau=args.tau, workers=args.workers, seed=args.seed)


def _need(args, *names: str) -> None:
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ConfigError(f"{args.command} requires {' '.join(missing)}")


def _emit(args, payload: dict, text: str) -> None:
    sys.stdout.write(dump_json(payload) if args.format == "json" else text)


def _cmd_stage(args) -> int:
    _need(args, "cases", "out")
    cfg = _config(args)
    comp = load_components(cfg)
    bundles = discover_bundles(args.cases)
    if not bundles:
        raise ConfigError(f"no case bundles under {args.cases}")
    rows = [run_stage(args.command, b, comp, args.out) for b in bundles]
    text = "".join(f"{r['case_id']:<16} {r['status']:<8} {r['reason'] or ''}\n" for r in rows)
    _emit(args, {"stage": args.command, "cases": rows}, text)
    return EXIT_FAILED if any(r["status"] == "failed" for r in rows) else EXIT_OK


def _report_exit(report: dict) -> int:
    return EXIT_FAILED if any(c["status"] == "failed" for c in report["cases"]) else EXIT_OK


def _cmd_run(args) -> int:
    _need(args, "cases", "out")
    cfg = _config(args)
    comp = load_components(cfg)
    bundles = discover_bundles(args.cases)
    if not bundles:
        raise ConfigError(f"no case bundles under {args.cases}")
    report = run_corpus(bundles, cfg, args.out, comp)
    _emit(args, report, render_report_text(report))
    return _report_exit(report)


def _cmd_report(args) -> int:
    _need(args, "out")
    cfg = _config(args)
    comp = load_components(cfg)
    results = load_case_outputs(args.out)
    if not results:
        raise ConfigError(f"no case outputs under {args.out}")
    report = write_corpus_report(results, cfg, args.out, comp)
    _emit(args, report, render_report_text(report))
    return _report_exit(report)


def _cmd_eval_review(args) -> int:
    from .plots import review_ambiguity_figure
    from .review import load_review_sheet, render_review, review_csv, review_report

    votes = args.votes or (args.cases / "review_votes.csv" if args.cases else None)
    if votes is None:
        raise ConfigError("eval-review requires --votes or --cases")
    if not votes.exists():
        raise ConfigError(f"{votes} does not exist")
    system = args.system_answers or votes.with_name("system_answers.csv")
    try:
        sheet = load_review_sheet(votes, system if system.exists() else None)
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad review sheet: {exc}") from None
    report = review_report(sheet)
    text = render_review(report)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        _write(args.out / "review_report.json", dump_json(report))
        _write(args.out / "review_report.txt", text)
        _write(args.out / "review_report.csv", review_csv(report))
        review_ambiguity_figure(report, args.out / "figures" / "review_ambiguity.png")
    _emit(args, report, text)
    return EXIT_OK


def _cmd_fixtures(args) -> int:
    from .fixtures import generate_fixture_corpus, write_review_fixture

    _need(args, "out")
    if args.n_cases < 1:
        raise ConfigError("--n-cases must be at least 1")
    seed = 42 if args.seed is None else args.seed
    cases = generate_fixture_corpus(seed, args.n_cases, args.out)
    write_review_fixture(args.out)
    rows = [{"case_id": c["case_id"], "offense": c["metadata"]["offense"]} for c in cases]
    text = "".join(f"{r['case_id']:<16} {r['offense']}\n" for r in rows)
    _emit(args, {"seed": seed, "cases": rows}, text)
    return EXIT_OK


_COMMANDS = {"run": _cmd_run, "report": _cmd_report, "eval-review": _cmd_eval_review, "fixtures": _cmd_fixtures}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    handler = _COMMANDS.get(args.command, _cmd_stage)
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"casekb: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:  # duplicate case ids, empty corpus
        print(f"casekb: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

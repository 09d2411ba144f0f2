"""Human-review summarization: majority labels, agreement, precision/recall/F1."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter, defaultdict
from dataclasses import asdict, dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

NOT_CLEAR = "Not clear"
Label = "str | frozenset[str]"


def threshold(n: int) -> int:
    return n // 2 + 1


def majority_label(selections: list, n: int | None = None, multi: bool = False):
    """Summary label for one (case, question).

    Single choice: the most frequent answer, ``Not clear`` on a tie.
    Multi choice (one set per reviewer): options with at least
    ``n // 2 + 1`` votes; ``Not clear`` when an option sits strictly between
    the minority and majority thresholds.
    """
    n = n if n is not None else len(selections)
    if n < 1:
        raise ValueError("need at least one reviewer")
    if not multi:
        counts = Counter(selections).most_common()
        if not counts:
            return NOT_CLEAR
        if len(counts) > 1 and counts[0][1] == counts[1][1]:
            return NOT_CLEAR
        return counts[0][0]
    t = threshold(n)
    counts = Counter(o for sel in selections for o in set(sel))
    if any(n - t < c < t for c in counts.values()):
        return NOT_CLEAR
    return frozenset(o for o, c in counts.items() if c >= t)


def is_clear(label) -> bool:
    return label != NOT_CLEAR


@dataclass(frozen=True)
class AgreementResult:
    outcomes: int
    clear_cases: int
    matches: int
    agreement: float | None  # percent
    not_clear_pct: float | None


def agreement(system: dict, human: dict) -> AgreementResult:
    clear = [c for c in human if is_clear(human[c])]
    matches = sum(1 for c in clear if _same(system.get(c), human[c]))
    total = len(human)
    return AgreementResult(total, len(clear), matches,
                           100.0 * matches / len(clear) if clear else None,
                           100.0 * (total - len(clear)) / total if total else None)


def _same(a, b) -> bool:
    if isinstance(b, frozenset):
        return a is not None and frozenset(a) == b
    return a == b


@dataclass(frozen=True)
class PRF:
    cases: int
    tp: int
    fp: int
    fn: int
    tn: int
    precision: float | None
    recall: float | None
    f1: float | None


def _prf(tp: int, fp: int, fn: int, tn: int, cases: int) -> PRF:
    p = 100.0 * tp / (tp + fp) if tp + fp else None
    r = 100.0 * tp / (tp + fn) if tp + fn else None
    f = 2 * p * r / (p + r) if p is not None and r is not None and p + r else None
    return PRF(cases, tp, fp, fn, tn, p, r, f)


def prf(system: dict, human: dict, positive: Callable[[str], bool]) -> PRF:
    """Binary scores over human-clear cases where the system gave an answer."""
    tp = fp = fn = tn = cases = 0
    for c, label in human.items():
        ans = system.get(c)
        if not is_clear(label) or ans is None or ans == NOT_CLEAR:
            continue
        cases += 1
        s, h = positive(ans), positive(label)
        tp += s and h
        fp += s and not h
        fn += h and not s
        tn += not s and not h
    return _prf(tp, fp, fn, tn, cases)


def prf_multi(system: dict, votes: dict, n: int, options: list[str]) -> PRF:
    """Per-option scores over options with a clear human majority, across all cases."""
    t = threshold(n)
    tp = fp = fn = tn = 0
    for c, selections in votes.items():
        if c not in system or system[c] == NOT_CLEAR:
            continue
        counts = Counter(o for sel in selections for o in set(sel))
        for o in options:
            v = counts.get(o, 0)
            if n - t < v < t:
                continue
            s, h = o in system[c], v >= t
            tp += s and h
            fp += s and not h
            fn += h and not s
            tn += not s and not h
    clear_cases = sum(1 for sel in votes.values() if is_clear(majority_label(sel, n, multi=True)))
    return _prf(tp, fp, fn, tn, clear_cases)


# -- sheets ------------------------------------------------------------------------


@lru_cache(maxsize=None)
def default_questions() -> dict:
    with open(Path(str(resources.files("casekb") / "data" / "questions.json")), encoding="utf-8") as fh:
        return json.load(fh)


@dataclass
class ReviewSheet:
    case_ids: list[str]
    reviewers: list[str]
    votes: dict[str, dict[str, list]]  # question -> case -> per-reviewer selection
    system: dict[str, dict]  # question -> case -> answer
    questions: dict

    @property
    def n(self) -> int:
        return len(self.reviewers)


def load_review_sheet(votes_csv: str | Path, system_csv: str | Path | None = None,
                      questions: dict | None = None) -> ReviewSheet:
    """Read ``review_votes.csv`` (case_id, question_id, reviewer_id, option) and system answers.

    Multi-choice questions take one row per selected option. System answers
    come from a CSV with columns case_id, question_id, answer (multi-choice
    answers separated by ``;``).
    """
    questions = questions or default_questions()
    qdefs = questions["questions"]
    raw: dict[tuple[str, str], dict[str, list[str]]] = defaultdict(lambda: defaultdict(list))
    cases, reviewers = set(), set()
    with open(votes_csv, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            q = row["question_id"]
            if q not in qdefs:
                raise ValueError(f"unknown question {q!r}")
            raw[(q, row["case_id"])][row["reviewer_id"]].append(row["option"].strip())
            cases.add(row["case_id"])
            reviewers.add(row["reviewer_id"])
    votes: dict[str, dict[str, list]] = defaultdict(dict)
    for (q, c), by_rev in sorted(raw.items()):
        if qdefs[q]["type"] == "multi":
            votes[q][c] = [frozenset(by_rev.get(r, [])) for r in sorted(reviewers)]
        else:
            for r, sel in by_rev.items():
                if len(sel) != 1:
                    raise ValueError(f"{q}/{c}: reviewer {r} gave {len(sel)} answers to a single-choice question")
            votes[q][c] = [by_rev[r][0] for r in sorted(by_rev)]
    system: dict[str, dict] = defaultdict(dict)
    if system_csv:
        with open(system_csv, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                q, ans = row["question_id"], row["answer"].strip()
                if qdefs[q]["type"] == "multi" and ans != NOT_CLEAR:
                    ans = frozenset(a.strip() for a in ans.split(";") if a.strip())
                system[q][row["case_id"]] = ans
    return ReviewSheet(sorted(cases), sorted(reviewers), dict(votes), dict(system), questions)


def _positive(qdef: dict) -> Callable[[str], bool] | None:
    if "positive" in qdef:
        pos = set(qdef["positive"])
        return lambda a: a in pos
    if "positive_unless" in qdef:
        neg = set(qdef["positive_unless"])
        return lambda a: a not in neg
    return None


def review_report(sheet: ReviewSheet) -> dict:
    """Agreement rows for every question and P/R/F1 rows where a positive class is defined."""
    agreement_rows, prf_rows = [], []
    for q in sorted(sheet.votes, key=lambda k: int(k[1:])):
        qdef = sheet.questions["questions"][q]
        multi = qdef["type"] == "multi"
        human = {c: majority_label(sel, sheet.n, multi) for c, sel in sheet.votes[q].items()}
        system = sheet.system.get(q, {})
        ag = agreement(system, human)
        agreement_rows.append({"question": q, "title": qdef["title"], **asdict(ag),
                               "human_labels": {c: _label_json(v) for c, v in sorted(human.items())}})
        score = None
        if multi:
            score = prf_multi(system, sheet.votes[q], sheet.n, qdef["options"])
        elif _positive(qdef):
            score = prf(system, human, _positive(qdef))
        if score is not None:
            prf_rows.append({"question": q, "title": qdef.get("prf_label", qdef["title"]), **asdict(score)})
    return {"reviewers": sheet.n, "threshold": threshold(sheet.n), "cases": len(sheet.case_ids),
            "agreement": agreement_rows, "prf": prf_rows}


def _label_json(v):
    return sorted(v) if isinstance(v, frozenset) else v


def _fmt(x: float | None) -> str:
    return "--" if x is None else f"{x:.1f}%"


def render_review(report: dict) -> str:
    lines = [f"{'Question':<28} {'Clear':>5} {'Agreement':>10} {'Not clear':>10}"]
    for r in report["agreement"]:
        lines.append(f"{r['question'] + ' ' + r['title']:<28} {r['clear_cases']:>5} "
                     f"{_fmt(r['agreement']):>10} {_fmt(r['not_clear_pct']):>10}")
    lines += ["", f"{'Metric':<28} {'Cases':>5} {'Precision':>10} {'Recall':>8} {'F1':>8}"]
    for r in report["prf"]:
        lines.append(f"{r['question'] + ' ' + r['title']:<28} {r['cases']:>5} {_fmt(r['precision']):>10} "
                     f"{_fmt(r['recall']):>8} {_fmt(r['f1']):>8}")
    return "\n".join(lines) + "\n"


def review_csv(report: dict) -> str:
    """One delimited row per question with agreement and, where defined, P/R/F1."""
    scores = {r["question"]: r for r in report["prf"]}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["question", "title", "clear_cases", "agreement", "not_clear_pct",
                "prf_cases", "precision", "recall", "f1"])
    cell = lambda x: "" if x is None else f"{x:.1f}"  # noqa: E731
    for r in report["agreement"]:
        s = scores.get(r["question"], {})
        w.writerow([r["question"], r["title"], r["clear_cases"], cell(r["agreement"]), cell(r["not_clear_pct"]),
                    s.get("cases", ""), cell(s.get("precision")), cell(s.get("recall")), cell(s.get("f1"))])
    return buf.getvalue()

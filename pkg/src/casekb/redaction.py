"""OCR clean-up, rule-based redaction with audit logs, pseudonyms and sentence splitting."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

CATEGORIES = ("PERSON", "DATE", "ORG", "ADDRESS", "GPE", "PLATE", "LOC", "PHONE")
PRIORITY = ("PERSON", "ADDRESS", "ORG", "GPE", "LOC", "DATE", "PLATE", "PHONE")
SHORTHAND = frozenset({"V", "S", "W", "I"})
PLACEHOLDER_RE = re.compile(r"\[([A-Z]+)_(\d+)\]")
_PROTECTED_RE = re.compile(r"\[[A-Z]+_\d+\]|\b[VSWI]\d?\b")
ABBREVIATIONS = frozenset({
    "mr", "mrs", "ms", "dr", "st", "ave", "rd", "blvd", "apt", "no", "ofc", "sgt", "det", "inv",
    "lt", "capt", "jr", "sr", "approx", "vs", "etc", "e.g", "i.e", "a.m", "p.m", "u.s",
})
_ROLE_WORDS = {
    "victim": "Victim", "complainant": "Victim", "suspect": "Suspect", "witness": "Witness",
    "officer": "Officer", "reporting_officer": "Officer",
}
_TITLE_RE = re.compile(r"(?:Officer|Ofc\.|Sgt\.|Det\.|Inv\.|Investigator|Sergeant|Detective)\s+$")


class RedactionConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RedactionRuleSet:
    patterns: tuple[tuple[str, re.Pattern], ...]
    dictionary: tuple[tuple[str, tuple[str, ...]], ...]
    metadata_fields: tuple[tuple[str, str], ...]

    @classmethod
    def from_dict(cls, raw: dict) -> RedactionRuleSet:
        patterns = []
        for p in raw.get("patterns", []):
            cls._check_category(p["category"])
            try:
                rx = re.compile(p["pattern"])
            except re.error as exc:
                raise RedactionConfigError(f"invalid pattern for {p['category']}: {exc}") from None
            if rx.groups > 1:
                raise RedactionConfigError("patterns may use at most one capturing group")
            patterns.append((p["category"], rx))
        dictionary = []
        for d in raw.get("dictionary", []):
            cls._check_category(d["category"])
            dictionary.append((d["category"], tuple(d["phrases"])))
        fields = []
        for m in raw.get("metadata_fields", []):
            cls._check_category(m["category"])
            fields.append((m["category"], m["field"]))
        return cls(tuple(patterns), tuple(dictionary), tuple(fields))

    @staticmethod
    def _check_category(cat: str) -> None:
        if cat not in CATEGORIES:
            raise RedactionConfigError(f"unknown placeholder category {cat!r}")

    @classmethod
    def load(cls, path: str | Path) -> RedactionRuleSet:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


@lru_cache(maxsize=None)
def default_redaction_rules() -> RedactionRuleSet:
    return RedactionRuleSet.load(Path(str(resources.files("casekb") / "data" / "redaction_rules.json")))


@dataclass(frozen=True)
class Substitution:
    category: str
    placeholder: str
    start: int
    end: int
    source: str
    surface: str
    redacted_start: int
    redacted_end: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class RedactionAudit:
    case_id: str
    substitutions: list[Substitution] = field(default_factory=list)
    pseudonym_map: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"case_id": self.case_id,
                "substitutions": [s.to_dict() for s in self.substitutions],
                "pseudonym_map": dict(sorted(self.pseudonym_map.items()))}

    @classmethod
    def from_dict(cls, d: dict) -> RedactionAudit:
        return cls(d["case_id"], [Substitution(**s) for s in d["substitutions"]], dict(d["pseudonym_map"]))


@dataclass
class RedactedNarrative:
    case_id: str
    text: str
    sentences: list[tuple[int, int, int]]

    def sentence_texts(self) -> list[str]:
        return [self.text[s:e] for _, s, e in self.sentences]


# -- OCR -------------------------------------------------------------------------


def _is_uppercase_only(text: str) -> bool:
    body = _PROTECTED_RE.sub(" ", text)
    letters = [c for c in body if c.isalpha()]
    return bool(letters) and not any(c.islower() for c in letters)


def normalize_ocr(text: str) -> str:
    """Fix OCR confusions and sentence-case narratives typed in capitals.

    ``|`` becomes ``I``. Placeholders and the shorthand tokens V, S, W and I
    keep their case.
    """
    text = text.replace("|", "I")
    if not _is_uppercase_only(text):
        return text
    parts = _PROTECTED_RE.split(text)
    keep = _PROTECTED_RE.findall(text)
    out = []
    for i, part in enumerate(parts):
        out.append(part.lower())
        if i < len(keep):
            out.append(keep[i])
    chars = list("".join(out))
    capitalize = True
    for i, ch in enumerate(chars):
        if capitalize and ch.isalpha():
            chars[i] = ch.upper()
            capitalize = False
        elif capitalize and ch == "[":
            capitalize = False
        elif ch in ".!?" and (i + 1 == len(chars) or chars[i + 1].isspace()):
            capitalize = True
    return "".join(chars)


# -- sentences ---------------------------------------------------------------------


_BOUNDARY_RE = re.compile(r"[.!?]+[\"')\]]*(?=\s+(?:[A-Z\[\"(]|\d))")


def split_sentences(text: str) -> list[tuple[int, int, int]]:
    """(index, start, end) spans; ``end`` is exclusive and whitespace is trimmed."""
    spans = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        if m.group().startswith(".") and _is_abbreviation(text, m.start()):
            continue
        spans.append((start, m.end()))
        start = m.end()
    spans.append((start, len(text)))
    out = []
    for s, e in spans:
        while s < e and text[s].isspace():
            s += 1
        while e > s and text[e - 1].isspace():
            e -= 1
        if s < e:
            out.append((len(out), s, e))
    return out


def _is_abbreviation(text: str, dot: int) -> bool:
    m = re.search(r"([A-Za-z][A-Za-z.]*)$", text[:dot])
    if not m:
        return False
    word = m.group(1)
    return word.lower() in ABBREVIATIONS or (len(word) == 1 and word.isupper() and word not in SHORTHAND)


# -- redaction ---------------------------------------------------------------------


@dataclass(frozen=True)
class _Candidate:
    start: int
    end: int
    category: str
    source: str
    key: str


def _norm(surface: str) -> str:
    return " ".join(surface.split()).lower()


def _literal_finditer(phrase: str, text: str, ignore_case: bool):
    flags = re.IGNORECASE if ignore_case else 0
    pattern = r"(?<!\w)" + r"\s+".join(map(re.escape, phrase.split())) + r"(?!\w)"
    return re.finditer(pattern, text, flags)


def _metadata_values(value) -> Iterable[tuple[str, str]]:
    """(surface, canonical key) pairs from a metadata field value."""
    if isinstance(value, str):
        yield value, _norm(value)
    elif isinstance(value, dict) and value.get("name"):
        canonical = _norm(value["name"])
        yield value["name"], canonical
        for alias in value.get("aliases", []):
            yield alias, canonical
    elif isinstance(value, (list, tuple)):
        for v in value:
            yield from _metadata_values(v)


def _candidates(text: str, metadata: dict, rules: RedactionRuleSet) -> list[_Candidate]:
    out = []
    for cat, rx in rules.patterns:
        for m in rx.finditer(text):
            g = 1 if rx.groups else 0
            if m.start(g) < 0 or m.end(g) == m.start(g):
                continue
            out.append(_Candidate(m.start(g), m.end(g), cat, "pattern", _norm(m.group(g))))
    for cat, phrases in rules.dictionary:
        for phrase in phrases:
            for m in _literal_finditer(phrase, text, False):
                out.append(_Candidate(m.start(), m.end(), cat, "dictionary", _norm(m.group())))
    for cat, fld in rules.metadata_fields:
        for surface, canonical in _metadata_values(metadata.get(fld)):
            if not surface.strip():
                continue
            for m in _literal_finditer(surface, text, True):
                out.append(_Candidate(m.start(), m.end(), cat, "metadata", canonical))
    return out


def _select(cands: list[_Candidate], protected: list[tuple[int, int]], text: str) -> list[_Candidate]:
    def overlaps(a0, a1, b0, b1):
        return a0 < b1 and b0 < a1

    rank = {c: i for i, c in enumerate(PRIORITY)}
    pool = [c for c in cands
            if text[c.start:c.end] not in SHORTHAND
            and not any(overlaps(c.start, c.end, p0, p1) for p0, p1 in protected)]
    # metadata matches outrank other sources for the same span
    src = {"metadata": 0, "dictionary": 1, "pattern": 2}
    pool.sort(key=lambda c: (-(c.end - c.start), rank[c.category], c.start, src[c.source]))
    chosen: list[_Candidate] = []
    for c in pool:
        if not any(overlaps(c.start, c.end, k.start, k.end) for k in chosen):
            chosen.append(c)
    return sorted(chosen, key=lambda c: c.start)


def redact(text: str, metadata: dict | None = None, rules: RedactionRuleSet | None = None,
           case_id: str = "") -> tuple[RedactedNarrative, RedactionAudit]:
    metadata = metadata or {}
    rules = rules or default_redaction_rules()
    case_id = case_id or str(metadata.get("case_id", ""))
    protected = [m.span() for m in PLACEHOLDER_RE.finditer(text)]
    counters = {c: 0 for c in CATEGORIES}
    for m in PLACEHOLDER_RE.finditer(text):
        if m.group(1) in counters:
            counters[m.group(1)] = max(counters[m.group(1)], int(m.group(2)))

    labels: dict[tuple[str, str], str] = {}
    pieces, subs = [], []
    pos = shift = 0
    for c in _select(_candidates(text, metadata, rules), protected, text):
        label = labels.get((c.category, c.key))
        if label is None:
            counters[c.category] += 1
            label = f"{c.category}_{counters[c.category]}"
            labels[(c.category, c.key)] = label
        token = f"[{label}]"
        pieces.append(text[pos:c.start])
        r_start = c.start + shift
        pieces.append(token)
        subs.append(Substitution(c.category, label, c.start, c.end, c.source, text[c.start:c.end],
                                 r_start, r_start + len(token)))
        shift += len(token) - (c.end - c.start)
        pos = c.end
    pieces.append(text[pos:])
    redacted = "".join(pieces)
    audit = RedactionAudit(case_id, subs, assign_pseudonyms(text, redacted, subs, metadata))
    return RedactedNarrative(case_id, redacted, split_sentences(redacted)), audit


def reverse_redaction(redacted: str, audit: RedactionAudit) -> str:
    """Undo the substitutions recorded in ``audit``."""
    out = redacted
    for s in sorted(audit.substitutions, key=lambda s: s.redacted_start, reverse=True):
        if out[s.redacted_start:s.redacted_end] != f"[{s.placeholder}]":
            raise ValueError(f"audit does not match text at {s.redacted_start}")
        out = out[:s.redacted_start] + s.surface + out[s.redacted_end:]
    return out


# -- pseudonyms ------------------------------------------------------------------


def _metadata_roles(metadata: dict) -> dict[str, str]:
    roles = {}
    for person in metadata.get("persons", []) or []:
        if not isinstance(person, dict) or not person.get("role"):
            continue
        role = _ROLE_WORDS.get(str(person["role"]).lower().replace(" ", "_"))
        if role:
            roles[_norm(person["name"])] = role
            for alias in person.get("aliases", []):
                roles[_norm(alias)] = role
    return roles


def _adjacent_shorthand(original: str, s: Substitution) -> str | None:
    after = re.match(r"\s*\(\s*([VSW])\d?\s*\)", original[s.end:])
    before = re.search(r"(?<!\w)([VSW])\d?\s*$", original[:s.start])
    m = after or before
    return {"V": "Victim", "S": "Suspect", "W": "Witness"}[m.group(1)] if m else None


def assign_pseudonyms(original: str, redacted: str, subs: list[Substitution], metadata: dict) -> dict[str, str]:
    """Placeholder (and shorthand token) -> role label such as Victim_1 or Suspect_Unknown."""
    meta_roles = _metadata_roles(metadata)
    roles: dict[str, str] = {}
    for s in subs:
        if s.category != "PERSON" or s.placeholder in roles:
            continue
        role = meta_roles.get(_norm(s.surface)) or _adjacent_shorthand(original, s)
        if role is None and _TITLE_RE.search(original[:s.start]):
            role = "Officer"
        roles[s.placeholder] = role or "Unknown_Person"

    uses_i = re.search(r"(?<!\w)I(?!\w)", redacted) is not None
    counts = {"Victim": 0, "Suspect": 0, "Witness": 0, "Officer": 1 if uses_i else 0}
    out: dict[str, str] = {}
    for ph, role in roles.items():
        if role == "Unknown_Person":
            out[ph] = role
            continue
        counts[role] += 1
        n = counts[role]
        out[ph] = ("Officer" if n == 1 else f"Officer_{n}") if role == "Officer" else f"{role}_{n}"

    numbered = sorted(set(re.findall(r"(?<!\w)S(\d)(?!\w)", redacted)), key=int)
    for k, digit in enumerate(numbered, 1):
        out[f"S{digit}"] = f"Suspect_Unknown_{k}"
    for token, role in (("V", "Victim"), ("S", "Suspect"), ("W", "Witness")):
        if not re.search(rf"(?<!\w){token}(?!\w)", redacted):
            continue
        named = sorted(v for v in out.values() if v.startswith(role + "_") and "Unknown" not in v)
        if len(named) == 1:
            out[token] = named[0]
        elif not named:
            out[token] = "Suspect_Unknown" if role == "Suspect" else f"{role}_1"
    if uses_i:
        out["I"] = "Officer"
    return out


def audit_summary(audits: list[RedactionAudit]) -> dict:
    """Placeholder totals and per-report averages by category."""
    n = len(audits)
    totals = {c: 0 for c in CATEGORIES}
    for a in audits:
        for s in a.substitutions:
            totals[s.category] += 1
    rows = [{"category": c, "total": totals[c], "avg_per_report": totals[c] / n if n else 0.0}
            for c in CATEGORIES]
    grand = sum(totals.values())
    return {"reports": n, "rows": rows, "total": grand, "avg_per_report": grand / n if n else 0.0}

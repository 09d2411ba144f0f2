"""PropBank / SemLink / VerbNet / WordNet lookups.

Two loaders produce the same in-memory :class:`Lexicon`:

* :meth:`Lexicon.from_snapshot` reads the bundled TSV snapshot
  (``synsets.tsv``, ``hypernyms.tsv``, ``semlink.tsv``, ``propbank.tsv``);
* :meth:`Lexicon.from_wordnet_db` reads a WordNet 3.0 ``dict/`` directory
  (``index.<pos>`` + ``data.<pos>``) and takes PropBank/SemLink tables
  from TSV files.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

log = logging.getLogger(__name__)

TYPE_TAGS = ("property_item", "structure", "structure_part", "vehicle", "vehicle_part",
             "person", "location", "weapon")

_SENSE_LABEL_RE = re.compile(r"^(?P<lemma>.+)-(?P<num>\d{2})$")
_SYNSET_ID_RE = re.compile(r"^[^.\s]+\.[nvasr]\.\d{2}$")


class LexiconError(ValueError):
    pass


class UnknownPredicate(LookupError):
    """The predicate lemma is absent from every loaded resource."""


@dataclass(frozen=True)
class PredicateSense:
    lemma: str
    sense_id: str
    roleset: tuple[str, ...] = ()


@dataclass(frozen=True)
class Synset:
    id: str
    lemmas: tuple[str, ...]
    pos: str
    hypernyms: tuple[str, ...] = ()


@dataclass(frozen=True)
class SemanticPath:
    sense: PredicateSense | None
    verbnet_classes: tuple[str, ...]
    wordnet_synsets: tuple[str, ...]
    path_kind: str  # "full" | "lemma_fallback"

    def to_dict(self) -> dict:
        return {
            "path_kind": self.path_kind,
            "sense": self.sense.sense_id if self.sense else None,
            "verbnet_classes": list(self.verbnet_classes),
            "wordnet_synsets": list(self.wordnet_synsets),
        }

    @classmethod
    def from_dict(cls, d: dict) -> SemanticPath:
        sense = None
        if d.get("sense"):
            sense = PredicateSense(d["sense"].rsplit(".", 1)[0], d["sense"])
        return cls(sense, tuple(d["verbnet_classes"]), tuple(d["wordnet_synsets"]), d["path_kind"])


def split_sense_label(label: str) -> tuple[str, str]:
    """``steal-01`` -> (``steal``, ``steal.01``); ``turn-over-12`` -> (``turn over``, ``turn_over.12``)."""
    m = _SENSE_LABEL_RE.match(label)
    if not m:
        raise ValueError(f"not an AMR sense label: {label!r}")
    lemma = m.group("lemma").replace("-", " ")
    return lemma, f"{lemma.replace(' ', '_')}.{m.group('num')}"


def _key(lemma: str) -> str:
    return lemma.strip().lower().replace(" ", "_").replace("-", "_")


@dataclass
class Lexicon:
    synsets: dict[str, Synset]
    propbank: dict[str, PredicateSense]
    semlink: dict[str, tuple[str, ...]]
    type_anchors: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self._by_lemma: dict[str, list[str]] = {}
        for sid in sorted(self.synsets):
            for lemma in self.synsets[sid].lemmas:
                self._by_lemma.setdefault(_key(lemma), []).append(sid)
        self._pb_lemmas: dict[str, list[str]] = {}
        for sense_id in sorted(set(self.propbank) | set(self.semlink)):
            self._pb_lemmas.setdefault(sense_id.rsplit(".", 1)[0], []).append(sense_id)
        self._closure: dict[str, frozenset[str]] = {}
        self._check_acyclic()

    # -- loading ---------------------------------------------------------------

    @classmethod
    def from_snapshot(cls, directory: str | Path | None = None, anchors: str | Path | None = None) -> Lexicon:
        base = Path(directory) if directory else _data_dir() / "lexicon"
        synset_rows = _read_tsv(base / "synsets.tsv", 3)
        hypers: dict[str, list[str]] = {}
        for child, parent in _read_tsv(base / "hypernyms.tsv", 2):
            hypers.setdefault(child, []).append(parent)
        synsets = {}
        for sid, lemmas, pos in synset_rows:
            if sid in synsets:
                raise LexiconError(f"duplicate synset {sid}")
            synsets[sid] = Synset(sid, tuple(x for x in lemmas.split(",") if x), pos,
                                  tuple(hypers.get(sid, ())))
        missing = {p for ps in hypers.values() for p in ps} - set(synsets)
        if missing:
            raise LexiconError(f"hypernym targets without synset rows: {sorted(missing)[:5]}")
        propbank, semlink = _read_pb_semlink(base / "propbank.tsv", base / "semlink.tsv")
        return cls(synsets, propbank, semlink, _read_anchors(anchors or base / "type_anchors.json"))

    @classmethod
    def from_wordnet_db(cls, dict_dir: str | Path, propbank_tsv: str | Path, semlink_tsv: str | Path,
                        anchors: str | Path | None = None) -> Lexicon:
        synsets = read_wordnet_db(dict_dir)
        propbank, semlink = _read_pb_semlink(Path(propbank_tsv), Path(semlink_tsv))
        return cls(synsets, propbank, semlink,
                   _read_anchors(anchors or _data_dir() / "lexicon" / "type_anchors.json"))

    def fingerprint(self) -> str:
        """Content hash; identical source files give identical fingerprints."""
        payload = {
            "synsets": [[s.id, list(s.lemmas), s.pos, list(s.hypernyms)] for s in
                        (self.synsets[k] for k in sorted(self.synsets))],
            "propbank": {k: list(v.roleset) for k, v in sorted(self.propbank.items())},
            "semlink": {k: list(v) for k, v in sorted(self.semlink.items())},
            "anchors": {k: list(v) for k, v in sorted(self.type_anchors.items())},
        }
        return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()

    def _check_acyclic(self) -> None:
        state: dict[str, int] = {}
        for start in self.synsets:
            if state.get(start):
                continue
            stack = [(start, iter(self.synsets[start].hypernyms))]
            state[start] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    state[node] = 2
                    stack.pop()
                elif state.get(nxt) == 1:
                    raise LexiconError(f"hypernym cycle through {nxt}")
                elif not state.get(nxt):
                    state[nxt] = 1
                    stack.append((nxt, iter(self.synsets[nxt].hypernyms)))

    # -- lookups ---------------------------------------------------------------

    def synsets_for(self, lemma: str, pos: str | None = None) -> list[str]:
        ids = self._by_lemma.get(_key(lemma), [])
        if pos:
            ids = [s for s in ids if self.synsets[s].pos == pos]
        return list(ids)

    def _lookup_lemma(self, lemma: str, pos: str | None) -> tuple[str, list[str]]:
        """Multi-word lemmas fall back to their first token."""
        found = self.synsets_for(lemma, pos)
        if not found and " " in lemma.strip():
            head = lemma.split()[0]
            return head, self.synsets_for(head, pos)
        return lemma, found

    def hypernym_closure(self, synset_id: str) -> frozenset[str]:
        """``synset_id`` plus all transitive hypernyms."""
        cached = self._closure.get(synset_id)
        if cached is not None:
            return cached
        seen = {synset_id}
        stack = [synset_id]
        while stack:
            for parent in self.synsets[stack.pop()].hypernyms:
                if parent not in seen:
                    seen.add(parent)
                    stack.append(parent)
        result = frozenset(seen)
        self._closure[synset_id] = result
        return result

    def _resolve(self, term: str) -> set[str]:
        if term in self.synsets:
            return {term}
        if term in self.type_anchors:
            return set(self.type_anchors[term])
        return set(self._lookup_lemma(term, None)[1])

    def is_a(self, word_or_synset: str, target_type: str) -> bool:
        """True iff some synset of the word has the target among its hypernyms (or is it).

        ``target_type`` may be a synset id, a configured type tag, or a word.
        """
        if word_or_synset in self.synsets:
            sources = {word_or_synset}
        else:
            sources = set(self._lookup_lemma(word_or_synset, None)[1])
        if not sources:
            log.debug("is_a miss: %r not in lexicon", word_or_synset)
            return False
        targets = self._resolve(target_type)
        return any(self.hypernym_closure(s) & targets for s in sources)

    def type_argument(self, lemma: str) -> frozenset[str]:
        """Semantic type tags of a noun lemma, from the configured anchors."""
        sources = self._lookup_lemma(lemma, "n")[1]
        tags = set()
        for tag, anchors in self.type_anchors.items():
            if any(self.hypernym_closure(s) & set(anchors) for s in sources):
                tags.add(tag)
        return frozenset(tags)

    def verbnet_classes_for_lemma(self, lemma: str) -> list[str]:
        classes: set[str] = set()
        for sense_id in self._pb_lemmas.get(_key(lemma), []):
            classes.update(self.semlink.get(sense_id, ()))
        return sorted(classes)

    def ground_predicate(self, sense_label: str) -> SemanticPath:
        lemma, sense_id = split_sense_label(sense_label)
        vn = self.semlink.get(sense_id)
        if vn:
            sense = self.propbank.get(sense_id) or PredicateSense(lemma, sense_id)
            return SemanticPath(sense, tuple(vn), tuple(self._lookup_lemma(lemma, "v")[1]), "full")
        wn = self._lookup_lemma(lemma, "v")[1]
        if wn or _key(lemma) in self._pb_lemmas or self.synsets_for(lemma):
            return SemanticPath(None, (), tuple(wn), "lemma_fallback")
        raise UnknownPredicate(sense_label)

    def ambiguity_counts(self, sense_label: str) -> tuple[int, int]:
        """(WordNet verb synsets, VerbNet classes) for the predicate's lemma."""
        try:
            lemma, _ = split_sense_label(sense_label)
        except ValueError:
            lemma = sense_label
        _, wn = self._lookup_lemma(lemma, "v")
        return len(wn), len(self.verbnet_classes_for_lemma(lemma))


# -- file readers -------------------------------------------------------------------


def _data_dir() -> Path:
    return Path(str(resources.files("casekb") / "data"))


def _read_tsv(path: Path, width: int) -> list[list[str]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != width:
                raise LexiconError(f"{path.name}:{lineno}: expected {width} columns, got {len(cols)}")
            rows.append(cols)
    return rows


def _read_pb_semlink(pb_path: Path, sl_path: Path):
    propbank = {}
    for sense_id, args in _read_tsv(pb_path, 2):
        lemma = sense_id.rsplit(".", 1)[0].replace("_", " ")
        propbank[sense_id] = PredicateSense(lemma, sense_id, tuple(a for a in args.split(",") if a))
    semlink: dict[str, list[str]] = {}
    for sense_id, vn_class in _read_tsv(sl_path, 2):
        semlink.setdefault(sense_id, []).append(vn_class)
    return propbank, {k: tuple(v) for k, v in semlink.items()}


def _read_anchors(path: str | Path) -> dict[str, tuple[str, ...]]:
    with open(path, encoding="utf-8") as fh:
        raw = json.load(fh)
    anchors = {k: tuple(v) for k, v in raw.items() if not k.startswith("_")}
    unknown = set(anchors) - set(TYPE_TAGS)
    if unknown:
        raise LexiconError(f"unknown type tags in anchors: {sorted(unknown)}")
    return anchors


_POS_FILES = {"n": "noun", "v": "verb", "a": "adj", "r": "adv"}


def read_wordnet_db(dict_dir: str | Path) -> dict[str, Synset]:
    """Read WordNet 3.0 database files into ``lemma.pos.NN`` named synsets.

    A synset is named after its first word and its sense rank in that word's
    ``index.<pos>`` entry. Only hypernym pointers (``@``, ``@i``) are kept.
    Missing ``adj``/``adv`` files are skipped.
    """
    base = Path(dict_dir)
    synsets: dict[str, Synset] = {}
    for pos, suffix in _POS_FILES.items():
        index_path, data_path = base / f"index.{suffix}", base / f"data.{suffix}"
        if not data_path.exists() or not index_path.exists():
            continue
        rank: dict[tuple[str, str], int] = {}
        with open(index_path, encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("  ") or not line.strip():
                    continue
                parts = line.split()
                lemma, n_synsets, n_ptr = parts[0], int(parts[2]), int(parts[3])
                offsets = parts[6 + n_ptr: 6 + n_ptr + n_synsets]
                for i, off in enumerate(offsets, 1):
                    rank[(lemma, off)] = i
        raw: dict[str, tuple[list[str], list[tuple[str, str]]]] = {}
        with open(data_path, encoding="utf-8") as fh:
            for line in fh:
                if line.startswith("  ") or not line.strip():
                    continue
                fields = line.split("|", 1)[0].split()
                offset = fields[0]
                w_cnt = int(fields[3], 16)
                words = [fields[4 + 2 * i].lower() for i in range(w_cnt)]
                words = [re.sub(r"\(.*\)$", "", w) for w in words]
                j = 4 + 2 * w_cnt
                p_cnt = int(fields[j])
                ptrs = []
                for k in range(p_cnt):
                    sym, target_off, target_pos = fields[j + 1 + 4 * k: j + 4 + 4 * k]
                    if sym in ("@", "@i"):
                        ptrs.append((target_off, "a" if target_pos == "s" else target_pos))
                raw[offset] = (words, ptrs)
        names = {}
        for offset, (words, _) in raw.items():
            first = words[0]
            names[offset] = f"{first}.{pos}.{rank.get((first, offset), 1):02d}"
        for offset, (words, ptrs) in raw.items():
            hyper = tuple(names[o] for o, p in ptrs if p == pos and o in names)
            synsets[names[offset]] = Synset(names[offset], tuple(words), pos, hyper)
    return synsets


@lru_cache(maxsize=None)
def default_lexicon() -> Lexicon:
    return Lexicon.from_snapshot()

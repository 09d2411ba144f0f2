"""Heuristic event confidence with an auditable term breakdown."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable

BUCKETS = ("incident_core", "police_action", "context_admin", "uncertain")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScoreConfig:
    bucket_base: dict[str, float] = field(default_factory=lambda: {
        "incident_core": 0.55, "police_action": 0.50, "context_admin": 0.12, "uncertain": 0.30})
    full_path_bonus: float = 0.25
    lemma_fallback_bonus: float = 0.10
    anchor_bonus: float = 0.25
    object_bonus: float = 0.15
    negation_penalty_core: float = 0.35
    negation_penalty_other: float = 0.10
    hedge_penalty: float = 0.12
    alpha: float = 0.7
    object_cap: float = 0.98
    ambiguity_per_synset: float = 0.004
    ambiguity_per_verbnet_class: float = 0.01
    ambiguity_max: float = 0.10

    def __post_init__(self) -> None:
        if set(self.bucket_base) != set(BUCKETS):
            raise ConfigError(f"bucket_base must define exactly {BUCKETS}")
        for name, value in self._constants():
            if not isinstance(value, (int, float)) or not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must be a number in [0, 1], got {value!r}")
        if not 0.0 < self.alpha < 1.0:
            raise ConfigError("alpha must lie strictly between 0 and 1")

    def _constants(self):
        for k, v in self.bucket_base.items():
            yield f"bucket_base.{k}", v
        for k, v in asdict(self).items():
            if k != "bucket_base":
                yield k, v

    @classmethod
    def from_dict(cls, raw: dict) -> ScoreConfig:
        data = {k: v for k, v in raw.items() if not k.startswith("_")}
        amb = data.pop("ambiguity", None)
        if amb:
            data["ambiguity_per_synset"] = amb["per_synset"]
            data["ambiguity_per_verbnet_class"] = amb["per_verbnet_class"]
            data["ambiguity_max"] = amb["max"]
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def load(cls, path: str | Path) -> ScoreConfig:
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def digest(self) -> str:
        return hashlib.sha256(json.dumps(asdict(self), sort_keys=True).encode()).hexdigest()[:16]


@lru_cache(maxsize=None)
def default_score_config() -> ScoreConfig:
    return ScoreConfig.load(Path(str(resources.files("casekb") / "data" / "score_config.json")))


@dataclass(frozen=True)
class ScoringInput:
    """Everything the score needs to know about one event."""

    bucket: str
    path_kind: str | None  # "full", "lemma_fallback", or None when ungrounded
    anchor_matched: bool = False
    object_evidence: bool = False
    negated: bool = False
    hedged: bool = False
    n_synsets: int = 0
    n_verbnet: int = 0
    prior: float | None = None
    rule_has_object_tag: bool = False
    specificity_bonus: float = 0.0


@dataclass(frozen=True)
class ScoreBreakdown:
    base: float
    path_bonus: float
    structure_bonus: float
    penalty: float
    raw_score: float
    prior: float | None
    object_cap_applied: bool
    specificity_bonus: float
    final: float
    negation_penalty: float = 0.0
    hedge_penalty: float = 0.0
    ambiguity_penalty: float = 0.0
    bounded: float = 0.0
    blended: float = 0.0

    def to_dict(self) -> dict:
        return {k: (None if v is None else round(v, 6) if isinstance(v, float) else v)
                for k, v in asdict(self).items()}


def _clamp(x: float) -> float:
    return min(1.0, max(0.0, x))


def ambiguity_penalty(n_synsets: int, n_verbnet: int, cfg: ScoreConfig) -> float:
    raw = (cfg.ambiguity_per_synset * max(0, n_synsets - 1)
           + cfg.ambiguity_per_verbnet_class * max(0, n_verbnet - 1))
    return min(cfg.ambiguity_max, raw)


def score_event(e: ScoringInput, cfg: ScoreConfig | None = None) -> ScoreBreakdown:
    """Raw additive score, optional object cap, prior blend, specificity bonus, clamp."""
    cfg = cfg or default_score_config()
    if e.bucket not in cfg.bucket_base:
        raise ValueError(f"unknown bucket {e.bucket!r}")
    base = cfg.bucket_base[e.bucket]
    path_bonus = {"full": cfg.full_path_bonus, "lemma_fallback": cfg.lemma_fallback_bonus}.get(e.path_kind, 0.0)
    structure_bonus = (cfg.anchor_bonus if e.anchor_matched else 0.0) + (cfg.object_bonus if e.object_evidence else 0.0)
    neg = 0.0
    if e.negated:
        neg = cfg.negation_penalty_core if e.bucket == "incident_core" else cfg.negation_penalty_other
    hedge_penalty = cfg.hedge_penalty if e.hedged else 0.0
    amb = ambiguity_penalty(e.n_synsets, e.n_verbnet, cfg)
    penalty = neg + hedge_penalty + amb
    raw_score = base + path_bonus + structure_bonus - penalty

    capped = raw_score
    cap_applied = False
    if e.rule_has_object_tag and raw_score > cfg.object_cap:
        capped, cap_applied = cfg.object_cap, True
    bounded = _clamp(capped)
    blended = bounded if e.prior is None else cfg.alpha * e.prior + (1 - cfg.alpha) * bounded
    final = _clamp(blended + e.specificity_bonus)
    return ScoreBreakdown(base, path_bonus, structure_bonus, penalty, raw_score, e.prior, cap_applied,
                          e.specificity_bonus, final, neg, hedge_penalty, amb, bounded, blended)


def high_conf_fraction(events: Iterable, tau: float = 0.80) -> float | None:
    """Share of events with confidence >= tau; None for an empty set."""
    if not 0.0 <= tau <= 1.0:
        raise ValueError("tau must lie in [0, 1]")
    scores = [getattr(e, "confidence", e) for e in events]
    if not scores:
        return None
    return sum(1 for c in scores if c >= tau) / len(scores)

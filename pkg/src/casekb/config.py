"""Pipeline configuration: file locations, thresholds and the loaded components."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from importlib import resources
from pathlib import Path

from .confidence import ConfigError, ScoreConfig
from .extraction import RuleError, RuleSet
from .lexicon import Lexicon, LexiconError
from .ontology import Schema, SchemaError
from .redaction import RedactionConfigError, RedactionRuleSet
from .temporal import CueConfig, PrecedenceAxiom, load_axioms, load_cues

DATA_DIR = Path(str(resources.files("casekb") / "data"))

_FILE_KEYS = {
    "typing_rules": "typing_rules.json",
    "score_config": "score_config.json",
    "axioms": "axioms.json",
    "cues": "cues.json",
    "templates": "templates.json",
    "schema": "schema.json",
    "redaction_rules": "redaction_rules.json",
    "type_anchors": "lexicon/type_anchors.json",
}


@dataclass(frozen=True)
class PipelineConfig:
    typing_rules: Path = DATA_DIR / _FILE_KEYS["typing_rules"]
    score_config: Path = DATA_DIR / _FILE_KEYS["score_config"]
    axioms: Path = DATA_DIR / _FILE_KEYS["axioms"]
    cues: Path = DATA_DIR / _FILE_KEYS["cues"]
    templates: Path = DATA_DIR / _FILE_KEYS["templates"]
    schema: Path = DATA_DIR / _FILE_KEYS["schema"]
    redaction_rules: Path = DATA_DIR / _FILE_KEYS["redaction_rules"]
    type_anchors: Path = DATA_DIR / _FILE_KEYS["type_anchors"]
    lexicon_dir: Path = DATA_DIR / "lexicon"
    tau: float = 0.80
    workers: int = 1
    seed: int = 42
    # e.g. "my-amr-parser --stdin"; sentences go to stdin one per line, PENMAN comes back on stdout
    parser_command: str | None = None
    figures: bool = True

    @classmethod
    def load(cls, path: str | Path | None = None, **overrides) -> PipelineConfig:
        """Read a JSON config; relative paths resolve against the config file's directory."""
        raw: dict = {}
        base = Path.cwd()
        if path is not None:
            path = Path(path)
            try:
                raw = json.loads(path.read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from None
            base = path.parent
        unknown = set(raw) - set(cls.__dataclass_fields__) - {k for k in raw if k.startswith("_")}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for k, v in raw.items():
            if k.startswith("_"):
                continue
            if k in _FILE_KEYS or k == "lexicon_dir":
                v = Path(v) if Path(v).is_absolute() else base / v
            kwargs[k] = v
        kwargs.update({k: v for k, v in overrides.items() if v is not None})
        cfg = cls(**kwargs)
        cfg.check()
        return cfg

    def check(self) -> None:
        if not 0.0 <= self.tau <= 1.0:
            raise ConfigError("tau must lie in [0, 1]")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        for key in (*_FILE_KEYS, "lexicon_dir"):
            p = Path(getattr(self, key))
            if not p.exists():
                raise ConfigError(f"{key}: {p} does not exist")

    def to_dict(self) -> dict:
        return {k: str(v) if isinstance(v, Path) else v for k, v in asdict(self).items()}

    def digest(self) -> str:
        """Hash of the referenced file contents and scalar settings (not of paths)."""
        h = hashlib.sha256()
        for key in sorted(_FILE_KEYS):
            h.update(key.encode())
            h.update(Path(getattr(self, key)).read_bytes())
        for f in sorted(Path(self.lexicon_dir).glob("*")):
            if f.is_file():
                h.update(f.name.encode())
                h.update(f.read_bytes())
        h.update(json.dumps({"tau": self.tau, "seed": self.seed, "parser": self.parser_command},
                            sort_keys=True).encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class Components:
    """Everything a worker needs, parsed once and shared read-only."""
    config: PipelineConfig
    rules: RuleSet
    score: ScoreConfig
    schema: Schema
    templates: dict
    axioms: tuple[PrecedenceAxiom, ...]
    cues: CueConfig
    redaction: RedactionRuleSet
    lexicon: Lexicon = field(repr=False)


def load_components(cfg: PipelineConfig) -> Components:
    try:
        schema = Schema.load(cfg.schema)
        rules = RuleSet.load(cfg.typing_rules)
        unknown = rules.event_classes() - set(schema.classes)
        if unknown:
            raise ConfigError(f"typing rules reference unknown classes {sorted(unknown)}")
        with open(cfg.templates, encoding="utf-8") as fh:
            templates = json.load(fh)
        return Components(
            config=cfg,
            rules=rules,
            score=ScoreConfig.load(cfg.score_config),
            schema=schema,
            templates=templates,
            axioms=tuple(load_axioms(cfg.axioms, schema)),
            cues=load_cues(cfg.cues),
            redaction=RedactionRuleSet.load(cfg.redaction_rules),
            lexicon=Lexicon.from_snapshot(cfg.lexicon_dir, cfg.type_anchors),
        )
    except (OSError, KeyError, json.JSONDecodeError, RuleError, SchemaError, LexiconError,
            RedactionConfigError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"{type(exc).__name__}: {exc}") from None

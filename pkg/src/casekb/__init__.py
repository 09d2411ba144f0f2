"""Event extraction and case knowledge bases from police-report narratives."""

__version__ = "0.1.0"

from .amr import AmrGraph, PenmanError, parse_penman, serialize_penman  # noqa: E402
from .confidence import ConfigError, ScoreConfig, ScoringInput, score_event  # noqa: E402
from .config import PipelineConfig, load_components  # noqa: E402
from .pipeline import CaseBundle, discover_bundles, run_case, run_corpus  # noqa: E402
from .redaction import redact, reverse_redaction  # noqa: E402

__all__ = [
    "AmrGraph",
    "CaseBundle",
    "ConfigError",
    "PenmanError",
    "PipelineConfig",
    "ScoreConfig",
    "ScoringInput",
    "__version__",
    "discover_bundles",
    "load_components",
    "parse_penman",
    "redact",
    "reverse_redaction",
    "run_case",
    "run_corpus",
    "score_event",
    "serialize_penman",
]

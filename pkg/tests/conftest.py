import json
from pathlib import Path

import pytest

from casekb.config import PipelineConfig, load_components
from casekb.fixtures import generate_fixture_corpus
from casekb.pipeline import discover_bundles, run_corpus

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def components():
    return load_components(PipelineConfig())


@pytest.fixture(scope="session")
def reference_predicates():
    return json.loads((DATA / "reference_predicates.json").read_text())


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    generate_fixture_corpus(42, 10, root)
    return root


@pytest.fixture(scope="session")
def corpus_run(corpus_dir, tmp_path_factory, components):
    """Seed-42 corpus processed once with one worker: (output dir, report)."""
    out = tmp_path_factory.mktemp("run")
    report = run_corpus(discover_bundles(corpus_dir), PipelineConfig(), out, components)
    return out, report


ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])

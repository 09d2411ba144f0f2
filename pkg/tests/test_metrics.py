import pytest

from casekb.metrics import compute_corpus_metrics, render_table, sense_frequencies
from casekb.pipeline import load_case_outputs

from oracles import compare, flatten_metrics, recount


def test_corpus_metrics_match_recount(corpus_run):
    out, report = corpus_run
    assert compare(flatten_metrics(report["metrics"]), recount(out)) == []


@pytest.mark.parametrize("tau", [0.0, 0.5, 0.8, 0.9, 1.0])
def test_high_conf_any_tau(corpus_run, tau):
    out, _ = corpus_run
    m = compute_corpus_metrics([r for r in load_case_outputs(out) if r["status"] == "ok"], tau)
    assert m.high_conf == pytest.approx(recount(out, tau)["high_conf"])


def test_empty_corpus():
    m = compute_corpus_metrics([])
    assert m.total_events == 0 and m.high_conf is None and m.cue_fraction is None
    assert "--" in render_table(m)


def test_edge_fractions_sum_to_one(corpus_run):
    m = corpus_run[1]["metrics"]
    assert m["cue_fraction"] + m["axiom_fraction"] == pytest.approx(1.0)
    assert m["full_path"] + m["lemma_fallback"] == pytest.approx(1.0)


def test_sense_frequencies_by_category(corpus_run):
    results = [r for r in load_case_outputs(corpus_run[0]) if r["status"] == "ok"]
    freqs = sense_frequencies(results)
    assert set(freqs) == {"Burglary", "Larceny", "Motor Vehicle Theft", "Robbery", "Stolen Property"}
    assert sum(sum(c.values()) for c in freqs.values()) == sum(len(r["events"]) for r in results)


def test_render_table_rows(corpus_run):
    from casekb.metrics import CorpusMetrics

    text = render_table(CorpusMetrics(**corpus_run[1]["metrics"]))
    assert "High confidence (>= 0.80)" in text
    assert "Cue edges" in text and "Axiom edges" in text

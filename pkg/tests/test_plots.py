from collections import Counter

from casekb.plots import confidence_histogram, review_ambiguity_figure, sense_frequency_figure

PNG = b"\x89PNG\r\n\x1a\n"


def test_figures_are_deterministic_pngs(tmp_path):
    freqs = {"Burglary": Counter({"break-01": 3, "enter-01": 2, "say-01": 4}), "Robbery": Counter({"grab-01": 1})}
    a = sense_frequency_figure(freqs, {"say-01"}, tmp_path / "a.png")
    b = sense_frequency_figure(freqs, {"say-01"}, tmp_path / "b.png")
    assert a.read_bytes().startswith(PNG) and a.read_bytes() == b.read_bytes()
    h1 = confidence_histogram([0.1, 0.5, 0.92, 0.919], 0.8, tmp_path / "h1.png")
    h2 = confidence_histogram([0.1, 0.5, 0.92, 0.919], 0.8, tmp_path / "h2.png")
    assert h1.read_bytes() == h2.read_bytes()


def test_empty_inputs_still_render(tmp_path):
    assert sense_frequency_figure({}, set(), tmp_path / "e.png").exists()
    assert confidence_histogram([], 0.8, tmp_path / "h.png").exists()


def test_review_figure(tmp_path):
    report = {"agreement": [{"question": "Q1", "title": "Start", "not_clear_pct": 40.0},
                            {"question": "Q4", "title": "Entry", "not_clear_pct": None}]}
    assert review_ambiguity_figure(report, tmp_path / "r.png").read_bytes().startswith(PNG)

"""Report figures rendered with matplotlib's Agg backend.

Figures are written with empty PNG metadata so repeated runs produce
identical bytes.
"""

from __future__ import annotations

from collections import Counter
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

MEANINGFUL = "#5b3a8c"
TRIVIAL = "#d4a017"
NEUTRAL = "#4c72b0"
STYLE = {
    "font.size": 8,
    "axes.titlesize": 9,
    "axes.labelsize": 8,
    "xtick.labelsize": 7,
    "ytick.labelsize": 7,
    "legend.fontsize": 7,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.linestyle": "--",
    "grid.alpha": 0.3,
    "savefig.dpi": 120,
}


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="png", metadata={"Software": None})
    plt.close(fig)
    return path


def sense_frequency_figure(freqs: dict[str, Counter], trivial: set[str], path: str | Path,
                           top_n: int = 3) -> Path:
    """One panel per offense category: ranked sense counts, meaningful vs trivial senses."""
    cats = sorted(freqs)
    with plt.rc_context(STYLE):
        fig, axes = plt.subplots(len(cats) or 1, 1, figsize=(6, 2.2 * max(len(cats), 1)), squeeze=False)
        for ax, cat in zip(axes[:, 0], cats):
            counts = freqs[cat]
            ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
            meaningful = [c for s, c in ranked if s not in trivial]
            trivial_counts = [c for s, c in ranked if s in trivial]
            if meaningful:
                ax.plot(range(1, len(meaningful) + 1), meaningful, marker="o", ms=3,
                        color=MEANINGFUL, label="meaningful senses")
            if trivial_counts:
                ax.plot(range(1, len(trivial_counts) + 1), trivial_counts, marker="s", ms=3,
                        color=TRIVIAL, label="trivial senses")
            top = [s for s, _ in ranked if s not in trivial][:top_n]
            if top:
                ax.text(0.98, 0.95, "top: " + ", ".join(top), transform=ax.transAxes, ha="right",
                        va="top", bbox={"boxstyle": "round", "facecolor": "white", "alpha": 0.8})
            ax.set_title(cat)
            ax.set_xlabel("rank")
            ax.set_ylabel("count")
            if meaningful or trivial_counts:
                ax.legend(loc="center right")
        if not cats:
            axes[0, 0].set_title("no events")
        fig.tight_layout()
        return _save(fig, path)


def confidence_histogram(confidences: list[float], tau: float, path: str | Path) -> Path:
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.hist(confidences, bins=[i / 20 for i in range(21)], color=NEUTRAL, edgecolor="white")
        ax.axvline(tau, color="black", linestyle="--", linewidth=1, label=f"tau = {tau:.2f}")
        ax.set_xlim(0, 1)
        ax.set_xlabel("event confidence")
        ax.set_ylabel("events")
        ax.legend(loc="upper left")
        fig.tight_layout()
        return _save(fig, path)


def review_ambiguity_figure(report: dict, path: str | Path) -> Path:
    """Horizontal bars of clear-majority and not-clear shares per question."""
    rows = report["agreement"]
    labels = [f"{r['question']} {r['title']}" for r in rows]
    clear = [100.0 - (r["not_clear_pct"] or 0.0) for r in rows]
    unclear = [r["not_clear_pct"] or 0.0 for r in rows]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6, 0.35 * len(rows) + 1.2))
        ys = range(len(rows))
        ax.barh([y - 0.2 for y in ys], clear, height=0.4, color=NEUTRAL, label="clear majority")
        ax.barh([y + 0.2 for y in ys], unclear, height=0.4, color=NEUTRAL, alpha=0.35, label="no clear majority")
        ax.set_yticks(list(ys))
        ax.set_yticklabels(labels)
        ax.invert_yaxis()
        ax.set_xlim(0, 109)
        ax.set_xlabel("%")
        ax.legend(loc="lower center", bbox_to_anchor=(0.5, -0.45), ncol=2, frameon=False)
        fig.tight_layout()
        return _save(fig, path)

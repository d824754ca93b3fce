"""Figure rendering for report paths (bar charts of forecast errors and
agency disagreement, written to file next to the CSV output)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402


def render_delta_histogram(histogram: dict, path, title="Forecast errors",
                           xlabel="delta"):
    """Bar chart of a delta -> count histogram, saved to ``path``."""
    deltas = sorted(histogram)
    counts = [histogram[d] for d in deltas]
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.bar(deltas, counts, width=0.8, color="#4878a8", edgecolor="black",
           linewidth=0.5)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    ax.set_title(title)
    ax.set_xticks(deltas)
    ax.grid(axis="y", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_class_distribution(codes_histogram: dict, path,
                              title="Rating class distribution"):
    """Bar chart of code -> count for a rating distribution."""
    render_delta_histogram(codes_histogram, path, title=title, xlabel="code")

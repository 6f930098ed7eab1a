"""Figure rendering for the experiment reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .brute_force import Histogram

# Fixed PNG metadata keeps identical runs byte-identical.
_PNG_METADATA = {"Software": "framecipher"}


def render_histogram(hist: Histogram, path, title: str | None = None) -> None:
    """Bar chart of ASCII appearance counts, saved next to the CSV."""
    fig, ax = plt.subplots(figsize=(8.0, 3.2))
    ax.bar(range(128), hist.counts, width=1.0, color="steelblue", edgecolor="none")
    ax.set_xlim(-1, 128)
    ax.set_xlabel("ASCII value")
    ax.set_ylabel("appearances")
    if title:
        ax.set_title(title)
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    fig.savefig(path, dpi=150, bbox_inches="tight", metadata=_PNG_METADATA)
    plt.close(fig)

"""Figures for property tables."""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .properties import PropertyRow  # noqa: E402

SERIES = (("DT", "tree size", "o-"), ("DC", "compacted size", "s-"), ("DH", "height", "^-"))


def plot_rows(rows: list[PropertyRow], path: str | Path, title: str = "") -> None:
    """Tree size, compacted size and height of every subproof, one point per row.

    Tree sizes grow much faster than the other two, hence the log scale.
    """
    fig, ax = plt.subplots(figsize=(7.5, 3.6))
    xs = [r.row for r in rows]
    for col, label, style in SERIES:
        ax.plot(xs, [getattr(r, col) for r in rows], style, ms=3.5, lw=1, label=label)
    ax.set_yscale("log")
    ax.set_xlabel("subproof")
    ax.set_ylabel("size")
    ax.set_xticks(xs)
    ax.tick_params(axis="x", labelsize=6)
    ax.grid(True, which="major", alpha=0.3)
    ax.legend(frameon=False, fontsize=8)
    if title:
        ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)

"""PNG rendering for the report tables.

Every delimited artifact the runner writes gets a rendered companion image
with the same stem. The CSV stays the canonical output; these figures exist
so a run directory is skimmable without loading the tables elsewhere.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  backend must be pinned first

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b")


def line_figure(
    path: str | Path,
    x,
    curves,
    xlabel: str,
    ylabel: str,
    title: str | None = None,
    vline_x: float | None = None,
) -> Path:
    """Plot (label, y[, style]) curves over a shared x axis and save a PNG."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8.0, 4.0), dpi=130)
    for i, item in enumerate(curves):
        label, y, style = (*item, {}) if len(item) == 2 else item
        ax.plot(x, y, label=label, linewidth=1.1, color=_COLORS[i % len(_COLORS)], **style)
    if vline_x is not None:
        ax.axvline(vline_x, color="0.35", linestyle="--", linewidth=0.9)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.25)
    ax.legend(loc="best", fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def dual_axis_figure(
    path: str | Path,
    x,
    left,
    right,
    xlabel: str,
    left_label: str,
    right_label: str,
    title: str | None = None,
) -> Path:
    """Two series sharing x with independent y scales (e.g. mbar vs nA)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(8.0, 4.0), dpi=130)
    l_label, l_y = left
    r_label, r_y = right
    ax.plot(x, l_y, color=_COLORS[0], linewidth=1.1, label=l_label)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(left_label, color=_COLORS[0])
    ax.tick_params(axis="y", labelcolor=_COLORS[0])
    twin = ax.twinx()
    twin.plot(x, r_y, color=_COLORS[1], linewidth=1.1, label=r_label)
    twin.set_ylabel(right_label, color=_COLORS[1])
    twin.tick_params(axis="y", labelcolor=_COLORS[1])
    if title:
        ax.set_title(title)
    ax.grid(alpha=0.25)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path

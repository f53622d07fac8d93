"""Sweep reporting: a delimited results table plus an optional rendered figure."""
from __future__ import annotations

from typing import Optional, Sequence

from .miners import SweepRow

_COLUMNS = ("strategy", "k", "careful_det", "outcome", "states", "transitions", "wall_ms")


def sweep_table(rows: Sequence[SweepRow]) -> str:
    """Tab-separated table, one row per mining configuration."""
    out = ["\t".join(_COLUMNS)]
    for r in rows:
        out.append("\t".join([
            r.strategy,
            str(r.k),
            "on" if r.careful_det else "off",
            r.outcome,
            "" if r.states is None else str(r.states),
            "" if r.transitions is None else str(r.transitions),
            f"{r.wall_ms:.1f}",
        ]))
    return "".join(line + "\n" for line in out)


def write_sweep_table(rows: Sequence[SweepRow], path: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(sweep_table(rows))


_OUTCOME_COLORS = {"ok": "#2a9d8f", "timeout": "#e9c46a", "oom": "#e76f51"}


def plot_sweep(rows: Sequence[SweepRow], path: str, title: Optional[str] = None):
    """Render the sweep as a bar chart of model sizes, colored by outcome.

    Failed runs (timeout/oom) draw as hatched zero-height stubs so every
    configuration stays visible.
    """
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [f"{r.strategy}\nk={r.k} det={'on' if r.careful_det else 'off'}" for r in rows]
    heights = [r.states if r.states is not None else 0 for r in rows]
    colors = [_OUTCOME_COLORS.get(r.outcome, "#888888") for r in rows]

    fig, ax = plt.subplots(figsize=(max(6.0, 0.8 * len(rows)), 4.0))
    bars = ax.bar(range(len(rows)), heights, color=colors)
    for bar, row in zip(bars, rows):
        if row.outcome != "ok":
            bar.set_hatch("//")
            ax.text(bar.get_x() + bar.get_width() / 2, 0.1, row.outcome,
                    ha="center", va="bottom", rotation=90, fontsize=8)
    ax.set_xticks(range(len(rows)))
    ax.set_xticklabels(labels, fontsize=7)
    ax.set_ylabel("states")
    ax.set_title(title or "mining sweep")
    handles = [plt.Rectangle((0, 0), 1, 1, color=c) for c in _OUTCOME_COLORS.values()]
    ax.legend(handles, list(_OUTCOME_COLORS.keys()), fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)

"""Figure rendering from validated report entries.

Output is deterministic: fixed figure geometry, fixed color scale, pinned
SVG hash salt, and no date metadata, so identical inputs yield identical
bytes. Rates come straight from the report fields; nothing is recomputed
beyond row-normalizing the confusion counts for display.
"""

from __future__ import annotations

import os
from collections import OrderedDict

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

matplotlib.rcParams["svg.hashsalt"] = "love-plot"
matplotlib.rcParams["svg.fonttype"] = "none"  # keep text as text: diff-able

_HEATMAP_CMAP = "Blues"
_RESOLUTION_RANGE = (2, 7)


class UsageError(ValueError):
    """Request inconsistent with the report contents (e.g. missing resolution)."""


def _save(fig, out: str | os.PathLike) -> None:
    fmt = str(out).rsplit(".", 1)[-1].lower()
    if fmt == "svg":
        fig.savefig(out, format="svg", metadata={"Date": None})
    else:
        fig.savefig(out, format=fmt)
    plt.close(fig)


def confusion_grid(entry: dict) -> np.ndarray:
    """Row-normalized 2x2 grid: rows = true label (legit, attack),
    columns = prediction (plausible, flagged)."""
    tn, fp = entry["tn"], entry["fp"]
    fn, tp = entry["fn"], entry["tp"]
    legit_total = tn + fp
    attack_total = fn + tp
    return np.array(
        [
            [tn / legit_total if legit_total else 0.0, fp / legit_total if legit_total else 0.0],
            [fn / attack_total if attack_total else 0.0, tp / attack_total if attack_total else 0.0],
        ]
    )


def plot_heatmap(
    report: list[dict],
    resolution: int,
    out: str | os.PathLike,
    title: str | None = None,
) -> None:
    """Render the normalized confusion heatmap for one resolution."""
    matches = [e for e in report if e["resolution"] == resolution]
    if not matches:
        have = sorted({e["resolution"] for e in report})
        raise UsageError(f"resolution {resolution} not in report (has {have})")
    entry = matches[0]
    grid = confusion_grid(entry)

    fig, ax = plt.subplots(figsize=(4.2, 3.6), dpi=100)
    ax.imshow(grid, cmap=_HEATMAP_CMAP, vmin=0.0, vmax=1.0)
    for row in range(2):
        for col in range(2):
            value = grid[row, col]
            ax.text(
                col,
                row,
                f"{value:.5f}",
                ha="center",
                va="center",
                fontsize=11,
                color="white" if value > 0.5 else "black",
            )
    ax.set_xticks([0, 1], ["plausible", "flagged"])
    ax.set_yticks([0, 1], ["legit", "attack"])
    ax.set_xlabel("prediction")
    ax.set_ylabel("true label")
    ax.set_title(title or f"confusion rates, resolution {resolution}")
    fig.tight_layout()
    _save(fig, out)


def relative_times(entries: list[dict]) -> list[float]:
    """wall_seconds normalized so the slowest resolution is exactly 1.0."""
    slowest = max(e["wall_seconds"] for e in entries)
    if slowest <= 0:
        return [1.0 for _ in entries]
    return [e["wall_seconds"] / slowest for e in entries]


def accuracy_ylim(accuracies: list[float]) -> tuple[float, float]:
    """Zoomed axis when every accuracy clears 0.99, full axis otherwise."""
    if min(accuracies) > 0.99:
        return (0.99, 1.0)
    return (min(0.9, min(accuracies)), 1.0)


def plot_accuracy_curve(
    report: list[dict],
    out: str | os.PathLike,
    title: str | None = None,
) -> None:
    """Accuracy and relative verification time versus resolution.

    One solid accuracy line and one dashed relative-time line per dataset
    label in the report; relative time is normalized per dataset.
    """
    resolutions = sorted({e["resolution"] for e in report})
    if len(resolutions) < 2:
        raise UsageError("accuracy curve needs at least 2 resolutions in the report")

    by_dataset: "OrderedDict[str, list[dict]]" = OrderedDict()
    for entry in report:
        by_dataset.setdefault(entry.get("dataset", "default"), []).append(entry)

    fig, acc_ax = plt.subplots(figsize=(5.4, 3.8), dpi=100)
    time_ax = acc_ax.twinx()

    colors = plt.rcParams["axes.prop_cycle"].by_key()["color"]
    all_accuracies = []
    for i, (dataset, entries) in enumerate(by_dataset.items()):
        entries = sorted(entries, key=lambda e: e["resolution"])
        xs = [e["resolution"] for e in entries]
        accuracies = [e["accuracy"] for e in entries]
        all_accuracies.extend(accuracies)
        color = colors[i % len(colors)]
        label = "" if dataset == "default" else f" {dataset}"
        acc_ax.plot(xs, accuracies, marker="o", color=color, label=f"accuracy{label}")
        time_ax.plot(
            xs,
            relative_times(entries),
            marker="s",
            linestyle="--",
            color=color,
            alpha=0.6,
            label=f"relative time{label}",
        )

    acc_ax.set_xticks(range(_RESOLUTION_RANGE[0], _RESOLUTION_RANGE[1] + 1))
    acc_ax.set_xlabel("resolution")
    acc_ax.set_ylabel("accuracy")
    acc_ax.set_ylim(*accuracy_ylim(all_accuracies))
    time_ax.set_ylabel("relative verification time")
    time_ax.set_ylim(0.0, 1.05)

    handles1, labels1 = acc_ax.get_legend_handles_labels()
    handles2, labels2 = time_ax.get_legend_handles_labels()
    acc_ax.legend(handles1 + handles2, labels1 + labels2, fontsize=8, loc="center left")
    acc_ax.set_title(title or "accuracy and relative time by resolution")
    fig.tight_layout()
    _save(fig, out)

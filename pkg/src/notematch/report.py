"""Report rendering: delimited output plus a matplotlib figure per report.

Every report writes a CSV and, where a figure is meaningful, a PNG next to
it. Figures carry fixed metadata so re-running a report with unchanged
inputs reproduces the files byte for byte.
"""

from __future__ import annotations

import csv
from pathlib import Path
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .analysis import IntervalStats, Role

PNG_METADATA = {"Software": "notematch"}


def _save_figure(fig, path: Path) -> None:
    fig.savefig(path, dpi=120, metadata=PNG_METADATA)
    plt.close(fig)


def write_temporal_report(stats: IntervalStats, out_dir: str | Path,
                          prefix: str = "temporal") -> dict[str, Path]:
    """Histogram CSV + PNG and the before/after interval averages."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{prefix}_histogram.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["bin_start_day", "bin_end_day", "count"])
        for start, count in stats.histogram:
            writer.writerow([start, start + _bin_width(stats), count])

    avg_path = out_dir / f"{prefix}_averages.csv"
    with open(avg_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_before_avg_days", "t_after_avg_days", "pairs"])
        writer.writerow([stats.t_before_avg, stats.t_after_avg, len(stats.deltas)])

    png_path = out_dir / f"{prefix}_histogram.png"
    fig, ax = plt.subplots(figsize=(8, 4))
    if stats.histogram:
        width = _bin_width(stats)
        starts = [s for s, _ in stats.histogram]
        counts = [c for _, c in stats.histogram]
        ax.bar(starts, counts, width=width, align="edge", color="#c0392b", edgecolor="white")
    ax.set_xlabel("interval between note release and review post (days)")
    ax.set_ylabel("matched pairs")
    ax.set_title("Interval distribution")
    fig.tight_layout()
    _save_figure(fig, png_path)
    return {"histogram_csv": csv_path, "averages_csv": avg_path, "figure": png_path}


def _bin_width(stats: IntervalStats) -> int:
    if len(stats.histogram) >= 2:
        return stats.histogram[1][0] - stats.histogram[0][0]
    return 20


def write_hit_ratio_report(rows: Sequence[dict], out_dir: str | Path,
                           prefix: str = "hit_ratio") -> dict[str, Path]:
    """Per-app hit ratios: rows of {app_id, relevant, total, hit_ratio}."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{prefix}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["app_id", "relevant", "total", "hit_ratio"])
        for row in rows:
            writer.writerow([row["app_id"], row["relevant"], row["total"], row["hit_ratio"]])

    png_path = out_dir / f"{prefix}.png"
    fig, ax = plt.subplots(figsize=(7, 4))
    apps = [r["app_id"] for r in rows]
    ratios = [r["hit_ratio"] for r in rows]
    ax.bar(apps, ratios, color="#2980b9")
    ax.set_ylim(0, 1)
    ax.set_ylabel("hit ratio")
    ax.set_title("Relevant pairs among labeled pairs")
    for i, ratio in enumerate(ratios):
        ax.text(i, ratio + 0.02, f"{ratio:.3f}", ha="center", fontsize=8)
    fig.tight_layout()
    _save_figure(fig, png_path)
    return {"csv": csv_path, "figure": png_path}


def write_roles_report(distribution: Sequence[dict], out_dir: str | Path,
                       prefix: str = "roles") -> dict[str, Path]:
    """Role counts/percentages: rows of {role, count, percent}."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{prefix}.csv"
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["role", "count", "percent"])
        for row in distribution:
            writer.writerow([row["role"], row["count"], f"{row['percent']:.1f}"])

    png_path = out_dir / f"{prefix}.png"
    fig, ax = plt.subplots(figsize=(8, 4.5))
    names = [r["role"] for r in distribution]
    percents = [r["percent"] for r in distribution]
    ax.barh(names[::-1], percents[::-1], color="#27ae60")
    ax.set_xlabel("% of relevant pairs")
    ax.set_title("Review roles among relevant pairs")
    fig.tight_layout()
    _save_figure(fig, png_path)
    return {"csv": csv_path, "figure": png_path}


def write_eligibility_report(reports: Sequence[dict], out_dir: str | Path,
                             prefix: str = "eligibility") -> dict[str, Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{prefix}.csv"
    fields = [
        "app_id", "age_days", "note_count", "review_count",
        "sentence_repetition_rate", "passes_IC1_1", "passes_IC1_2", "passes_IC1_3",
    ]
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(fields)
        for report in reports:
            writer.writerow([report[f] if report[f] is not None else "" for f in fields])
    return {"csv": csv_path}

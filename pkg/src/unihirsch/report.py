"""Figures for sweep results (written to files, never shown)."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path
from typing import Sequence, Union

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def plot_sweep(rows: Sequence[dict], path: Union[str, Path], title: str = "") -> Path:
    """Peak live words and frontier width against T, one series per parameter set.

    Rows that failed (no ``peak_live_words``) are skipped.
    """
    series = defaultdict(list)
    for r in rows:
        if r.get("status") != "ok":
            continue
        series[r["group"]].append((r["T"], r["peak_live_words"], r["omega"]))
    fig, (ax_peak, ax_ratio) = plt.subplots(1, 2, figsize=(10, 4))
    for label, pts in sorted(series.items()):
        pts.sort()
        ts = [p[0] for p in pts]
        ax_peak.plot(ts, [p[1] for p in pts], marker="o", label=label)
        ax_ratio.plot(ts, [p[1] / p[0] for p in pts], marker="o", label=label)
    ax_peak.set_xscale("log", base=2)
    ax_peak.set_xlabel("T (vertices)")
    ax_peak.set_ylabel("peak live words")
    ax_ratio.set_xscale("log", base=2)
    ax_ratio.set_yscale("log")
    ax_ratio.set_xlabel("T (vertices)")
    ax_ratio.set_ylabel("peak live words / T")
    if len(series) <= 12:
        ax_peak.legend(fontsize="small")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=100)
    plt.close(fig)
    return path

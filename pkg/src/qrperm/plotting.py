"""Figures for run reports and exported sequences (matplotlib, Agg backend)."""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .runner import RunReport, param_key  # noqa: E402


def _save(fig, path: str | Path) -> Path:
    path = Path(path)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def report_figure(report: RunReport, path: str | Path) -> Path:
    """Checks per parameter, split by outcome; ratio rows get their own panel."""
    key = param_key(report.suite)
    ratios = defaultdict(list)
    for obs in report.observations:
        if obs["check"] == "eq6.10":
            ratios[obs["params"]["m"]].append((obs[key], obs["rhs"]))
    panels = 2 if ratios else 1
    fig, axes = plt.subplots(panels, 1, figsize=(8, 3.2 * panels), squeeze=False)
    ax = axes[0][0]
    xs = [row[0] for row in report.series]
    ax.plot(xs, [row[1] for row in report.series], ".", ms=3, label="passing checks")
    bad = [row for row in report.series if row[2]]
    if bad:
        ax.plot([r[0] for r in bad], [r[2] for r in bad], "rx", ms=7, label="failing checks")
    skipped = [row[0] for row in report.series if row[3]]
    if skipped:
        ax.plot(skipped, [0] * len(skipped), "|", color="gray", label="report-only")
    ax.set_xlabel(key)
    ax.set_ylabel("checks")
    ax.set_title(f"{report.suite}: {report.passes} pass, {len(report.failures)} fail, "
                 f"{report.skipped} skipped")
    ax.legend(loc="best", fontsize=8)
    if ratios:
        ax2 = axes[1][0]
        for m in sorted(ratios):
            pts = sorted(ratios[m])
            ax2.plot([x for x, _ in pts], [y for _, y in pts], ".-", ms=2, lw=0.6, label=f"m = {m}")
        ax2.axhline(1.0, color="k", lw=0.6)
        ax2.set_xlabel(key)
        ax2.set_ylabel("count / (p/4)")
        ax2.legend(loc="best", fontsize=8)
    return _save(fig, path)


def sequence_figure(name: str, primes: list[int], values: list[int], path: str | Path) -> Path:
    fig, ax = plt.subplots(figsize=(8, 3.2))
    if name == "sign_sp":
        ax.step(primes, values, where="mid", lw=0.8)
        ax.set_ylim(-1.5, 1.5)
    else:
        ax.plot(primes, values, ".", ms=3)
    ax.set_xlabel("p")
    ax.set_ylabel(name)
    ax.set_title(f"{name} over {len(values)} primes")
    return _save(fig, path)

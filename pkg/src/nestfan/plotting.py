"""Figures written next to the tabular output (Agg backend, files only)."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .errors import InvalidInput  # noqa: E402
from .fan import Fan  # noqa: E402


def plot_table(report, path: str) -> str:
    params = [r.param for r in report.rows]
    fig, ax = plt.subplots(figsize=(5, 3.2))
    w = 0.38
    ax.bar([p - w / 2 for p in params], [r.total for r in report.rows], w, label="total", color="0.75")
    ax.bar([p + w / 2 for p in params], [r.positive for r in report.rows], w, label="positive", color="tab:blue")
    for r in report.rows:
        ax.annotate(str(r.positive), (r.param + w / 2, r.positive), ha="center", va="bottom", fontsize=8)
    ax.set_xticks(params)
    ax.set_xlabel("dimension" if report.name == "table2" else "nodes")
    ax.set_ylabel("count")
    ax.set_yscale("log")
    ax.set_title(report.name)
    ax.legend(frameon=False, fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path


def plot_fan_2d(f: Fan, path: str) -> str:
    if f.dim != 2:
        raise InvalidInput("only 2-dimensional fans can be drawn")
    fig, ax = plt.subplots(figsize=(4, 4))
    reach = max(max(abs(x) for x in r) for r in f.rays) + 0.6
    for cone in f.max_cones:
        a, b = (f.rays[i] for i in cone)
        t0, t1 = math.atan2(a[1], a[0]), math.atan2(b[1], b[0])
        if (t1 - t0) % (2 * math.pi) > math.pi:
            t0, t1 = t1, t0
        span = (t1 - t0) % (2 * math.pi)
        ts = [t0 + span * k / 24 for k in range(25)]
        ax.fill([0] + [0.45 * math.cos(t) for t in ts], [0] + [0.45 * math.sin(t) for t in ts], alpha=0.2)
    for i, r in enumerate(f.rays):
        ax.annotate("", xy=r, xytext=(0, 0), arrowprops=dict(arrowstyle="->", lw=1.2))
        ax.text(r[0] * 1.12, r[1] * 1.12, f.label(i), ha="center", va="center", fontsize=9)
    ax.plot([0], [0], "k.")
    ax.set_xlim(-reach, reach)
    ax.set_ylim(-reach, reach)
    ax.set_aspect("equal")
    ax.grid(True, lw=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path

"""Figure rendering for point reports, sweeps, and verification ladders.

Figures are built on explicit ``Figure`` objects with an Agg canvas, never
the pyplot state machine, so rendering stays thread-safe and leaves no
global state behind. Every renderer accepts the same plain data structures
the JSON/CSV writers consume; file format follows the output extension.
"""

from __future__ import annotations

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .report import SWEEP_COLUMNS

_PASS_COLOR = "#2a7e43"
_FAIL_COLOR = "#b3342b"


def save_figure(fig: Figure, path, dpi: int = 150) -> None:
    FigureCanvasAgg(fig)
    fig.savefig(path, dpi=dpi)


def report_figure(report: dict) -> Figure:
    """Heatmap panel of the four matrix quantities in a point report."""
    panels = [("qfi", "information matrix"),
              ("forward_times4", "forward metric x4"),
              ("central_times4", "central metric x4"),
              ("correction", "rank-change correction")]
    fig = Figure(figsize=(8.0, 7.0))
    point = ", ".join(f"{v:.6g}" for v in report["x"])
    fig.suptitle(f"{report['model']} at x = ({point})")
    axes = fig.subplots(2, 2)
    for ax, (key, title) in zip(axes.ravel(), panels):
        matrix = np.asarray(report[key], dtype=float)
        image = ax.imshow(matrix, cmap="viridis")
        ax.set_title(title, fontsize=10)
        ax.set_xticks(range(matrix.shape[1]))
        ax.set_yticks(range(matrix.shape[0]))
        fig.colorbar(image, ax=ax, shrink=0.8)
        if matrix.shape[0] <= 4:
            low, high = float(matrix.min()), float(matrix.max())
            mid = (low + high) / 2.0
            for i in range(matrix.shape[0]):
                for j in range(matrix.shape[1]):
                    color = "white" if matrix[i, j] < mid else "black"
                    ax.text(j, i, f"{matrix[i, j]:.4g}", ha="center",
                            va="center", color=color, fontsize=8)
    fig.tight_layout(rect=(0.0, 0.0, 1.0, 0.95))
    return fig


def sweep_figure(rows, model_name: str = "") -> Figure:
    """Two-panel sweep view: metric curves and identity residuals."""
    columns = {name: np.array([row[i] for row in rows])
               for i, name in enumerate(SWEEP_COLUMNS)}
    x = columns["x"]
    fig = Figure(figsize=(8.0, 7.0))
    top, bottom = fig.subplots(2, 1, sharex=True)
    top.plot(x, columns["qfi"], label="information", lw=2.0)
    top.plot(x, columns["forward_times4"], label="forward x4", ls="--")
    top.plot(x, columns["central_times4"], label="central x4", ls=":")
    top.plot(x, columns["correction"], label="correction", ls="-.")
    top.set_ylabel("value along swept axis")
    top.legend(fontsize=9)
    top.grid(alpha=0.3)

    # residual curves can be exactly zero; clip for the log axis
    tiny = 1e-18
    bottom.semilogy(x, np.maximum(columns["eq5_residual"], tiny),
                    label="forward identity residual")
    bottom.semilogy(x, np.maximum(columns["theorem1_gap"], tiny),
                    label="central vs information gap")
    bottom.set_xlabel("swept parameter")
    bottom.set_ylabel("residual")
    bottom.legend(fontsize=9)
    bottom.grid(alpha=0.3)
    if model_name:
        fig.suptitle(model_name)
        fig.tight_layout(rect=(0.0, 0.0, 1.0, 0.95))
    else:
        fig.tight_layout()
    return fig


def verify_figure(suite_report: dict) -> Figure:
    """Log-log residual ladders for every check in a suite report."""
    checks = suite_report.get("checks", [])
    fig = Figure(figsize=(8.0, 6.0))
    ax = fig.subplots()
    labeled = 0
    for check in checks:
        steps = np.asarray(check["steps"], dtype=float)
        residuals = np.maximum(np.asarray(check["residuals"], dtype=float),
                               1e-18)
        color = _PASS_COLOR if check["pass"] else _FAIL_COLOR
        label = None
        if not check["pass"] or labeled < 10:
            label = check["check"]
            labeled += 1
        ax.loglog(steps, residuals, marker="o", ms=3, lw=1.0, alpha=0.7,
                  color=color, label=label)
    if checks:
        steps = np.asarray(checks[0]["steps"], dtype=float)
        anchor = max(max(np.max(c["residuals"]) for c in checks), 1e-18)
        for order, style in ((1, "--"), (2, ":")):
            guide = anchor * (steps / steps[0]) ** order
            ax.loglog(steps, guide, style, color="gray", lw=1.0,
                      label=f"slope {order}")
    passed = sum(1 for c in checks if c["pass"])
    ax.set_title(f"suite {suite_report.get('suite', '?')} "
                 f"(seed {suite_report.get('seed')}): "
                 f"{passed}/{len(checks)} checks pass")
    ax.set_xlabel("step")
    ax.set_ylabel("worst residual")
    ax.grid(alpha=0.3, which="both")
    ax.legend(fontsize=7, loc="best")
    fig.tight_layout()
    return fig

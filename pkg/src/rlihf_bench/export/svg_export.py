"""SVG line plots of evaluation curves."""

from collections.abc import Mapping, Sequence
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from rlihf_bench.models.records import Condition, EvalRecord  # noqa: E402

CURVE_METRICS = (
    ("mean_return", "Mean return"),
    ("success_rate", "Success rate"),
    ("path_deviation", "Path deviation"),
)

CONDITION_COLORS = {
    Condition.SPARSE: "0.45",
    Condition.DENSE: "tab:cyan",
    Condition.RLIHF: "tab:orange",
}


def mean_curve(runs: Sequence[Sequence[EvalRecord]], metric: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seed-averaged curve over the steps every run evaluated at.

    Returns:
        (steps, mean, std)
    """
    common = sorted(set.intersection(*(set(r.step for r in run) for run in runs))) if runs else []
    steps = np.array(common, dtype=int)
    values = np.array([
        [next(getattr(r, metric) for r in run if r.step == s) for s in common]
        for run in runs
    ], dtype=float).reshape(len(runs), len(common))
    if len(common) == 0:
        return steps, np.zeros(0), np.zeros(0)
    return steps, values.mean(axis=0), values.std(axis=0)


def export_svg(
    curves: Mapping[str, Sequence[Sequence[EvalRecord]]],
    path: Path | str,
    colors: Mapping[str, str] | None = None,
    title: str = "Evaluation curves",
) -> Path:
    """Write one panel per metric, one polyline (± std band) per method.

    Args:
        curves: Method label → eval records of each of its runs
        path: Output .svg file
        colors: Optional method label → matplotlib color
        title: Figure title

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    colors = colors or {}

    fig, axes = plt.subplots(1, len(CURVE_METRICS), figsize=(4.3 * len(CURVE_METRICS), 3.2))
    for ax, (metric, metric_title) in zip(np.atleast_1d(axes), CURVE_METRICS):
        for label, runs in curves.items():
            steps, mean, std = mean_curve(runs, metric)
            if steps.size == 0:
                continue
            line, = ax.plot(steps, mean, label=label, linewidth=1.2, color=colors.get(label))
            ax.fill_between(steps, mean - std, mean + std, alpha=0.2, color=line.get_color(), linewidth=0)
        ax.set_title(metric_title)
        ax.set_xlabel("Steps")
        if metric == "success_rate":
            ax.set_ylim(-0.05, 1.05)
        ax.grid(True, alpha=0.25)

    handles, labels = np.atleast_1d(axes)[0].get_legend_handles_labels()
    if handles:
        fig.legend(handles, labels, loc="upper center", ncol=min(4, len(labels)), fontsize=9, frameon=False)
    fig.suptitle(title, y=0.99)
    fig.tight_layout(rect=(0, 0, 1, 0.88))
    # fixed metadata and id salt keep the file byte-stable across runs
    with plt.rc_context({"svg.hashsalt": "rlihf-bench"}):
        fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path

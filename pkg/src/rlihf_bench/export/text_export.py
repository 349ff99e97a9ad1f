"""Plain text export of phase summaries."""

from collections.abc import Sequence
from pathlib import Path
from typing import Optional

from rlihf_bench.models.records import METRICS, Phase, PhaseSummary, TrainingLog

METRIC_TITLES = {
    "mean_return": "Return",
    "success_rate": "Success",
    "path_efficiency": "Path eff.",
    "path_deviation": "Path dev.",
}


def _format_header(title: str, logs: Sequence[TrainingLog]) -> str:
    """Format the header section."""
    seeds = sorted({log.seed for log in logs})
    total_steps = logs[0].total_steps if logs else 0
    lines = [
        "=" * 70,
        title,
        "=" * 70,
        "",
        f"Runs:          {len(logs)}",
        f"Seeds:         {', '.join(str(s) for s in seeds) or '-'}",
        f"Steps per run: {total_steps:,}",
        "",
    ]
    return "\n".join(lines)


def _format_phase(phase: Phase, summaries: Sequence[PhaseSummary]) -> str:
    """Format one phase as a method × metric table."""
    lines = [
        "-" * 70,
        f"Phase: {phase.value}",
        "-" * 70,
        f"{'Method':<16}" + "".join(f"{METRIC_TITLES[m]:>13}" for m in METRICS),
    ]
    rows = [s for s in summaries if s.phase is phase]
    for summary in rows:
        cells = "".join(f"{str(summary.stat(m)):>13}" for m in METRICS)
        lines.append(f"{summary.method[:15]:<16}{cells}")
    if not rows:
        lines.append("(no evaluation records)")
    lines.append("")
    return "\n".join(lines)


def _format_feedback(logs: Sequence[TrainingLog]) -> Optional[str]:
    """Online decoder accuracy of feedback runs, when any tallied events."""
    rows = [log for log in logs if log.online_confusion.total]
    if not rows:
        return None
    lines = ["Online feedback accuracy:"]
    for log in rows:
        c = log.online_confusion
        lines.append(
            f"  {log.run_id:<24} {c.accuracy:.3f}  "
            f"(tp {c.tp}, fp {c.fp}, tn {c.tn}, fn {c.fn}, skipped {log.skipped_feedback})"
        )
    lines.append("")
    return "\n".join(lines)


def export_text(
    summaries: Sequence[PhaseSummary],
    logs: Sequence[TrainingLog] = (),
    path: Path | str | None = None,
    title: str = "RLIHF Benchmark Summary",
) -> str:
    """Export phase summaries to plain text.

    Args:
        summaries: Phase summaries for every method
        logs: The runs that produced them
        path: Optional file path to write to
        title: Header line

    Returns:
        Plain text string
    """
    sections = [_format_header(title, logs)]
    for phase in Phase:
        sections.append(_format_phase(phase, summaries))

    feedback = _format_feedback(logs)
    if feedback:
        sections.append(feedback)
    sections.append("=" * 70)

    text = "\n".join(sections) + "\n"

    if path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")

    return text

"""Writing run artifacts: eval CSVs, phase summary, manifest and plots."""

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from rlihf_bench.config import BenchConfig
from rlihf_bench.errors import ReportError
from rlihf_bench.export.csv_export import (
    write_eval_csv,
    write_reward_log,
    write_summary_csv,
    write_sweep_csv,
)
from rlihf_bench.export.json_export import MANIFEST_NAME, export_json, manifest_to_dict
from rlihf_bench.export.svg_export import CONDITION_COLORS, export_svg
from rlihf_bench.export.text_export import export_text
from rlihf_bench.harness.phases import aggregate_phases
from rlihf_bench.models.records import Condition, Phase, PhaseSummary, TrainingLog

logger = logging.getLogger(__name__)

SUMMARY_CSV = "summary.csv"
SUMMARY_TXT = "summary.txt"
SWEEP_CSV = "sweep_returns.csv"
CURVES_SVG = "curves.svg"
RUNS_DIR = "runs"
REWARDS_DIR = "rewards"


@dataclass
class ReportPaths:
    """Everything emit_reports wrote."""
    manifest: Path
    summary: Path
    summary_text: Path
    eval_csvs: dict[str, Path] = field(default_factory=dict)
    reward_logs: dict[str, Path] = field(default_factory=dict)
    summaries: list[PhaseSummary] = field(default_factory=list)
    sweep: Optional[Path] = None
    svg: Optional[Path] = None


def method_label(log: TrainingLog, by_weight: bool = False) -> str:
    """Summary-table method name of a run."""
    if by_weight and log.condition is Condition.RLIHF:
        return f"{log.condition.label} w={log.w_hf:g}"
    return log.condition.label


def group_by_method(logs: Sequence[TrainingLog], by_weight: bool = False) -> dict[str, list[TrainingLog]]:
    """Runs grouped by method label, first-seen order."""
    groups: dict[str, list[TrainingLog]] = {}
    for log in logs:
        groups.setdefault(method_label(log, by_weight), []).append(log)
    return groups


def summarize(logs: Sequence[TrainingLog], by_weight: bool = False) -> list[PhaseSummary]:
    """Phase summaries pooled across seeds, up to three per method.

    Phases without evaluation records (runs shorter than three eval intervals)
    are left out with a warning.
    """
    summaries = []
    for method, runs in group_by_method(logs, by_weight).items():
        records = [r for run in runs for r in run.eval_records]
        method_summaries = aggregate_phases(records, runs[0].total_steps, method, skip_empty=True)
        if len(method_summaries) < len(Phase):
            present = {s.phase for s in method_summaries}
            missing = ", ".join(p.value for p in Phase if p not in present)
            logger.warning("%s has no evaluation records in phase %s", method, missing)
        summaries.extend(method_summaries)
    return summaries


def emit_reports(
    logs: Sequence[TrainingLog],
    out_dir: Path | str,
    config: BenchConfig,
    svg: bool = False,
    sweep: bool = False,
) -> ReportPaths:
    """Write per-run eval CSVs, the phase summary and the experiment manifest.

    Args:
        logs: Completed runs
        out_dir: Output directory (created if missing)
        config: The configuration the runs were made with
        svg: Also plot return curves
        sweep: Label RLIHF methods by weight and write the sweep comparison CSV

    Returns:
        Paths of the written files

    Raises:
        ReportError: On an empty log list (nothing is written) or an unwritable directory
    """
    if not logs:
        raise ReportError("no completed runs to report")
    out_dir = Path(out_dir)
    by_weight = sweep or len({log.w_hf for log in logs if log.condition is Condition.RLIHF}) > 1
    summaries = summarize(logs, by_weight)

    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        eval_csvs = {
            log.run_id: write_eval_csv(log.eval_records, out_dir / RUNS_DIR / f"{log.run_id}.csv")
            for log in logs
        }
        summary = write_summary_csv(summaries, out_dir / SUMMARY_CSV)
        summary_text = out_dir / SUMMARY_TXT
        export_text(summaries, logs, path=summary_text)

        paths = ReportPaths(manifest=out_dir / MANIFEST_NAME, summary=summary, summary_text=summary_text,
                            eval_csvs=eval_csvs, summaries=summaries)
        for log in logs:
            if log.reward_log:
                paths.reward_logs[log.run_id] = write_reward_log(
                    log.reward_log, out_dir / REWARDS_DIR / f"{log.run_id}.csv"
                )

        if sweep:
            by_w: dict[float, list[PhaseSummary]] = {}
            for w_hf in sorted({log.w_hf for log in logs}):
                runs = [log for log in logs if log.w_hf == w_hf]
                records = [r for run in runs for r in run.eval_records]
                by_w[w_hf] = aggregate_phases(records, runs[0].total_steps, f"w={w_hf:g}", skip_empty=True)
            paths.sweep = write_sweep_csv(by_w, out_dir / SWEEP_CSV)

        if svg:
            curves = {m: [run.eval_records for run in runs] for m, runs in group_by_method(logs, by_weight).items()}
            colors = {} if by_weight else {
                m: CONDITION_COLORS[runs[0].condition] for m, runs in group_by_method(logs).items()
            }
            paths.svg = export_svg(curves, out_dir / CURVES_SVG, colors=colors)

        artifacts = {"summary": SUMMARY_CSV, "summary_text": SUMMARY_TXT}
        if paths.sweep:
            artifacts["sweep"] = SWEEP_CSV
        if paths.svg:
            artifacts["svg"] = CURVES_SVG
        manifest = manifest_to_dict(
            config.to_dict(),
            list(logs),
            {run_id: p.relative_to(out_dir).as_posix() for run_id, p in eval_csvs.items()},
            artifacts=artifacts,
            root=out_dir,
        )
        export_json(manifest, paths.manifest)
    except OSError as e:
        raise ReportError(f"cannot write reports to {out_dir}: {e}") from e

    logger.info("wrote %d eval CSVs, summary and manifest to %s", len(eval_csvs), out_dir)
    return paths

"""CSV export of evaluation curves, phase summaries and per-step logs."""

import csv
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any, Optional

from rlihf_bench.decoder.loso import SubjectAccuracy
from rlihf_bench.env.geometry import project_onto_polyline
from rlihf_bench.models.records import EvalRecord, PhaseSummary, RewardLogRow
from rlihf_bench.models.scenario import IdealPath, Trajectory

EVAL_HEADERS = ("step", "mean_return", "return_std", "success_rate", "path_efficiency", "path_deviation")
SUMMARY_HEADERS = (
    "phase", "method",
    "success_rate_mean", "success_rate_std",
    "path_eff_mean", "path_eff_std",
    "path_dev_mean", "path_dev_std",
)
SWEEP_HEADERS = ("w_hf", "phase", "mean_return_mean", "mean_return_std", "success_rate_mean", "success_rate_std")
REWARD_LOG_HEADERS = ("step", "condition", "r_env", "r_hf", "w_hf", "total", "label", "p_errp")
TRAJECTORY_HEADERS = ("step", "x", "y", "carrying", "collision", "deviation")
DECODER_BENCH_HEADERS = ("subject_id", "mode", "accuracy", "tp", "fp", "tn", "fn")


def _fmt(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_rows(path: Path | str, headers: Sequence[str], rows: Iterable[Mapping[str, Any]]) -> Path:
    """Write dict rows with a fixed header order."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.DictWriter(handle, fieldnames=list(headers), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({key: _fmt(row.get(key)) for key in headers})
    return path


def read_rows(path: Path | str) -> list[dict[str, str]]:
    with Path(path).open("r", newline="", encoding="utf-8") as handle:
        return list(csv.DictReader(handle))


def write_eval_csv(records: Iterable[EvalRecord], path: Path | str) -> Path:
    return write_rows(path, EVAL_HEADERS, ({h: getattr(r, h) for h in EVAL_HEADERS} for r in records))


def summary_row(summary: PhaseSummary) -> dict[str, Any]:
    return {
        "phase": summary.phase.value,
        "method": summary.method,
        "success_rate_mean": summary.stat("success_rate").mean,
        "success_rate_std": summary.stat("success_rate").std,
        "path_eff_mean": summary.stat("path_efficiency").mean,
        "path_eff_std": summary.stat("path_efficiency").std,
        "path_dev_mean": summary.stat("path_deviation").mean,
        "path_dev_std": summary.stat("path_deviation").std,
    }


def write_summary_csv(summaries: Iterable[PhaseSummary], path: Path | str) -> Path:
    """Table-style phase summary, one row per (phase, method)."""
    return write_rows(path, SUMMARY_HEADERS, (summary_row(s) for s in summaries))


def write_sweep_csv(summaries: Mapping[float, Sequence[PhaseSummary]], path: Path | str) -> Path:
    """Per-weight, per-phase returns and success rates."""
    rows = []
    for w_hf, phase_summaries in sorted(summaries.items()):
        for s in phase_summaries:
            rows.append({
                "w_hf": float(w_hf),
                "phase": s.phase.value,
                "mean_return_mean": s.stat("mean_return").mean,
                "mean_return_std": s.stat("mean_return").std,
                "success_rate_mean": s.stat("success_rate").mean,
                "success_rate_std": s.stat("success_rate").std,
            })
    return write_rows(path, SWEEP_HEADERS, rows)


def write_reward_log(rows: Iterable[RewardLogRow], path: Path | str) -> Path:
    return write_rows(path, REWARD_LOG_HEADERS, (
        {
            "step": r.step,
            "condition": r.condition.value,
            "r_env": r.r_env,
            "r_hf": r.r_hf,
            "w_hf": r.w_hf,
            "total": r.total,
            "label": r.label,
            "p_errp": r.p_errp,
        }
        for r in rows
    ))


def write_trajectory(trajectory: Trajectory, ideal: IdealPath, path: Path | str) -> Path:
    """One row per visited position, step 0 being the start."""
    points = trajectory.as_array()
    deviations, _ = project_onto_polyline(points, ideal.waypoints) if len(points) else ([], [])
    return write_rows(path, TRAJECTORY_HEADERS, (
        {
            "step": i,
            "x": float(points[i, 0]),
            "y": float(points[i, 1]),
            "carrying": trajectory.carrying[i],
            "collision": trajectory.collisions[i],
            "deviation": float(deviations[i]),
        }
        for i in range(len(points))
    ))


def write_decoder_bench(results: Iterable[SubjectAccuracy], path: Path | str) -> Path:
    return write_rows(path, DECODER_BENCH_HEADERS, (
        {
            "subject_id": r.subject_id,
            "mode": r.mode,
            "accuracy": r.accuracy,
            "tp": r.confusion.tp,
            "fp": r.confusion.fp,
            "tn": r.confusion.tn,
            "fn": r.confusion.fn,
        }
        for r in results
    ))


def parse_eval_rows(rows: Iterable[Mapping[str, str]]) -> list[EvalRecord]:
    return [
        EvalRecord(
            step=int(row["step"]),
            mean_return=float(row["mean_return"]),
            return_std=float(row["return_std"]),
            success_rate=float(row["success_rate"]),
            path_efficiency=float(row["path_efficiency"]),
            path_deviation=float(row["path_deviation"]),
        )
        for row in rows
    ]


def parse_optional_float(value: str) -> Optional[float]:
    return float(value) if value != "" else None

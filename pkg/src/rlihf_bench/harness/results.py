"""Reading an output directory written by emit_reports."""

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from rlihf_bench.config import BenchConfig, config_from_dict
from rlihf_bench.errors import ConfigError, ReportError
from rlihf_bench.export.csv_export import parse_eval_rows, read_rows
from rlihf_bench.export.json_export import MANIFEST_NAME
from rlihf_bench.models.records import Condition, EvalRecord, MetricStat, Phase, PhaseSummary

SUMMARY_COLUMNS = {
    "success_rate": ("success_rate_mean", "success_rate_std"),
    "path_efficiency": ("path_eff_mean", "path_eff_std"),
    "path_deviation": ("path_dev_mean", "path_dev_std"),
}


@dataclass
class RunResult:
    """One run's manifest entry and its eval curve."""
    run_id: str
    condition: Condition
    seed: int
    w_hf: float
    records: list[EvalRecord] = field(default_factory=list)
    checkpoint: Optional[str] = None
    online_accuracy: Optional[float] = None

    @property
    def final(self) -> Optional[EvalRecord]:
        return self.records[-1] if self.records else None


@dataclass
class Results:
    """A loaded output directory."""
    root: Path
    manifest: dict[str, Any]
    config: BenchConfig
    runs: list[RunResult] = field(default_factory=list)
    summaries: list[PhaseSummary] = field(default_factory=list)

    @property
    def content_hash(self) -> str:
        return self.manifest.get("content_hash", "")

    def run(self, run_id: str) -> RunResult:
        for run in self.runs:
            if run.run_id == run_id:
                return run
        raise KeyError(run_id)


def parse_summary_rows(rows: list[dict[str, str]]) -> list[PhaseSummary]:
    """Phase summaries from summary.csv rows (mean return is not tabulated there)."""
    summaries = []
    for row in rows:
        metrics = {
            metric: MetricStat(mean=float(row[mean]), std=float(row[std]))
            for metric, (mean, std) in SUMMARY_COLUMNS.items()
        }
        summaries.append(PhaseSummary(phase=Phase(row["phase"]), method=row["method"], count=0, metrics=metrics))
    return summaries


def load_results(out_dir: Path | str) -> Results:
    """Load the manifest, per-run eval CSVs and phase summary of an output directory.

    Raises:
        ReportError: When the manifest or a file it names is missing or malformed
    """
    root = Path(out_dir)
    manifest_path = root / MANIFEST_NAME
    try:
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ReportError(f"no manifest in {root}: {e}") from e
    except json.JSONDecodeError as e:
        raise ReportError(f"{manifest_path}: {e}") from e

    try:
        config = config_from_dict(manifest)
    except ConfigError as e:
        raise ReportError(f"{manifest_path}: {e}") from e

    try:
        runs = []
        for entry in manifest.get("runs", []):
            runs.append(RunResult(
                run_id=entry["run_id"],
                condition=Condition(entry["condition"]),
                seed=int(entry["seed"]),
                w_hf=float(entry["w_hf"]),
                records=parse_eval_rows(read_rows(root / entry["eval_csv"])),
                checkpoint=entry.get("checkpoint"),
                online_accuracy=(entry.get("online_confusion") or {}).get("accuracy"),
            ))
        summary_name = manifest.get("artifacts", {}).get("summary")
        summaries = parse_summary_rows(read_rows(root / summary_name)) if summary_name else []
    except OSError as e:
        raise ReportError(f"incomplete results in {root}: {e}") from e
    except (KeyError, ValueError) as e:
        raise ReportError(f"malformed results in {root}: {e!r}") from e

    return Results(root=root, manifest=manifest, config=config, runs=runs, summaries=summaries)

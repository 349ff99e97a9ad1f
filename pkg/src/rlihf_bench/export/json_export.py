"""JSON experiment manifest export."""

import hashlib
import json
from pathlib import Path
from typing import Any, Optional

from rlihf_bench import __version__
from rlihf_bench.models.records import ConfusionCounts, TrainingLog

MANIFEST_NAME = "manifest.json"


def canonical_json(data: Any) -> str:
    """Key-sorted compact JSON, the form that gets hashed."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def content_hash(data: Any) -> str:
    """Git blob sha1 of the canonical JSON encoding of data."""
    payload = canonical_json(data).encode("utf-8")
    return hashlib.sha1(b"blob %d\0" % len(payload) + payload).hexdigest()


def _serialize_confusion(confusion: ConfusionCounts) -> dict[str, Any]:
    return {
        "tp": confusion.tp,
        "fp": confusion.fp,
        "tn": confusion.tn,
        "fn": confusion.fn,
        "accuracy": None if confusion.total == 0 else confusion.accuracy,
    }


def _relative(path: Optional[str], root: Optional[Path]) -> Optional[str]:
    if path is None or root is None:
        return path
    try:
        return Path(path).resolve().relative_to(root.resolve()).as_posix()
    except ValueError:
        return path


def _serialize_run(log: TrainingLog, eval_csv: str, root: Optional[Path]) -> dict[str, Any]:
    return {
        "run_id": log.run_id,
        "condition": log.condition.value,
        "seed": log.seed,
        "w_hf": log.w_hf,
        "total_steps": log.total_steps,
        "episodes": log.episodes,
        "eval_csv": eval_csv,
        "eval_points": len(log.eval_records),
        "checkpoint": _relative(log.checkpoint_path, root),
        "skipped_feedback": log.skipped_feedback,
        "online_confusion": _serialize_confusion(log.online_confusion),
    }


def manifest_to_dict(
    config: dict[str, Any],
    logs: list[TrainingLog],
    eval_csvs: dict[str, str],
    artifacts: Optional[dict[str, str]] = None,
    root: Optional[Path] = None,
) -> dict[str, Any]:
    """Build the manifest document.

    Args:
        config: Fully resolved configuration as plain data
        logs: Completed training runs
        eval_csvs: run_id → eval CSV file name relative to the output directory
        artifacts: Other written files by role (summary, svg, ...)
        root: Output directory, used to relativise checkpoint paths

    Returns:
        Manifest dict; its ``config`` object loads back as a config file
    """
    return {
        "tool": "rlihf-bench",
        "version": __version__,
        "content_hash": content_hash(config),
        "config": config,
        "runs": [_serialize_run(log, eval_csvs[log.run_id], root) for log in logs],
        "artifacts": dict(sorted((artifacts or {}).items())),
    }


def export_json(data: dict[str, Any], path: Path | str | None = None) -> str:
    """Export a manifest (or any plain dict) to JSON.

    Args:
        data: The document to export
        path: Optional file path to write to

    Returns:
        JSON string
    """
    json_str = json.dumps(data, indent=2, sort_keys=False)

    if path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json_str + "\n", encoding="utf-8")

    return json_str

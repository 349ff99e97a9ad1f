"""Experiment orchestration: training runs, evaluation, aggregation and reports."""

from rlihf_bench.harness.phases import aggregate_phases, bucket_records
from rlihf_bench.harness.reports import ReportPaths, emit_reports, method_label, summarize
from rlihf_bench.harness.results import Results, RunResult, load_results
from rlihf_bench.harness.rng import derive_int, derive_rng, derive_seed_sequence
from rlihf_bench.harness.runner import RunSpec, eval_steps, evaluate, rollout, run_training
from rlihf_bench.harness.sweep import grid_specs, run_grid, sweep_specs, sweep_whf

__all__ = [
    "ReportPaths",
    "Results",
    "RunResult",
    "RunSpec",
    "aggregate_phases",
    "bucket_records",
    "derive_int",
    "derive_rng",
    "derive_seed_sequence",
    "emit_reports",
    "eval_steps",
    "evaluate",
    "grid_specs",
    "load_results",
    "method_label",
    "rollout",
    "run_grid",
    "run_training",
    "summarize",
    "sweep_specs",
    "sweep_whf",
]

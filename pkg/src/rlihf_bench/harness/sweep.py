"""Experiment grids and the feedback-weight sweep."""

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Optional

from rlihf_bench.config import BenchConfig
from rlihf_bench.env.planner import compute_ideal_path
from rlihf_bench.harness.runner import RunSpec, run_training
from rlihf_bench.models.records import Condition, TrainingLog
from rlihf_bench.models.scenario import IdealPath

logger = logging.getLogger(__name__)


def grid_specs(config: BenchConfig) -> list[RunSpec]:
    """One run per configured condition and seed."""
    exp = config.experiment
    return [
        RunSpec(condition, seed, exp.w_hf if condition is Condition.RLIHF else 0.0)
        for condition in exp.conditions
        for seed in exp.seeds
    ]


def sweep_specs(config: BenchConfig, weights: Optional[list[float]] = None) -> list[RunSpec]:
    """RLIHF runs for every weight and seed."""
    weights = list(weights) if weights else list(config.experiment.sweep_weights)
    return [RunSpec(Condition.RLIHF, seed, w) for w in weights for seed in config.experiment.seeds]


def _run_job(job: tuple[BenchConfig, RunSpec, Optional[Path], IdealPath]) -> TrainingLog:
    config, spec, out_dir, ideal = job
    return run_training(config, spec, out_dir=out_dir, ideal=ideal)


def run_grid(
    config: BenchConfig,
    specs: list[RunSpec],
    out_dir: Optional[Path] = None,
    parallel: Optional[int] = None,
) -> list[TrainingLog]:
    """Run specs, in worker processes when parallel > 1.

    Returns:
        Training logs in spec order
    """
    workers = parallel or config.experiment.parallel
    ideal = compute_ideal_path(config.run_scenario)
    jobs = [(config, spec, out_dir, ideal) for spec in specs]
    logger.info("running %d jobs on %d worker(s)", len(jobs), workers)
    if workers <= 1 or len(jobs) <= 1:
        return [_run_job(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_job, jobs))


def sweep_whf(
    config: BenchConfig,
    weights: Optional[list[float]] = None,
    out_dir: Optional[Path] = None,
    parallel: Optional[int] = None,
) -> dict[float, list[TrainingLog]]:
    """Multi-seed RLIHF runs for each feedback weight.

    Returns:
        w_hf → logs ordered by seed
    """
    logs = run_grid(config, sweep_specs(config, weights), out_dir, parallel)
    by_weight: dict[float, list[TrainingLog]] = {}
    for log in logs:
        by_weight.setdefault(log.w_hf, []).append(log)
    return by_weight

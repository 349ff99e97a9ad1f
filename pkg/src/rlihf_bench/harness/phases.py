"""Early/Mid/Late aggregation of evaluation records."""

from collections.abc import Iterable

import numpy as np

from rlihf_bench.errors import ReportError
from rlihf_bench.models.records import METRICS, EvalRecord, MetricStat, Phase, PhaseSummary


def bucket_records(records: Iterable[EvalRecord], total_steps: int) -> dict[Phase, list[EvalRecord]]:
    """Partition records into thirds of the step budget."""
    buckets: dict[Phase, list[EvalRecord]] = {phase: [] for phase in Phase}
    for record in records:
        buckets[Phase.of_step(record.step, total_steps)].append(record)
    return buckets


def aggregate_phases(
    records: Iterable[EvalRecord],
    total_steps: int,
    method: str = "",
    skip_empty: bool = False,
) -> list[PhaseSummary]:
    """Mean ± std of every metric per phase, pooled over whatever runs supplied the records.

    Args:
        records: Evaluation records of one method
        total_steps: Step budget the phases divide into thirds
        method: Method label carried by the summaries
        skip_empty: Leave out phases without records instead of raising

    Raises:
        ReportError: When a phase has no records and skip_empty is off
    """
    summaries = []
    for phase, bucket in bucket_records(records, total_steps).items():
        if not bucket:
            if skip_empty:
                continue
            raise ReportError(f"no evaluation records in the {phase.value} phase of {method or 'run'}")
        metrics = {}
        for metric in METRICS:
            values = np.array([getattr(r, metric) for r in bucket], dtype=float)
            metrics[metric] = MetricStat(mean=float(values.mean()), std=float(values.std()))
        summaries.append(PhaseSummary(phase=phase, method=method, count=len(bucket), metrics=metrics))
    return summaries

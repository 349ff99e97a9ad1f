"""Data models for rlihf-bench."""

from rlihf_bench.models.signal import (
    EpochLabel,
    SignalConfig,
    SampleFrame,
    EEGEpoch,
    SubjectProfile,
)
from rlihf_bench.models.scenario import (
    Obstacle,
    Scenario,
    EnvState,
    IdealPath,
    RewardComponents,
    StepOutcome,
    FeedbackEvent,
    Trajectory,
)
from rlihf_bench.models.records import (
    Condition,
    Phase,
    CompositeReward,
    RewardLogRow,
    EvalRecord,
    MetricStat,
    PhaseSummary,
    ConfusionCounts,
    TrainingLog,
)

__all__ = [
    "EpochLabel",
    "SignalConfig",
    "SampleFrame",
    "EEGEpoch",
    "SubjectProfile",
    "Obstacle",
    "Scenario",
    "EnvState",
    "IdealPath",
    "RewardComponents",
    "StepOutcome",
    "FeedbackEvent",
    "Trajectory",
    "Condition",
    "Phase",
    "CompositeReward",
    "RewardLogRow",
    "EvalRecord",
    "MetricStat",
    "PhaseSummary",
    "ConfusionCounts",
    "TrainingLog",
]

"""Data models for rewards, evaluation records and training logs."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Optional

import numpy as np


class Condition(Enum):
    """Reward condition an agent trains under."""
    SPARSE = "sparse"
    DENSE = "dense"
    RLIHF = "rlihf"

    @property
    def color(self) -> str:
        """Return the Rich color for this condition."""
        colors = {
            Condition.SPARSE: "grey70",
            Condition.DENSE: "cyan",
            Condition.RLIHF: "orange1",
        }
        return colors[self]

    @property
    def label(self) -> str:
        """Method label used in summary tables."""
        labels = {
            Condition.SPARSE: "RL sparse",
            Condition.DENSE: "RL dense",
            Condition.RLIHF: "RLIHF",
        }
        return labels[self]


class Phase(Enum):
    """Training phase (thirds of the step budget)."""
    EARLY = "Early"
    MID = "Mid"
    LATE = "Late"

    @classmethod
    def of_step(cls, step: int, total_steps: int) -> "Phase":
        index = min(2, (3 * step) // total_steps)
        return list(cls)[index]


@dataclass(frozen=True)
class CompositeReward:
    """Environment reward combined with decoded implicit feedback."""
    r_env: float
    r_hf: float                     # 1 - p_ErrP, in [0, 1]
    w_hf: float
    total: float
    centering: bool = True
    label: Optional[bool] = None    # observer's is_error
    p_errp: Optional[float] = None
    skipped: bool = False

    @property
    def r_hf_centered(self) -> float:
        return self.r_hf - 0.5


@dataclass(frozen=True)
class RewardLogRow:
    """One line of the per-step reward log."""
    step: int
    condition: Condition
    r_env: float
    r_hf: Optional[float]
    w_hf: float
    total: float
    label: Optional[bool]
    p_errp: Optional[float]


@dataclass(frozen=True)
class EvalRecord:
    """Metrics at one evaluation point."""
    step: int
    mean_return: float
    return_std: float
    success_rate: float
    path_efficiency: float
    path_deviation: float
    successes: int = 0
    rollouts: int = 0


METRICS = ("mean_return", "success_rate", "path_efficiency", "path_deviation")


@dataclass(frozen=True)
class MetricStat:
    """Mean ± std of one metric."""
    mean: float
    std: float

    def __str__(self) -> str:
        return f"{self.mean:.2f} ± {self.std:.2f}"


@dataclass(frozen=True)
class PhaseSummary:
    """Per-phase aggregate of eval records, pooled across seeds."""
    phase: Phase
    method: str
    count: int
    metrics: dict[str, MetricStat] = field(default_factory=dict)

    def stat(self, metric: str) -> MetricStat:
        return self.metrics[metric]


@dataclass(frozen=True)
class ConfusionCounts:
    """2×2 confusion counts with error as the positive class."""
    tp: int = 0
    fp: int = 0
    tn: int = 0
    fn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def accuracy(self) -> float:
        if self.total == 0:
            return float("nan")
        return (self.tp + self.tn) / self.total

    def as_matrix(self) -> np.ndarray:
        """Rows: true (non-error, error); columns: predicted."""
        return np.array([[self.tn, self.fp], [self.fn, self.tp]])

    def add(self, true_error: bool, predicted_error: bool) -> "ConfusionCounts":
        return ConfusionCounts(
            tp=self.tp + int(true_error and predicted_error),
            fp=self.fp + int(not true_error and predicted_error),
            tn=self.tn + int(not true_error and not predicted_error),
            fn=self.fn + int(true_error and not predicted_error),
        )


@dataclass
class TrainingLog:
    """Everything a single training run produced."""
    run_id: str
    condition: Condition
    seed: int
    w_hf: float
    total_steps: int
    eval_records: list[EvalRecord] = field(default_factory=list)
    reward_log: list[RewardLogRow] = field(default_factory=list)
    online_confusion: ConfusionCounts = field(default_factory=ConfusionCounts)
    skipped_feedback: int = 0
    episodes: int = 0
    checkpoint_path: Optional[str] = None
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def online_accuracy(self) -> float:
        return self.online_confusion.accuracy

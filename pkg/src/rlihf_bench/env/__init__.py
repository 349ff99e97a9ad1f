"""Pick-and-place navigation task, ideal path and trajectory metrics."""

from rlihf_bench.env.geometry import (
    project_onto_polyline,
    distance_to_polyline,
    progress_along,
    segment_clearance,
)
from rlihf_bench.env.planner import PlanningGrid, astar, string_pull, compute_ideal_path
from rlihf_bench.env.pickplace import (
    PickPlaceEnv,
    observation,
    reset_state,
    step_state,
    reward_sparse,
    reward_dense,
    reward_unified_eval,
    shaping_term,
)
from rlihf_bench.env.observer import observer_feedback
from rlihf_bench.env.metrics import path_deviation, path_efficiency, remaining_distance

__all__ = [
    "project_onto_polyline",
    "distance_to_polyline",
    "progress_along",
    "segment_clearance",
    "PlanningGrid",
    "astar",
    "string_pull",
    "compute_ideal_path",
    "PickPlaceEnv",
    "observation",
    "reset_state",
    "step_state",
    "reward_sparse",
    "reward_dense",
    "reward_unified_eval",
    "shaping_term",
    "observer_feedback",
    "path_deviation",
    "path_efficiency",
    "remaining_distance",
]

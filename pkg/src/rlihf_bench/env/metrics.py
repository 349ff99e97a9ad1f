"""Trajectory metrics against the ideal path."""

import numpy as np

from rlihf_bench.env.geometry import project_onto_polyline
from rlihf_bench.errors import EnvError
from rlihf_bench.models.scenario import EnvState, IdealPath, Scenario, Trajectory


def _points(trajectory: Trajectory | np.ndarray) -> np.ndarray:
    if isinstance(trajectory, Trajectory):
        return trajectory.as_array()
    return np.asarray(trajectory, dtype=float).reshape(-1, 2)


def path_deviation(trajectory: Trajectory | np.ndarray, ideal: IdealPath) -> float:
    """RMS distance from trajectory points to the ideal polyline.

    Raises:
        EnvError: On an empty trajectory
    """
    points = _points(trajectory)
    if len(points) == 0:
        raise EnvError("path_deviation of an empty trajectory")
    dist, _ = project_onto_polyline(points, ideal.waypoints)
    return float(np.sqrt(np.mean(dist ** 2)))


def remaining_distance(pos: np.ndarray, state: EnvState, scenario: Scenario) -> float:
    """Euclidean distance still needed to finish the task stage by stage."""
    if state.success:
        return 0.0
    if state.carrying:
        return float(np.linalg.norm(scenario.place_pos - pos))
    return float(
        np.linalg.norm(scenario.pick_pos - pos)
        + np.linalg.norm(scenario.place_pos - scenario.pick_pos)
    )


def path_efficiency(
    trajectory: Trajectory | np.ndarray,
    ideal: IdealPath,
    final_state: EnvState,
    scenario: Scenario,
) -> float:
    """Ideal length over executed length plus completion distance, clamped to [0, 1]."""
    points = _points(trajectory)
    if len(points) == 0:
        raise EnvError("path_efficiency of an empty trajectory")
    executed = float(np.sum(np.hypot(*np.diff(points, axis=0).T))) if len(points) > 1 else 0.0
    denominator = executed + remaining_distance(points[-1], final_state, scenario)
    if denominator <= 0:
        return 1.0
    return float(np.clip(ideal.total_length / denominator, 0.0, 1.0))

"""Simulated observer: labels each step as an error or not."""

from rlihf_bench.env.geometry import distance_to_polyline
from rlihf_bench.models.scenario import EnvState, FeedbackEvent, IdealPath, Scenario


def observer_feedback(state_after: EnvState, ideal: IdealPath, scenario: Scenario) -> FeedbackEvent:
    """Error iff clearance < d_safe or deviation > d_err (strict on both)."""
    pos = state_after.agent_pos
    clearance = scenario.clearance(pos)
    deviation = distance_to_polyline(pos, ideal.waypoints)
    return FeedbackEvent(
        is_error=bool(clearance < scenario.d_safe or deviation > scenario.d_err),
        step=state_after.step,
        clearance=clearance,
        deviation=deviation,
    )

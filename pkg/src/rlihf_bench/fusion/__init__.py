"""Composition of environment reward and decoded implicit feedback."""

from rlihf_bench.fusion.pipeline import (
    NEUTRAL_FEEDBACK,
    FeedbackMode,
    FeedbackWeight,
    PipelineConfig,
    FeedbackPipeline,
    compose,
    environment_reward,
    run_condition_step,
)

__all__ = [
    "NEUTRAL_FEEDBACK",
    "FeedbackMode",
    "FeedbackWeight",
    "PipelineConfig",
    "FeedbackPipeline",
    "compose",
    "environment_reward",
    "run_condition_step",
]

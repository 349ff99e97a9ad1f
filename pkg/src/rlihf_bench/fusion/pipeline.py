"""Implicit-feedback loop: observer event → decoded ErrP → composite reward."""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np

from rlihf_bench.agent.replay import Transition
from rlihf_bench.decoder.classifier import ClassifierParams, TrainConfig, decode_reward, p_errp, train
from rlihf_bench.decoder.oracle import OracleChannelConfig, oracle_decode
from rlihf_bench.env.observer import observer_feedback
from rlihf_bench.errors import ConfigError, EpochNotReady
from rlihf_bench.models.records import CompositeReward, Condition, ConfusionCounts
from rlihf_bench.models.scenario import FeedbackEvent, IdealPath, Scenario, StepOutcome
from rlihf_bench.models.signal import SignalConfig, SubjectProfile
from rlihf_bench.signal.session import StreamingSession, record_subject

logger = logging.getLogger(__name__)

NEUTRAL_FEEDBACK = 0.5


class FeedbackMode(Enum):
    """Where p_ErrP comes from."""
    ORACLE = "oracle"
    DECODED = "decoded"


@dataclass(frozen=True)
class FeedbackWeight:
    """Weight of the implicit reward in the composite."""
    w_hf: float = 0.1

    def __post_init__(self):
        if self.w_hf < 0:
            raise ConfigError(f"w_hf {self.w_hf} must be >= 0")


@dataclass(frozen=True)
class PipelineConfig:
    """Feedback channel configuration."""
    mode: FeedbackMode = FeedbackMode.ORACLE
    cadence: int = 1
    baseline_centering: bool = True
    oracle: OracleChannelConfig = field(default_factory=OracleChannelConfig)
    subject: SubjectProfile = field(default_factory=SubjectProfile)
    signal: SignalConfig = field(default_factory=SignalConfig)
    decoder: TrainConfig = field(default_factory=TrainConfig)
    calibration_trials: int = 400
    noise_std: Optional[float] = None

    def __post_init__(self):
        if self.cadence < 1:
            raise ConfigError("pipeline.cadence must be >= 1")
        if self.calibration_trials < 2:
            raise ConfigError("pipeline.calibration_trials must be >= 2")
        if self.noise_std is not None and self.noise_std < 0:
            raise ConfigError("pipeline.noise_std must be >= 0")


def compose(r_env: float, r_hf: float, w_hf: float, centering: bool = True) -> float:
    """r_env + w_hf·(r_hf − 0.5) with centering, r_env + w_hf·r_hf without."""
    baseline = NEUTRAL_FEEDBACK if centering else 0.0
    return r_env + w_hf * (r_hf - baseline)


class FeedbackPipeline:
    """Per-run feedback channel with its own random stream.

    In decoded mode every event is streamed through a StreamingSession
    (filter, re-reference, ring buffer) and classified by a fixed decoder;
    in oracle mode p_ErrP comes from the calibrated oracle channel.
    """

    def __init__(
        self,
        config: PipelineConfig,
        rng: np.random.Generator,
        classifier: Optional[ClassifierParams] = None,
    ):
        self.config = config
        self.rng = rng
        self.classifier = classifier
        self.session: Optional[StreamingSession] = None
        self.confusion = ConfusionCounts()
        self.skipped = 0
        self.events = 0

        if config.mode is FeedbackMode.DECODED:
            if self.classifier is None:
                self.classifier = self.calibrate()
            self.session = StreamingSession(config.subject, config.signal, rng, noise_std=config.noise_std)

    def calibrate(self) -> ClassifierParams:
        """Train the fixed decoder on a balanced calibration recording."""
        cfg = self.config
        dataset = record_subject(cfg.subject, cfg.signal, cfg.calibration_trials, self.rng, cfg.noise_std)
        decoder_cfg = cfg.decoder
        if decoder_cfg.batch_size > len(dataset):
            decoder_cfg = replace(decoder_cfg, batch_size=len(dataset))
        logger.info("calibrating decoder for %s on %d trials", cfg.subject.subject_id, len(dataset))
        return train(dataset, decoder_cfg)

    def decode_event(self, is_error: bool) -> Optional[float]:
        """p_ErrP for one feedback event, or None when the epoch is not ready."""
        self.events += 1
        if self.config.mode is FeedbackMode.ORACLE:
            prediction = oracle_decode(is_error, self.config.oracle, self.rng)
        else:
            onset = self.session.stream_event(is_error)
            try:
                epoch = self.session.buffer.extract_epoch(onset)
            except EpochNotReady:
                self.skipped += 1
                logger.debug("feedback event %d skipped: epoch at %d not ready", self.events, onset)
                return None
            prediction = self.classifier.predict(epoch)
        self.confusion = self.confusion.add(is_error, prediction.predicted_error)
        return p_errp(prediction)

    def feedback_step(self, event: FeedbackEvent, r_env: float, w_hf: float) -> CompositeReward:
        """Decode cadence events for one observer label and compose the reward.

        r_hf is the mean of 1 − p_ErrP over the decoded events; when every
        event is skipped it is the neutral 0.5.
        """
        decoded = [self.decode_event(event.is_error) for _ in range(self.config.cadence)]
        p_values = [p for p in decoded if p is not None]
        if p_values:
            mean_p = float(np.mean(p_values))
            r_hf = float(np.mean([decode_reward(p) for p in p_values]))
        else:
            mean_p, r_hf = None, NEUTRAL_FEEDBACK
        centering = self.config.baseline_centering
        return CompositeReward(
            r_env=r_env,
            r_hf=r_hf,
            w_hf=w_hf,
            total=compose(r_env, r_hf, w_hf, centering),
            centering=centering,
            label=event.is_error,
            p_errp=mean_p,
            skipped=not p_values,
        )

    @property
    def skip_rate(self) -> float:
        return self.skipped / self.events if self.events else 0.0


def environment_reward(condition: Condition, outcome: StepOutcome, rlihf_env_reward: str = "sparse") -> float:
    """The condition's environment reward for one step."""
    if condition is Condition.DENSE:
        return outcome.rewards.dense
    if condition is Condition.RLIHF and rlihf_env_reward == "dense":
        return outcome.rewards.dense
    return outcome.rewards.sparse


def run_condition_step(
    condition: Condition,
    obs: np.ndarray,
    action: np.ndarray,
    outcome: StepOutcome,
    ideal: IdealPath,
    scenario: Scenario,
    pipeline: Optional[FeedbackPipeline] = None,
    w_hf: float = 0.0,
    rlihf_env_reward: str = "sparse",
) -> tuple[Transition, Optional[CompositeReward]]:
    """Build the transition stored for one step under a reward condition.

    Sparse and dense store their environment reward; RLIHF stores the
    composite of the environment reward and the decoded feedback.

    Returns:
        (transition, composite reward or None outside RLIHF)
    """
    r_env = environment_reward(condition, outcome, rlihf_env_reward)
    composite = None
    reward = r_env
    if condition is Condition.RLIHF:
        if pipeline is None:
            raise ConfigError("rlihf condition needs a feedback pipeline")
        event = observer_feedback(outcome.state, ideal, scenario)
        composite = pipeline.feedback_step(event, r_env, w_hf)
        reward = composite.total
    transition = Transition(
        obs=obs,
        action=np.asarray(action, dtype=float),
        reward=float(reward),
        next_obs=outcome.observation,
        done=outcome.terminated,
    )
    return transition, composite

"""Training and evaluation of one run (condition × seed × weight)."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from rlihf_bench.agent.checkpoint import save_checkpoint
from rlihf_bench.agent.replay import ReplayBuffer
from rlihf_bench.agent.sac import Actor, SACAgent, sample_action
from rlihf_bench.config import BenchConfig
from rlihf_bench.decoder.classifier import ClassifierParams
from rlihf_bench.env.metrics import path_deviation, path_efficiency
from rlihf_bench.env.pickplace import PickPlaceEnv, reset_state, step_state
from rlihf_bench.env.planner import compute_ideal_path
from rlihf_bench.fusion.pipeline import FeedbackPipeline, run_condition_step
from rlihf_bench.harness.rng import derive_int, derive_rng
from rlihf_bench.models.records import Condition, EvalRecord, RewardLogRow, TrainingLog
from rlihf_bench.models.scenario import IdealPath, Scenario, Trajectory

logger = logging.getLogger(__name__)

SKIP_WARN_RATE = 0.01


@dataclass(frozen=True)
class RunSpec:
    """One cell of the experiment grid."""
    condition: Condition
    seed: int
    w_hf: float = 0.0

    @property
    def run_id(self) -> str:
        if self.condition is Condition.RLIHF:
            return f"{self.condition.value}_w{self.w_hf:g}_s{self.seed}"
        return f"{self.condition.value}_s{self.seed}"


def eval_steps(total_steps: int, interval: int) -> list[int]:
    """Every multiple of interval up to total_steps, plus total_steps itself."""
    steps = list(range(interval, total_steps + 1, interval))
    if not steps or steps[-1] != total_steps:
        steps.append(total_steps)
    return steps


def rollout(
    actor: Actor,
    scenario: Scenario,
    ideal: IdealPath,
    rng: np.random.Generator,
) -> tuple[float, Trajectory]:
    """One deterministic-policy episode under the unified evaluation reward."""
    state, obs = reset_state(scenario, rng)
    trajectory = Trajectory()
    trajectory.append(state.agent_pos, state.carrying, False)
    total = 0.0
    while not state.done:
        action, _ = sample_action(actor, obs, rng, deterministic=True)
        outcome = step_state(scenario, ideal, state, action)
        total += outcome.rewards.unified
        state, obs = outcome.state, outcome.observation
        trajectory.append(state.agent_pos, state.carrying, outcome.collision)
    trajectory.final_state = state
    return total, trajectory


def evaluate(
    actor: Actor,
    scenario: Scenario,
    ideal: IdealPath,
    n: int = 5,
    rng: Optional[np.random.Generator] = None,
    step: int = 0,
) -> tuple[EvalRecord, list[Trajectory]]:
    """n deterministic rollouts summarised as one EvalRecord.

    Returns:
        The record and the rollout trajectories
    """
    rng = rng if rng is not None else np.random.default_rng(0)
    returns, trajectories = [], []
    for _ in range(n):
        total, trajectory = rollout(actor, scenario, ideal, rng)
        returns.append(total)
        trajectories.append(trajectory)

    successes = sum(int(t.final_state.success) for t in trajectories)
    record = EvalRecord(
        step=step,
        mean_return=float(np.mean(returns)),
        return_std=float(np.std(returns)),
        success_rate=successes / n,
        path_efficiency=float(np.mean([
            path_efficiency(t, ideal, t.final_state, scenario) for t in trajectories
        ])),
        path_deviation=float(np.mean([path_deviation(t, ideal) for t in trajectories])),
        successes=successes,
        rollouts=n,
    )
    return record, trajectories


def run_training(
    config: BenchConfig,
    spec: RunSpec,
    out_dir: Optional[Path] = None,
    ideal: Optional[IdealPath] = None,
    classifier: Optional[ClassifierParams] = None,
) -> TrainingLog:
    """Train one SAC agent under a reward condition with periodic evaluation.

    Random streams are derived from (master_seed, seed, label) so that runs
    differing only in condition or w_hf share env and agent randomness.

    Args:
        config: Resolved configuration
        spec: Condition, seed and feedback weight
        out_dir: Where the policy checkpoint goes (none written when None)
        ideal: Precomputed ideal path for config.run_scenario
        classifier: Pre-trained decoder for decoded-mode feedback

    Returns:
        The run's training log
    """
    exp = config.experiment
    scenario = config.run_scenario
    ideal = ideal if ideal is not None else compute_ideal_path(scenario)
    master = exp.master_seed

    if exp.total_steps % exp.episode_len:
        logger.warning(
            "total_steps %d is not a multiple of episode_len %d; last episode is cut short",
            exp.total_steps, exp.episode_len,
        )

    env = PickPlaceEnv(scenario, ideal)
    obs_dim = scenario.observation_size
    act_dim = env.action_space.shape[0]
    agent = SACAgent(obs_dim, act_dim, config.sac, derive_rng(master, spec.seed, "agent"))
    buffer = ReplayBuffer(obs_dim, act_dim, config.sac.buffer_capacity, rng=derive_rng(master, spec.seed, "replay"))
    eval_rng = derive_rng(master, spec.seed, "eval")
    pipeline = None
    if spec.condition is Condition.RLIHF:
        pipeline = FeedbackPipeline(config.pipeline, derive_rng(master, spec.seed, "channel"), classifier)

    log = TrainingLog(
        run_id=spec.run_id,
        condition=spec.condition,
        seed=spec.seed,
        w_hf=spec.w_hf,
        total_steps=exp.total_steps,
        config=config.to_dict(),
    )
    checkpoints = set(eval_steps(exp.total_steps, exp.eval_interval))
    logger.info("run %s: %d steps", spec.run_id, exp.total_steps)

    obs, _ = env.reset(seed=derive_int(master, spec.seed, "env"))
    for step in range(1, exp.total_steps + 1):
        if step <= config.sac.start_steps:
            action = agent.random_action()
        else:
            action = agent.act(obs)
        outcome = env.transition(action)
        transition, composite = run_condition_step(
            spec.condition, obs, action, outcome, ideal, scenario,
            pipeline=pipeline, w_hf=spec.w_hf, rlihf_env_reward=exp.rlihf_env_reward,
        )
        buffer.add(transition)

        if exp.log_rewards:
            log.reward_log.append(RewardLogRow(
                step=step,
                condition=spec.condition,
                r_env=composite.r_env if composite else transition.reward,
                r_hf=composite.r_hf if composite else None,
                w_hf=spec.w_hf if composite else 0.0,
                total=transition.reward,
                label=composite.label if composite else None,
                p_errp=composite.p_errp if composite else None,
            ))

        if step > config.sac.start_steps and step % config.sac.update_every == 0 and len(buffer) >= config.sac.batch_size:
            agent.update(buffer)

        obs = outcome.observation
        if outcome.done:
            log.episodes += 1
            obs, _ = env.reset()

        if step in checkpoints:
            record, _ = evaluate(agent.actor, scenario, ideal, exp.eval_rollouts, eval_rng, step=step)
            log.eval_records.append(record)
            logger.info(
                "run %s step %d: return %.2f ± %.2f, success %.2f",
                spec.run_id, step, record.mean_return, record.return_std, record.success_rate,
            )

    if pipeline is not None:
        log.online_confusion = pipeline.confusion
        log.skipped_feedback = pipeline.skipped
        if pipeline.skip_rate > SKIP_WARN_RATE:
            logger.warning("run %s skipped %.1f%% of feedback events", spec.run_id, 100 * pipeline.skip_rate)

    if out_dir is not None:
        path = save_checkpoint(agent.actor, Path(out_dir) / "checkpoints" / f"{spec.run_id}.sacp")
        log.checkpoint_path = str(path)
    return log

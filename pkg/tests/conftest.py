"""Shared fixtures."""

from dataclasses import replace

import numpy as np
import pytest

from rlihf_bench.agent.sac import SACConfig
from rlihf_bench.config import BenchConfig, ExperimentConfig
from rlihf_bench.models.records import Condition
from rlihf_bench.models.scenario import Scenario
from rlihf_bench.models.signal import SignalConfig, SubjectProfile


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def small_signal() -> SignalConfig:
    """Four channels, half-second epochs, short filter."""
    return SignalConfig(
        channels=4,
        epoch_samples=128,
        numtaps=65,
        gap_samples=32,
        buffer_capacity=1024,
    )


@pytest.fixture
def small_profile() -> SubjectProfile:
    return SubjectProfile(
        subject_id="T01",
        spatial_weights=(0.6, 1.0, 0.8, 0.4),
        latency_jitter_std=0.0,
        noise_std=1.0,
    )


@pytest.fixture
def open_scenario() -> Scenario:
    """Default workspace without obstacles."""
    return Scenario(obstacles=())


def make_tiny_config() -> BenchConfig:
    """A few hundred steps per run; enough to exercise every code path."""
    return BenchConfig(
        experiment=ExperimentConfig(
            conditions=(Condition.SPARSE, Condition.DENSE, Condition.RLIHF),
            total_steps=300,
            episode_len=100,
            eval_interval=60,
            eval_rollouts=2,
            seeds=(0,),
        ),
        sac=replace(SACConfig(), batch_size=32, start_steps=50, hidden=(16, 16), buffer_capacity=1000),
    )


@pytest.fixture
def tiny_config() -> BenchConfig:
    return make_tiny_config()

"""Leave-one-subject-out evaluation of the ErrP classifier."""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import stats

from rlihf_bench.decoder.classifier import TrainConfig, evaluate_accuracy, train
from rlihf_bench.errors import DecoderError
from rlihf_bench.models.records import ConfusionCounts
from rlihf_bench.models.signal import EEGEpoch, SignalConfig, SubjectProfile
from rlihf_bench.signal.session import StreamingSession, balanced_labels

logger = logging.getLogger(__name__)

MODES = ("pretrain", "online", "loso")


@dataclass
class SubjectDataset:
    """Labelled epochs of one subject, plus its profile when known."""
    subject_id: str
    epochs: list[EEGEpoch] = field(default_factory=list)
    profile: Optional[SubjectProfile] = None


@dataclass(frozen=True)
class SubjectAccuracy:
    """One row of the decoder benchmark."""
    subject_id: str
    mode: str
    accuracy: float
    confusion: ConfusionCounts


def stratified_split(
    epochs: list[EEGEpoch],
    holdout_fraction: float,
    rng: np.random.Generator,
) -> tuple[list[EEGEpoch], list[EEGEpoch]]:
    """Split epochs into (train, held-out) keeping the class ratio in both."""
    train_part, held_out = [], []
    for label in sorted({e.label for e in epochs}, key=lambda lab: lab.value):
        group = [e for e in epochs if e.label == label]
        order = rng.permutation(len(group))
        n_held = int(round(holdout_fraction * len(group)))
        held_out.extend(group[i] for i in order[:n_held])
        train_part.extend(group[i] for i in order[n_held:])
    return train_part, held_out


def loso_evaluate(
    subjects: list[SubjectDataset],
    config: TrainConfig,
    signal_config: Optional[SignalConfig] = None,
    online_trials: int = 200,
    holdout_fraction: float = 0.2,
    rng: Optional[np.random.Generator] = None,
) -> list[SubjectAccuracy]:
    """Leave-one-subject-out accuracies for every subject.

    For each subject s a classifier is trained on the pooled epochs of all
    other subjects minus a stratified held-out split. It is scored on that
    split ("pretrain"), on s's recorded epochs ("loso") and, when s carries
    a profile, on a fresh streamed replay session of s ("online").

    Args:
        subjects: Per-subject datasets, at least two
        config: Classifier training hyperparameters
        signal_config: Stream geometry for the online replay
        online_trials: Events per online replay session
        holdout_fraction: Pooled fraction kept out of training
        rng: Random source for splits and replay (seeded from config when None)

    Returns:
        One SubjectAccuracy per subject and mode, in subject order
    """
    if len(subjects) < 2:
        raise DecoderError(f"LOSO needs at least 2 subjects, got {len(subjects)}")
    rng = rng if rng is not None else np.random.default_rng(config.rng_seed)
    signal_config = signal_config or SignalConfig()

    results: list[SubjectAccuracy] = []
    for held in subjects:
        pooled = [e for s in subjects if s is not held for e in s.epochs]
        train_part, held_out = stratified_split(pooled, holdout_fraction, rng)
        theta = train(train_part, config)

        if held_out:
            report = evaluate_accuracy(theta, held_out)
            results.append(SubjectAccuracy(held.subject_id, "pretrain", report.accuracy, report.confusion))

        if held.profile is not None and online_trials > 0:
            session = StreamingSession(held.profile, signal_config, rng)
            replay = session.record(balanced_labels(online_trials, rng))
            report = evaluate_accuracy(theta, replay)
            results.append(SubjectAccuracy(held.subject_id, "online", report.accuracy, report.confusion))

        report = evaluate_accuracy(theta, held.epochs)
        results.append(SubjectAccuracy(held.subject_id, "loso", report.accuracy, report.confusion))
        logger.info("LOSO %s: accuracy %.3f", held.subject_id, report.accuracy)
    return results


def accuracies_by_mode(results: list[SubjectAccuracy], mode: str = "loso") -> dict[str, float]:
    """subject_id → accuracy for one mode."""
    if mode not in MODES:
        raise DecoderError(f"unknown mode {mode!r}")
    return {r.subject_id: r.accuracy for r in results if r.mode == mode}


def noise_rank_correlation(noise_levels: list[float], accuracies: list[float]) -> float:
    """Spearman ρ between subject noise and decoder accuracy (expected ≤ 0)."""
    if len(noise_levels) != len(accuracies) or len(noise_levels) < 3:
        raise DecoderError("rank correlation needs at least 3 paired values")
    rho = stats.spearmanr(noise_levels, accuracies).statistic
    return float(rho)

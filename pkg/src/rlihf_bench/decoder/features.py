"""Binned-mean epoch features with frozen standardization."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from rlihf_bench.errors import DecoderError
from rlihf_bench.models.signal import EEGEpoch


def bin_means(data: np.ndarray, bins: int) -> np.ndarray:
    """Mean amplitude of each channel over equal-width temporal bins.

    Args:
        data: (C, T) epoch matrix
        bins: Number of bins B; T must be divisible by B

    Returns:
        (C * B,) raw features, channel-major
    """
    channels, samples = data.shape
    if bins < 1 or samples % bins:
        raise DecoderError(f"{samples} samples cannot be split into {bins} equal bins")
    return data.reshape(channels, bins, samples // bins).mean(axis=2).ravel()


@dataclass(frozen=True)
class FeatureScaler:
    """Per-feature standardization fitted on the training set."""
    mean: np.ndarray
    std: np.ndarray

    @classmethod
    def fit(cls, features: np.ndarray) -> "FeatureScaler":
        std = features.std(axis=0)
        return cls(mean=features.mean(axis=0), std=np.where(std > 1e-12, std, 1.0))

    @classmethod
    def identity(cls, size: int) -> "FeatureScaler":
        return cls(mean=np.zeros(size), std=np.ones(size))

    def transform(self, features: np.ndarray) -> np.ndarray:
        if features.shape[-1] != self.mean.shape[0]:
            raise DecoderError(f"{features.shape[-1]} features, scaler fitted on {self.mean.shape[0]}")
        return (features - self.mean) / self.std


def extract_features(
    epoch: EEGEpoch,
    bins: int = 16,
    scaler: Optional[FeatureScaler] = None,
    shape: Optional[tuple[int, int]] = None,
) -> np.ndarray:
    """Feature vector of one epoch.

    Args:
        epoch: Input epoch
        bins: Temporal bins per channel
        scaler: Training-set standardization (raw features when None)
        shape: Expected (C, T); mismatch raises DecoderError

    Returns:
        (C * B,) features
    """
    if shape is not None and epoch.data.shape != tuple(shape):
        raise DecoderError(f"epoch shape {epoch.data.shape} != expected {tuple(shape)}")
    raw = bin_means(epoch.data, bins)
    return raw if scaler is None else scaler.transform(raw)


def feature_matrix(epochs: list[EEGEpoch], bins: int = 16) -> np.ndarray:
    """Raw features for a list of same-shaped epochs, (N, C * B)."""
    if not epochs:
        raise DecoderError("no epochs")
    shape = epochs[0].data.shape
    return np.stack([extract_features(e, bins, shape=shape) for e in epochs])


def label_vector(epochs: list[EEGEpoch]) -> np.ndarray:
    """0/1 error labels; every epoch must be labelled."""
    if any(e.label is None for e in epochs):
        raise DecoderError("dataset contains unlabelled epochs")
    return np.array([e.label.value for e in epochs], dtype=int)

"""Data models for synthetic EEG streams and epochs."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

from rlihf_bench.errors import ConfigError, SignalError


class EpochLabel(Enum):
    """Ground-truth label of a feedback event."""
    NON_ERROR = 0
    ERROR = 1

    @property
    def color(self) -> str:
        """Return the Rich color for this label."""
        return "red" if self is EpochLabel.ERROR else "green"

    @property
    def symbol(self) -> str:
        """Return a symbol for this label."""
        return "✗" if self is EpochLabel.ERROR else "✓"


@dataclass(frozen=True)
class SignalConfig:
    """Stream geometry and preprocessing parameters."""
    channels: int = 8               # C
    rate_hz: float = 256.0
    epoch_samples: int = 512        # T = 2 s at 256 Hz
    low_hz: float = 1.0
    high_hz: float = 20.0
    numtaps: int = 257
    gap_samples: int = 128          # quiet tail after each streamed epoch
    buffer_capacity: int = 4096

    def __post_init__(self):
        if self.channels < 2:
            raise ConfigError("signal.channels must be >= 2 for common-average reference")
        if self.epoch_samples < 1:
            raise ConfigError("signal.epoch_samples must be >= 1")
        if not 0 < self.low_hz < self.high_hz < self.rate_hz / 2:
            raise ConfigError(
                f"signal band must satisfy 0 < low < high < rate/2, got "
                f"[{self.low_hz}, {self.high_hz}] at {self.rate_hz} Hz"
            )
        if self.numtaps % 2 == 0:
            raise ConfigError("signal.numtaps must be odd (type I linear phase)")
        if self.gap_samples < self.group_delay:
            raise ConfigError(
                f"signal.gap_samples ({self.gap_samples}) must cover the filter "
                f"group delay ({self.group_delay})"
            )
        if self.buffer_capacity < self.epoch_samples + self.gap_samples:
            raise ConfigError("signal.buffer_capacity must hold at least one epoch plus gap")

    @property
    def group_delay(self) -> int:
        """Group delay of the band-pass in samples."""
        return (self.numtaps - 1) // 2

    @property
    def epoch_ms(self) -> float:
        """Epoch duration in milliseconds."""
        return 1000.0 * self.epoch_samples / self.rate_hz


@dataclass(frozen=True)
class SampleFrame:
    """One multichannel sample of the continuous stream."""
    sample_index: int
    values: np.ndarray              # (C,) microvolts

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise SignalError(f"non-finite sample at index {self.sample_index}")


@dataclass
class EEGEpoch:
    """A C×T window aligned to a feedback onset."""
    data: np.ndarray                # (C, T) microvolts
    onset_index: int
    subject_id: str
    label: Optional[EpochLabel] = None

    def __post_init__(self):
        if self.data.ndim != 2:
            raise SignalError(f"epoch data must be C×T, got shape {self.data.shape}")
        if not np.all(np.isfinite(self.data)):
            raise SignalError(f"non-finite epoch data at onset {self.onset_index}")

    @property
    def channels(self) -> int:
        """Number of channels C."""
        return self.data.shape[0]

    @property
    def samples(self) -> int:
        """Number of time points T."""
        return self.data.shape[1]

    @property
    def is_error(self) -> Optional[bool]:
        """True for error epochs, None when unlabeled."""
        if self.label is None:
            return None
        return self.label is EpochLabel.ERROR


@dataclass(frozen=True)
class SubjectProfile:
    """Synthetic participant: ERP template and background noise."""
    subject_id: str = "S01"
    n250_amplitude: float = -4.0    # µV, negative lobe
    p320_amplitude: float = 6.0     # µV, positive lobe
    n250_latency_ms: float = 250.0
    p320_latency_ms: float = 320.0
    lobe_width_ms: float = 30.0
    latency_jitter_std: float = 10.0
    noise_std: float = 4.0
    spatial_weights: tuple[float, ...] = field(
        default=(0.6, 0.8, 1.0, 0.9, 0.7, 0.5, 0.4, 0.3)
    )

    def __post_init__(self):
        if not self.noise_std > 0:
            raise ConfigError(f"{self.subject_id}: noise_std must be > 0")
        if self.lobe_width_ms <= 0:
            raise ConfigError(f"{self.subject_id}: lobe_width_ms must be > 0")
        weights = np.asarray(self.spatial_weights, dtype=float)
        if np.any(weights < 0) or np.any(weights > 1):
            raise ConfigError(f"{self.subject_id}: spatial_weights must lie in [0, 1]")
        if not np.any(weights > 0):
            raise ConfigError(f"{self.subject_id}: spatial_weights are all zero")
        for latency in self.peak_latencies:
            low = latency - 3 * self.latency_jitter_std
            high = latency + 3 * self.latency_jitter_std
            if low < 0 or high >= 2000:
                raise ConfigError(
                    f"{self.subject_id}: latency {latency} ms ± 3·jitter leaves [0, 2000) ms"
                )

    @property
    def peak_latencies(self) -> tuple[float, float]:
        """(n250, p320) latencies in milliseconds."""
        return (self.n250_latency_ms, self.p320_latency_ms)

    @property
    def channels(self) -> int:
        """Channel count implied by the spatial weights."""
        return len(self.spatial_weights)

    @property
    def snr_db(self) -> float:
        """Peak-to-noise ratio of the strongest channel, in dB."""
        peak = max(abs(self.n250_amplitude), abs(self.p320_amplitude)) * max(self.spatial_weights)
        return float(20.0 * np.log10(peak / self.noise_std))

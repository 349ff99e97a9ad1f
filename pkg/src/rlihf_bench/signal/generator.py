"""Synthetic EEG-like streams with ErrP deflections at error onsets."""

import logging
from typing import Optional, Sequence

import numpy as np

from rlihf_bench.errors import SignalError
from rlihf_bench.models.signal import SignalConfig, SubjectProfile

logger = logging.getLogger(__name__)


def erp_template(
    profile: SubjectProfile,
    config: SignalConfig,
    shift_ms: float = 0.0,
) -> np.ndarray:
    """Biphasic error template for one epoch.

    Args:
        profile: Subject whose amplitudes, latencies and spatial weights are used
        config: Stream geometry (rate, epoch length)
        shift_ms: Latency shift applied to both lobes

    Returns:
        (C, T) template in microvolts
    """
    t_ms = np.arange(config.epoch_samples) * 1000.0 / config.rate_hz
    width = profile.lobe_width_ms
    wave = (
        profile.n250_amplitude * np.exp(-0.5 * ((t_ms - profile.n250_latency_ms - shift_ms) / width) ** 2)
        + profile.p320_amplitude * np.exp(-0.5 * ((t_ms - profile.p320_latency_ms - shift_ms) / width) ** 2)
    )
    return np.outer(np.asarray(profile.spatial_weights, dtype=float), wave)


def background_noise(
    n_samples: int,
    channels: int,
    noise_std: float,
    rng: np.random.Generator,
) -> np.ndarray:
    """White plus 1/f-shaped noise with the requested standard deviation.

    Returns:
        (n_samples, channels) noise, zero mean
    """
    if noise_std == 0 or n_samples == 0:
        return np.zeros((n_samples, channels))

    white = rng.standard_normal((n_samples, channels))

    spectrum = np.fft.rfft(rng.standard_normal((n_samples, channels)), axis=0)
    freqs = np.fft.rfftfreq(n_samples)
    scale = np.zeros_like(freqs)
    scale[1:] = 1.0 / np.sqrt(freqs[1:])
    pink = np.fft.irfft(spectrum * scale[:, None], n=n_samples, axis=0)
    pink_std = pink.std(axis=0)
    pink = np.divide(pink, pink_std, out=np.zeros_like(pink), where=pink_std > 0)

    return noise_std * (white + pink) / np.sqrt(2.0)


def generate_stream(
    profile: SubjectProfile,
    error_onsets: Sequence[int],
    nonerror_onsets: Sequence[int],
    duration: int,
    rng: np.random.Generator,
    config: Optional[SignalConfig] = None,
    noise_std: Optional[float] = None,
) -> np.ndarray:
    """Generate a continuous multichannel stream.

    Non-error onsets are accepted for symmetry with the labelled event list;
    they add no template.

    Args:
        profile: Synthetic subject
        error_onsets: Sample indices where an ErrP template starts
        nonerror_onsets: Sample indices of non-error feedback events
        duration: Stream length in samples
        rng: Random source for noise and latency jitter
        config: Stream geometry (defaults to SignalConfig())
        noise_std: Overrides profile.noise_std (0 gives the bare templates)

    Returns:
        (duration, C) stream in microvolts
    """
    config = config or SignalConfig()
    if profile.channels != config.channels:
        raise SignalError(
            f"{profile.subject_id} has {profile.channels} spatial weights, "
            f"stream has {config.channels} channels"
        )
    for onset in [*error_onsets, *nonerror_onsets]:
        if onset < 0 or onset + config.epoch_samples > duration:
            raise SignalError(
                f"onset {onset} out of range for duration {duration} "
                f"with epoch length {config.epoch_samples}"
            )

    sigma = profile.noise_std if noise_std is None else noise_std
    if sigma < 0:
        raise SignalError(f"noise_std must be >= 0, got {sigma}")

    stream = background_noise(duration, config.channels, sigma, rng)
    T = config.epoch_samples
    for onset in sorted(error_onsets):
        shift = 0.0
        if profile.latency_jitter_std > 0:
            shift = float(rng.normal(0.0, profile.latency_jitter_std))
        stream[onset:onset + T] += erp_template(profile, config, shift_ms=shift).T
    return stream


def make_cohort(
    n_subjects: int,
    rng: np.random.Generator,
    noise_min: float = 1.0,
    noise_max: float = 40.0,
    channels: int = 8,
) -> list[SubjectProfile]:
    """Build synthetic subjects with geometrically spaced noise levels.

    Subjects are ordered by increasing noise (decreasing SNR). Amplitudes,
    latencies and spatial topographies vary per subject.
    """
    if n_subjects < 1:
        raise SignalError("cohort needs at least one subject")
    noise_levels = np.geomspace(noise_min, noise_max, n_subjects)
    electrode_axis = np.linspace(0.0, 1.0, channels)
    cohort = []
    for index, noise in enumerate(noise_levels):
        peak = rng.uniform(0.3, 0.7)
        weights = 0.25 + 0.75 * np.exp(-0.5 * ((electrode_axis - peak) / 0.3) ** 2)
        cohort.append(SubjectProfile(
            subject_id=f"S{index + 1:02d}",
            n250_amplitude=float(-4.0 * rng.uniform(0.8, 1.2)),
            p320_amplitude=float(6.0 * rng.uniform(0.8, 1.2)),
            n250_latency_ms=float(250.0 + rng.uniform(-20.0, 20.0)),
            p320_latency_ms=float(320.0 + rng.uniform(-20.0, 20.0)),
            lobe_width_ms=float(rng.uniform(25.0, 40.0)),
            latency_jitter_std=float(rng.uniform(5.0, 15.0)),
            noise_std=float(noise),
            spatial_weights=tuple(float(w) for w in np.clip(weights, 0.0, 1.0)),
        ))
    logger.debug(
        "cohort of %d subjects, noise %.2f..%.2f µV", n_subjects, noise_min, noise_max
    )
    return cohort

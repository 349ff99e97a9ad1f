"""Streaming replay of a synthetic subject through the preprocessing chain."""

import logging
from typing import Optional

import numpy as np

from rlihf_bench.models.signal import EEGEpoch, EpochLabel, SignalConfig, SubjectProfile
from rlihf_bench.signal.generator import generate_stream
from rlihf_bench.signal.preprocess import StreamingBandpass, design_bandpass, rereference_block
from rlihf_bench.signal.ring_buffer import EpochRingBuffer

logger = logging.getLogger(__name__)


class StreamingSession:
    """Produces one preprocessed, onset-aligned epoch per feedback event.

    Each event appends a chunk of T + gap raw samples with the event onset
    at the chunk start. The chunk is band-passed with carried filter state,
    re-referenced and written to the ring buffer; the epoch is then read
    back at the onset shifted by the filter group delay.
    """

    def __init__(
        self,
        profile: SubjectProfile,
        config: SignalConfig,
        rng: np.random.Generator,
        noise_std: Optional[float] = None,
    ):
        self.profile = profile
        self.config = config
        self.rng = rng
        self.noise_std = noise_std
        self.bandpass = StreamingBandpass(
            design_bandpass(config.low_hz, config.high_hz, config.rate_hz, config.numtaps),
            config.channels,
        )
        self.buffer = EpochRingBuffer(
            capacity=config.buffer_capacity,
            channels=config.channels,
            epoch_samples=config.epoch_samples,
            subject_id=profile.subject_id,
        )
        self.events = 0
        self._warm_up()

    @property
    def chunk_samples(self) -> int:
        return self.config.epoch_samples + self.config.gap_samples

    def _append(self, raw: np.ndarray) -> int:
        """Filter, re-reference and buffer a raw chunk; return its first index."""
        start = self.buffer.write_head
        filtered = rereference_block(self.bandpass.process(raw))
        self.buffer.write_block(filtered, start)
        return start

    def _warm_up(self) -> None:
        # Fill the filter delay line so the first epoch has no start-up transient
        raw = generate_stream(
            self.profile, [], [], self.config.numtaps, self.rng, self.config, self.noise_std
        )
        self._append(raw)

    def stream_event(self, is_error: bool) -> int:
        """Write the chunk for one feedback event; return its aligned onset."""
        raw = generate_stream(
            self.profile,
            error_onsets=[0] if is_error else [],
            nonerror_onsets=[] if is_error else [0],
            duration=self.chunk_samples,
            rng=self.rng,
            config=self.config,
            noise_std=self.noise_std,
        )
        start = self._append(raw)
        self.events += 1
        return start + self.bandpass.group_delay

    def next_epoch(self, is_error: bool) -> EEGEpoch:
        """Stream one event and extract its epoch."""
        onset = self.stream_event(is_error)
        label = EpochLabel.ERROR if is_error else EpochLabel.NON_ERROR
        return self.buffer.extract_epoch(onset, label=label)

    def record(self, labels: list[bool]) -> list[EEGEpoch]:
        """Stream a labelled sequence of events and return their epochs."""
        return [self.next_epoch(is_error) for is_error in labels]


def balanced_labels(n_trials: int, rng: np.random.Generator) -> list[bool]:
    """Shuffled, class-balanced error labels."""
    labels = np.array([i % 2 == 1 for i in range(n_trials)])
    rng.shuffle(labels)
    return [bool(x) for x in labels]


def record_subject(
    profile: SubjectProfile,
    config: SignalConfig,
    n_trials: int,
    rng: np.random.Generator,
    noise_std: Optional[float] = None,
) -> list[EEGEpoch]:
    """Record a balanced labelled dataset for one subject."""
    session = StreamingSession(profile, config, rng, noise_std=noise_std)
    epochs = session.record(balanced_labels(n_trials, rng))
    logger.debug("recorded %d epochs for %s", len(epochs), profile.subject_id)
    return epochs

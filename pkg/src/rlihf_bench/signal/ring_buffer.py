"""Ring buffer feeding time-aligned epochs to the decoder."""

import numpy as np

from rlihf_bench.errors import (
    EpochEvicted,
    EpochNotReady,
    OutOfOrderWrite,
    SignalError,
)
from rlihf_bench.models.signal import EEGEpoch, EpochLabel, SampleFrame


class EpochRingBuffer:
    """Fixed-capacity store of consecutive sample frames.

    One producer writes frames strictly in index order; one consumer
    extracts [onset, onset + T) windows while they are still resident.
    """

    def __init__(
        self,
        capacity: int,
        channels: int,
        epoch_samples: int,
        subject_id: str = "",
    ):
        """Initialize the buffer.

        Args:
            capacity: Number of frames held
            channels: Channels per frame (C)
            epoch_samples: Epoch length (T); capacity must be >= T
            subject_id: Stamped on extracted epochs
        """
        if capacity < epoch_samples:
            raise SignalError(f"capacity {capacity} < epoch length {epoch_samples}")
        self.capacity = capacity
        self.channels = channels
        self.epoch_samples = epoch_samples
        self.subject_id = subject_id
        self._data = np.zeros((capacity, channels))
        self._write_head = 0

    @property
    def write_head(self) -> int:
        """Sample index of the next write."""
        return self._write_head

    @property
    def oldest_index(self) -> int:
        """Smallest sample index still resident."""
        return max(0, self._write_head - self.capacity)

    def __len__(self) -> int:
        return min(self._write_head, self.capacity)

    def write(self, frame: SampleFrame) -> None:
        """Store one frame at the write head."""
        if frame.sample_index != self._write_head:
            raise OutOfOrderWrite(
                f"frame index {frame.sample_index} != write head {self._write_head}"
            )
        if frame.values.shape != (self.channels,):
            raise SignalError(f"frame has shape {frame.values.shape}, expected ({self.channels},)")
        self._data[self._write_head % self.capacity] = frame.values
        self._write_head += 1

    def write_block(self, block: np.ndarray, start_index: int) -> None:
        """Store consecutive frames starting at the write head.

        Args:
            block: (n, C) frame values
            start_index: Sample index of block[0]; must equal write_head
        """
        if start_index != self._write_head:
            raise OutOfOrderWrite(f"block starts at {start_index} != write head {self._write_head}")
        block = np.asarray(block, dtype=float)
        if block.ndim != 2 or block.shape[1] != self.channels:
            raise SignalError(f"block has shape {block.shape}, expected (n, {self.channels})")
        if not np.all(np.isfinite(block)):
            raise SignalError(f"non-finite samples in block starting at {start_index}")
        n = block.shape[0]
        if n > self.capacity:
            block = block[-self.capacity:]
        indices = np.arange(start_index + n - block.shape[0], start_index + n) % self.capacity
        self._data[indices] = block
        self._write_head += n

    def extract_epoch(self, onset: int, label: EpochLabel | None = None) -> EEGEpoch:
        """Copy out the C×T window starting at onset."""
        end = onset + self.epoch_samples
        if end > self._write_head:
            raise EpochNotReady(
                f"epoch [{onset}, {end}) not yet written (write head {self._write_head})"
            )
        if onset < self.oldest_index:
            raise EpochEvicted(
                f"epoch [{onset}, {end}) overwritten (oldest resident {self.oldest_index})"
            )
        indices = np.arange(onset, end) % self.capacity
        return EEGEpoch(
            data=self._data[indices].T.copy(),
            onset_index=onset,
            subject_id=self.subject_id,
            label=label,
        )

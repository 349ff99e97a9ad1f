"""Preprocessing chain: band-pass, common-average reference, decimation."""

from typing import overload

import numpy as np
from scipy import signal as sps

from rlihf_bench.errors import SignalError
from rlihf_bench.models.signal import SampleFrame


def design_bandpass(
    low_hz: float = 1.0,
    high_hz: float = 20.0,
    rate_hz: float = 256.0,
    numtaps: int = 257,
) -> np.ndarray:
    """Hamming windowed-sinc band-pass with a nulled DC response.

    The window is subtracted in proportion to the tap sum so that the taps
    sum to zero; symmetry (linear phase) is kept.

    Args:
        low_hz: Lower band edge
        high_hz: Upper band edge
        rate_hz: Sampling rate
        numtaps: Odd filter length

    Returns:
        Filter taps, length numtaps
    """
    nyquist = rate_hz / 2
    if not 0 < low_hz < high_hz < nyquist:
        raise SignalError(
            f"band [{low_hz}, {high_hz}] Hz must satisfy 0 < low < high < {nyquist} Hz"
        )
    if numtaps < 3 or numtaps % 2 == 0:
        raise SignalError(f"numtaps must be odd and >= 3, got {numtaps}")

    taps = sps.firwin(numtaps, [low_hz, high_hz], pass_zero=False, window="hamming", fs=rate_hz)
    window = sps.get_window("hamming", numtaps, fftbins=False)
    return taps - window * (taps.sum() / window.sum())


def bandpass_filter(
    stream: np.ndarray,
    low_hz: float = 1.0,
    high_hz: float = 20.0,
    rate_hz: float = 256.0,
    numtaps: int = 257,
) -> np.ndarray:
    """Causal FIR band-pass applied per channel.

    The output is delayed by (numtaps - 1) / 2 samples; callers aligning
    epochs shift their onsets by that amount.

    Args:
        stream: (n, C) samples
        low_hz: Lower band edge
        high_hz: Upper band edge
        rate_hz: Sampling rate
        numtaps: Odd filter length

    Returns:
        (n, C) filtered samples
    """
    taps = design_bandpass(low_hz, high_hz, rate_hz, numtaps)
    return sps.lfilter(taps, [1.0], np.asarray(stream, dtype=float), axis=0)


class StreamingBandpass:
    """Band-pass that carries filter state across consecutive chunks."""

    def __init__(self, taps: np.ndarray, channels: int):
        self.taps = np.asarray(taps, dtype=float)
        self._state = np.zeros((len(self.taps) - 1, channels))

    @property
    def group_delay(self) -> int:
        return (len(self.taps) - 1) // 2

    def process(self, chunk: np.ndarray) -> np.ndarray:
        """Filter the next (n, C) chunk of the stream."""
        out, self._state = sps.lfilter(self.taps, [1.0], chunk, axis=0, zi=self._state)
        return out

    def reset(self) -> None:
        self._state[:] = 0.0


def rereference_block(block: np.ndarray) -> np.ndarray:
    """Common-average reference of an (n, C) block."""
    block = np.asarray(block, dtype=float)
    if block.shape[-1] < 2:
        raise SignalError("common-average reference needs at least 2 channels")
    return block - block.mean(axis=-1, keepdims=True)


@overload
def rereference_common_average(frame: SampleFrame) -> SampleFrame: ...
@overload
def rereference_common_average(frame: np.ndarray) -> np.ndarray: ...


def rereference_common_average(frame):
    """Subtract the across-channel mean from every channel of a frame."""
    if isinstance(frame, SampleFrame):
        return SampleFrame(
            sample_index=frame.sample_index,
            values=rereference_block(frame.values),
        )
    return rereference_block(frame)


def decimate(stream: np.ndarray, factor: int) -> np.ndarray:
    """Anti-alias low-pass then keep every factor-th sample.

    Args:
        stream: (n, C) or (n,) samples
        factor: Integer decimation factor

    Returns:
        Decimated stream of length ceil(n / factor)
    """
    if factor < 1:
        raise SignalError(f"decimation factor must be >= 1, got {factor}")
    stream = np.asarray(stream, dtype=float)
    if factor == 1:
        return stream.copy()

    n = stream.shape[0]
    if n > 1:
        taps = sps.firwin(8 * factor + 1, 0.8 / factor, window="hamming")
        padlen = min(3 * len(taps), n - 1)
        stream = sps.filtfilt(taps, [1.0], stream, axis=0, padlen=padlen)
    return stream[::factor].copy()

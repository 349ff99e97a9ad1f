"""Synthetic EEG generation, preprocessing and epoch streaming."""

from rlihf_bench.signal.generator import (
    erp_template,
    background_noise,
    generate_stream,
    make_cohort,
)
from rlihf_bench.signal.preprocess import (
    design_bandpass,
    bandpass_filter,
    StreamingBandpass,
    rereference_common_average,
    rereference_block,
    decimate,
)
from rlihf_bench.signal.ring_buffer import EpochRingBuffer
from rlihf_bench.signal.session import StreamingSession, balanced_labels, record_subject
from rlihf_bench.signal.epoch_io import write_epochs, read_epochs

__all__ = [
    "erp_template",
    "background_noise",
    "generate_stream",
    "make_cohort",
    "design_bandpass",
    "bandpass_filter",
    "StreamingBandpass",
    "rereference_common_average",
    "rereference_block",
    "decimate",
    "EpochRingBuffer",
    "StreamingSession",
    "balanced_labels",
    "record_subject",
    "write_epochs",
    "read_epochs",
]

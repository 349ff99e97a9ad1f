"""Flat binary epoch files (ERRP format)."""

import struct
from pathlib import Path
from typing import Optional

import numpy as np

from rlihf_bench.errors import SignalError
from rlihf_bench.models.signal import EEGEpoch, EpochLabel

MAGIC = b"ERRP"
VERSION = 1

# magic, version, C, T, count
HEADER = struct.Struct("<4sIIII")
# label, onset
RECORD_PREFIX = struct.Struct("<BQ")

UNLABELED = 255


def _label_byte(label: Optional[EpochLabel]) -> int:
    if label is None:
        return UNLABELED
    return label.value


def _label_from_byte(value: int) -> Optional[EpochLabel]:
    if value == UNLABELED:
        return None
    try:
        return EpochLabel(value)
    except ValueError:
        raise SignalError(f"invalid label byte {value}") from None


def write_epochs(epochs: list[EEGEpoch], path: Path | str) -> Path:
    """Write epochs to an ERRP file.

    Args:
        epochs: Epochs sharing one C×T shape
        path: Output file

    Returns:
        The written path
    """
    if not epochs:
        raise SignalError("no epochs to write")
    C, T = epochs[0].data.shape
    for epoch in epochs:
        if epoch.data.shape != (C, T):
            raise SignalError(f"epoch at onset {epoch.onset_index} has shape {epoch.data.shape}, expected {(C, T)}")

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, C, T, len(epochs)))
        for epoch in epochs:
            fh.write(RECORD_PREFIX.pack(_label_byte(epoch.label), epoch.onset_index))
            fh.write(np.ascontiguousarray(epoch.data, dtype="<f4").tobytes())
    return path


def read_epochs(path: Path | str, subject_id: Optional[str] = None) -> list[EEGEpoch]:
    """Read an ERRP file.

    Args:
        path: Input file
        subject_id: Stamped on the epochs (defaults to the file stem)

    Returns:
        Epochs in file order
    """
    path = Path(path)
    subject_id = subject_id or path.stem
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise SignalError(f"cannot read {path}: {e}") from e
    if len(raw) < HEADER.size:
        raise SignalError(f"{path}: truncated header")

    magic, version, C, T, count = HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise SignalError(f"{path}: bad magic {magic!r}")
    if version != VERSION:
        raise SignalError(f"{path}: unsupported version {version}")

    payload = C * T * 4
    expected = HEADER.size + count * (RECORD_PREFIX.size + payload)
    if len(raw) != expected:
        raise SignalError(f"{path}: size {len(raw)} != expected {expected}")

    epochs = []
    offset = HEADER.size
    for _ in range(count):
        label, onset = RECORD_PREFIX.unpack_from(raw, offset)
        offset += RECORD_PREFIX.size
        data = np.frombuffer(raw, dtype="<f4", count=C * T, offset=offset).reshape(C, T)
        offset += payload
        epochs.append(EEGEpoch(
            data=data.astype(np.float64),
            onset_index=int(onset),
            subject_id=subject_id,
            label=_label_from_byte(label),
        ))
    return epochs

"""Labelled random streams derived from one master seed."""

import zlib

import numpy as np

STREAMS = ("env", "agent", "replay", "channel", "eval")


def stream_key(label: str) -> int:
    return zlib.crc32(label.encode("utf-8"))


def derive_seed_sequence(master_seed: int, *labels: str | int) -> np.random.SeedSequence:
    """SeedSequence keyed by the master seed and a path of labels.

    Each label changes only its own stream, so adding or removing a
    component never shifts the draws of another.
    """
    key = [stream_key(label) if isinstance(label, str) else int(label) for label in labels]
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(key))


def derive_rng(master_seed: int, *labels: str | int) -> np.random.Generator:
    return np.random.default_rng(derive_seed_sequence(master_seed, *labels))


def derive_int(master_seed: int, *labels: str | int) -> int:
    """A 32-bit integer seed for APIs that take ints (gymnasium reset)."""
    return int(derive_seed_sequence(master_seed, *labels).generate_state(1)[0])

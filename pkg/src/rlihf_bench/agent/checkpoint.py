"""Versioned binary policy checkpoints (SACP)."""

import struct
from pathlib import Path

import numpy as np

from rlihf_bench.agent.sac import Actor
from rlihf_bench.errors import CheckpointFormatError
from rlihf_bench.nn.mlp import ACTIVATIONS, MLP

MAGIC = b"SACP"
VERSION = 1

# magic, version, layer count, action dim, hidden activation, output activation
HEADER = struct.Struct("<4sHHIBB")
LAYER = struct.Struct("<II")


def encode_actor(actor: Actor) -> bytes:
    trunk = actor.trunk
    parts = [HEADER.pack(
        MAGIC,
        VERSION,
        len(trunk.weights),
        actor.act_dim,
        ACTIVATIONS.index(trunk.hidden_activation),
        ACTIVATIONS.index(trunk.output_activation),
    )]
    parts.extend(LAYER.pack(*w.shape) for w in trunk.weights)
    parts.extend(np.ascontiguousarray(p, dtype="<f4").tobytes() for p in trunk.parameters())
    return b"".join(parts)


def decode_actor(raw: bytes) -> Actor:
    if len(raw) < HEADER.size:
        raise CheckpointFormatError("truncated checkpoint header")
    magic, version, n_layers, act_dim, hidden_code, output_code = HEADER.unpack_from(raw, 0)
    if magic != MAGIC:
        raise CheckpointFormatError(f"bad magic {magic!r}")
    if version != VERSION:
        raise CheckpointFormatError(f"unsupported checkpoint version {version}")
    if n_layers < 1 or max(hidden_code, output_code) >= len(ACTIVATIONS):
        raise CheckpointFormatError("corrupt layer specification")

    offset = HEADER.size
    if len(raw) < offset + n_layers * LAYER.size:
        raise CheckpointFormatError("truncated layer specification")
    shapes = []
    for _ in range(n_layers):
        shapes.append(LAYER.unpack_from(raw, offset))
        offset += LAYER.size

    expected = offset + 4 * sum(fan_in * fan_out + fan_out for fan_in, fan_out in shapes)
    if len(raw) != expected:
        raise CheckpointFormatError(f"checkpoint size {len(raw)} != expected {expected}")

    def take(count: int) -> np.ndarray:
        nonlocal offset
        values = np.frombuffer(raw, dtype="<f4", count=count, offset=offset).astype(np.float64)
        offset += 4 * count
        return values

    weights, biases = [], []
    for fan_in, fan_out in shapes:
        weights.append(take(fan_in * fan_out).reshape(fan_in, fan_out))
        biases.append(take(fan_out))
    if shapes[-1][1] != 2 * act_dim:
        raise CheckpointFormatError(f"output width {shapes[-1][1]} != 2 × action dim {act_dim}")
    trunk = MLP(weights, biases, ACTIVATIONS[hidden_code], ACTIVATIONS[output_code])
    return Actor(trunk=trunk, act_dim=act_dim)


def save_checkpoint(actor: Actor, path: Path | str) -> Path:
    """Write the policy as float32 parameters."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(encode_actor(actor))
    return path


def load_checkpoint(path: Path | str) -> Actor:
    """Read a policy written by save_checkpoint.

    Raises:
        CheckpointFormatError: On bad magic, version, shapes or size
    """
    try:
        raw = Path(path).read_bytes()
    except OSError as e:
        raise CheckpointFormatError(f"cannot read checkpoint {path}: {e}") from e
    return decode_actor(raw)

"""Exception hierarchy for rlihf-bench."""


class RlihfError(Exception):
    """Base class for all rlihf-bench errors."""


class ConfigError(RlihfError):
    """Invalid or unknown configuration."""


class SignalError(RlihfError):
    """Signal generation, preprocessing or epoch I/O failure."""


class EpochNotReady(SignalError):
    """The requested epoch range has not been fully written yet."""


class EpochEvicted(SignalError):
    """The requested epoch range has already been overwritten."""


class OutOfOrderWrite(SignalError):
    """A frame was written with an index other than the write head."""


class DecoderError(RlihfError):
    """Classifier training or inference failure."""


class NetworkError(RlihfError):
    """Shape mismatch or missing forward cache in the neural-network core."""


class EnvError(RlihfError):
    """Environment contract violation."""


class EpisodeDoneError(EnvError):
    """step() called on a finished episode."""


class NoPathError(EnvError):
    """No collision-free path exists between two task points."""


class AgentError(RlihfError):
    """SAC agent failure."""


class BufferUnderfilledError(AgentError):
    """Replay buffer holds fewer transitions than the batch size."""


class CheckpointFormatError(AgentError):
    """Policy checkpoint file is malformed."""


class ReportError(RlihfError):
    """Report emission failure."""

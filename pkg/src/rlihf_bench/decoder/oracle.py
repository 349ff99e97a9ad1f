"""Calibrated stochastic stand-in for a trained decoder."""

from dataclasses import dataclass

import numpy as np

from rlihf_bench.decoder.classifier import Prediction
from rlihf_bench.errors import ConfigError

_HALF_UP = float(np.nextafter(0.5, 1.0))


@dataclass(frozen=True)
class OracleChannelConfig:
    """Target argmax accuracy and the spread of emitted confidences."""
    accuracy: float = 0.8
    confidence_concentration: float = 4.0

    def __post_init__(self):
        if not 0.5 <= self.accuracy <= 1.0:
            raise ConfigError(f"oracle.accuracy {self.accuracy} outside [0.5, 1.0]")
        if not self.confidence_concentration > 0:
            raise ConfigError("oracle.confidence_concentration must be > 0")

    def mean_confidence(self) -> float:
        """Expected winning-side probability, 0.5 + 0.5·κ/(κ+1)."""
        k = self.confidence_concentration
        return 0.5 + 0.5 * k / (k + 1.0)


def oracle_decode(true_label: bool, cfg: OracleChannelConfig, rng: np.random.Generator) -> Prediction:
    """Emit a class distribution whose argmax matches true_label with probability cfg.accuracy.

    The winning side's probability is 0.5 + 0.5·b with b ~ Beta(κ, 1),
    so larger κ pushes confidence toward 1.

    Args:
        true_label: Observer's is_error
        cfg: Channel accuracy and concentration
        rng: Random source (two draws per call)

    Returns:
        Prediction with p[1] the error probability
    """
    correct = rng.random() < cfg.accuracy
    winner_is_error = bool(true_label) if correct else not bool(true_label)
    confidence = max(0.5 + 0.5 * rng.beta(cfg.confidence_concentration, 1.0), _HALF_UP)
    confidence = min(confidence, 1.0)
    if winner_is_error:
        p = np.array([1.0 - confidence, confidence])
    else:
        p = np.array([confidence, 1.0 - confidence])
    return Prediction(p=p)

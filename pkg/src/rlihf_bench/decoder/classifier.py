"""ErrP classifier: softmax prediction, cross-entropy training, reward mapping."""

import logging
from dataclasses import dataclass
from typing import Protocol

import numpy as np

from rlihf_bench.decoder.features import (
    FeatureScaler,
    extract_features,
    feature_matrix,
    label_vector,
)
from rlihf_bench.errors import ConfigError, DecoderError
from rlihf_bench.models.records import ConfusionCounts
from rlihf_bench.models.signal import EEGEpoch
from rlihf_bench.nn.adam import Adam
from rlihf_bench.nn.mlp import MLP

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TrainConfig:
    """Classifier training hyperparameters."""
    learning_rate: float = 5e-3
    epochs: int = 60
    batch_size: int = 32
    l2_penalty: float = 1e-3
    rng_seed: int = 0
    hidden: int = 32
    bins: int = 16

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ConfigError("decoder.learning_rate must be > 0")
        if self.epochs < 1:
            raise ConfigError("decoder.epochs must be >= 1")
        if self.batch_size < 1:
            raise ConfigError("decoder.batch_size must be >= 1")
        if self.l2_penalty < 0:
            raise ConfigError("decoder.l2_penalty must be >= 0")
        if self.hidden < 1 or self.bins < 1:
            raise ConfigError("decoder.hidden and decoder.bins must be >= 1")


@dataclass(frozen=True)
class Prediction:
    """Class distribution p = [p(non-error), p(error)]."""
    p: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.shape != (2,) or np.any(p < 0) or np.any(p > 1) or abs(p.sum() - 1.0) > 1e-9:
            raise DecoderError(f"invalid class distribution {self.p}")

    @property
    def predicted_error(self) -> bool:
        return bool(self.p[1] > self.p[0])


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shift-stabilized."""
    logits = np.asarray(logits, dtype=float)
    if not np.all(np.isfinite(logits)):
        raise DecoderError(f"non-finite logits {logits}")
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


@dataclass(frozen=True)
class ClassifierParams:
    """Trained θ: feature configuration, frozen scaler and the perceptron."""
    net: MLP
    scaler: FeatureScaler
    bins: int
    epoch_shape: tuple[int, int]

    def logits(self, features: np.ndarray) -> np.ndarray:
        return self.net.predict(features)

    def predict_proba(self, epochs: list[EEGEpoch]) -> np.ndarray:
        """(N, 2) class distributions for a batch of epochs."""
        raw = np.stack([extract_features(e, self.bins, shape=self.epoch_shape) for e in epochs])
        return softmax(self.logits(self.scaler.transform(raw)))

    def predict(self, epoch: EEGEpoch) -> Prediction:
        features = extract_features(epoch, self.bins, self.scaler, shape=self.epoch_shape)
        return forward(self, features)


class EpochClassifier(Protocol):
    """Anything that maps epochs to class distributions."""

    def predict_proba(self, epochs: list[EEGEpoch]) -> np.ndarray: ...


def forward(theta: ClassifierParams | MLP, features: np.ndarray) -> Prediction:
    """p = softmax(f_θ(x)) for one standardized feature vector."""
    net = theta.net if isinstance(theta, ClassifierParams) else theta
    features = np.asarray(features, dtype=float)
    if features.shape != (net.in_features,):
        raise DecoderError(f"{features.shape[-1]} features, classifier expects {net.in_features}")
    return Prediction(p=softmax(net.predict(features)))


def cross_entropy_loss_and_grads(
    net: MLP,
    features: np.ndarray,
    labels: np.ndarray,
    l2_penalty: float = 0.0,
) -> tuple[float, list[np.ndarray]]:
    """Mean cross-entropy plus L2 on weights, with parameter gradients."""
    logits, cache = net.forward(features)
    probs = softmax(logits)
    n = features.shape[0]
    rows = np.arange(n)
    loss = -np.mean(np.log(np.clip(probs[rows, labels], 1e-300, None)))
    loss += 0.5 * l2_penalty * sum(float(np.sum(w * w)) for w in net.weights)

    grad_logits = probs.copy()
    grad_logits[rows, labels] -= 1.0
    grads, _ = net.backward(cache, grad_logits / n)
    for i, w in enumerate(net.weights):
        grads[2 * i] = grads[2 * i] + l2_penalty * w
    return float(loss), grads


def fit_features(
    features: np.ndarray,
    labels: np.ndarray,
    config: TrainConfig,
) -> tuple[MLP, list[float]]:
    """Mini-batch Adam on standardized features.

    Returns:
        The lowest-loss network seen and the per-epoch full-batch losses
        (first entry is the initial loss)
    """
    n, d = features.shape
    if n < config.batch_size:
        raise DecoderError(f"{n} examples < batch size {config.batch_size}")
    if len(np.unique(labels)) < 2:
        raise DecoderError("training set contains a single class")

    rng = np.random.default_rng(config.rng_seed)
    net = MLP.build([d, config.hidden, 2], rng, hidden_activation="tanh", output_scale=0.1)
    optimizer = Adam(net.parameters(), lr=config.learning_rate)

    loss, _ = cross_entropy_loss_and_grads(net, features, labels, config.l2_penalty)
    history = [loss]
    best_loss, best_net = loss, net.copy()
    for epoch in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n - config.batch_size + 1, config.batch_size):
            batch = order[start:start + config.batch_size]
            _, grads = cross_entropy_loss_and_grads(net, features[batch], labels[batch], config.l2_penalty)
            optimizer.step(grads)
        loss, _ = cross_entropy_loss_and_grads(net, features, labels, config.l2_penalty)
        history.append(loss)
        if loss < best_loss:
            best_loss, best_net = loss, net.copy()
        logger.debug("decoder epoch %d loss %.4f", epoch + 1, loss)
    return best_net, history


def train(dataset: list[EEGEpoch], config: TrainConfig) -> ClassifierParams:
    """Fit the classifier on labelled epochs (cross-entropy objective).

    Args:
        dataset: Labelled epochs containing both classes
        config: Training hyperparameters

    Returns:
        Trained parameters with the standardization frozen
    """
    raw = feature_matrix(dataset, config.bins)
    labels = label_vector(dataset)
    scaler = FeatureScaler.fit(raw)
    net, history = fit_features(scaler.transform(raw), labels, config)
    logger.info(
        "trained decoder on %d epochs: loss %.4f -> %.4f", len(dataset), history[0], min(history)
    )
    return ClassifierParams(
        net=net,
        scaler=scaler,
        bins=config.bins,
        epoch_shape=tuple(dataset[0].data.shape),
    )


def p_errp(prediction: Prediction) -> float:
    """Estimated likelihood of error, p[1]."""
    return float(prediction.p[1])


def decode_reward(p: float) -> float:
    """Implicit reward 1 − p_ErrP."""
    if not 0.0 <= p <= 1.0:
        raise DecoderError(f"p_ErrP {p} outside [0, 1]")
    return 1.0 - p


@dataclass(frozen=True)
class AccuracyReport:
    """Argmax accuracy plus confusion counts (error is positive)."""
    accuracy: float
    confusion: ConfusionCounts


def evaluate_accuracy(theta: EpochClassifier, dataset: list[EEGEpoch]) -> AccuracyReport:
    """Fraction of correct argmax predictions on a labelled dataset."""
    if not dataset:
        raise DecoderError("cannot evaluate on an empty dataset")
    labels = label_vector(dataset)
    predicted = np.argmax(theta.predict_proba(dataset), axis=1)
    counts = ConfusionCounts(
        tp=int(np.sum((labels == 1) & (predicted == 1))),
        fp=int(np.sum((labels == 0) & (predicted == 1))),
        tn=int(np.sum((labels == 0) & (predicted == 0))),
        fn=int(np.sum((labels == 1) & (predicted == 0))),
    )
    return AccuracyReport(accuracy=counts.accuracy, confusion=counts)

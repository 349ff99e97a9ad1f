"""ErrP decoding: features, classifier, oracle channel and LOSO evaluation."""

from rlihf_bench.decoder.features import (
    bin_means,
    FeatureScaler,
    extract_features,
    feature_matrix,
    label_vector,
)
from rlihf_bench.decoder.classifier import (
    TrainConfig,
    Prediction,
    ClassifierParams,
    EpochClassifier,
    AccuracyReport,
    softmax,
    forward,
    cross_entropy_loss_and_grads,
    fit_features,
    train,
    p_errp,
    decode_reward,
    evaluate_accuracy,
)
from rlihf_bench.decoder.oracle import OracleChannelConfig, oracle_decode
from rlihf_bench.decoder.loso import (
    SubjectDataset,
    SubjectAccuracy,
    stratified_split,
    loso_evaluate,
    accuracies_by_mode,
    noise_rank_correlation,
)

__all__ = [
    "bin_means",
    "FeatureScaler",
    "extract_features",
    "feature_matrix",
    "label_vector",
    "TrainConfig",
    "Prediction",
    "ClassifierParams",
    "EpochClassifier",
    "AccuracyReport",
    "softmax",
    "forward",
    "cross_entropy_loss_and_grads",
    "fit_features",
    "train",
    "p_errp",
    "decode_reward",
    "evaluate_accuracy",
    "OracleChannelConfig",
    "oracle_decode",
    "SubjectDataset",
    "SubjectAccuracy",
    "stratified_split",
    "loso_evaluate",
    "accuracies_by_mode",
    "noise_rank_correlation",
]

"""Tests for ErrP features, classifier training, the oracle channel and LOSO."""

from dataclasses import replace

import numpy as np
import pytest

from rlihf_bench.decoder import (
    FeatureScaler,
    OracleChannelConfig,
    Prediction,
    SubjectDataset,
    TrainConfig,
    accuracies_by_mode,
    bin_means,
    cross_entropy_loss_and_grads,
    decode_reward,
    evaluate_accuracy,
    extract_features,
    fit_features,
    forward,
    loso_evaluate,
    noise_rank_correlation,
    oracle_decode,
    p_errp,
    softmax,
    stratified_split,
    train,
)
from rlihf_bench.errors import ConfigError, DecoderError
from rlihf_bench.models.signal import EEGEpoch, EpochLabel, SignalConfig
from rlihf_bench.nn import MLP
from rlihf_bench.signal import erp_template, make_cohort, record_subject

FAST = TrainConfig(epochs=30, batch_size=16, hidden=16)


def numeric_grad(f, param: np.ndarray, h: float = 1e-5) -> np.ndarray:
    grad = np.zeros_like(param)
    it = np.nditer(param, flags=["multi_index"])
    for _ in it:
        idx = it.multi_index
        saved = param[idx]
        param[idx] = saved + h
        plus = f()
        param[idx] = saved - h
        minus = f()
        param[idx] = saved
        grad[idx] = (plus - minus) / (2 * h)
    return grad


def labelled(data: np.ndarray, is_error: bool) -> EEGEpoch:
    return EEGEpoch(
        data=data,
        onset_index=0,
        subject_id="T",
        label=EpochLabel.ERROR if is_error else EpochLabel.NON_ERROR,
    )


class TestFeatures:
    def test_zero_epoch(self):
        assert not bin_means(np.zeros((4, 128)), 16).any()

    def test_constant_epoch(self):
        assert np.allclose(bin_means(np.full((4, 128), 2.5), 16), 2.5)

    def test_template_bins_match_integral(self, small_signal, small_profile):
        template = erp_template(small_profile, small_signal)
        features = extract_features(labelled(template, True), bins=16)
        width = small_signal.epoch_samples // 16
        expected = np.array([template[c, b * width:(b + 1) * width].mean() for c in range(4) for b in range(16)])
        assert np.allclose(features, expected)

    def test_indivisible_bins(self):
        with pytest.raises(DecoderError):
            bin_means(np.zeros((2, 100)), 16)

    def test_shape_mismatch(self):
        with pytest.raises(DecoderError):
            extract_features(labelled(np.zeros((2, 32)), False), bins=4, shape=(4, 32))

    def test_scaler_handles_constant_feature(self, rng):
        x = np.column_stack([rng.normal(size=50), np.ones(50)])
        scaled = FeatureScaler.fit(x).transform(x)
        assert abs(scaled[:, 0].std() - 1.0) < 1e-9
        assert not scaled[:, 1].any()


class TestPrediction:
    def test_zero_network_is_uniform(self):
        net = MLP([np.zeros((3, 4)), np.zeros((4, 2))], [np.zeros(4), np.zeros(2)], "tanh")
        assert np.allclose(forward(net, np.ones(3)).p, [0.5, 0.5])

    def test_closed_form(self):
        assert np.allclose(softmax(np.array([0.0, np.log(3.0)])), [0.25, 0.75])

    def test_shift_invariance(self, rng):
        logits = rng.normal(size=2)
        assert np.allclose(softmax(logits), softmax(logits + 17.0))

    def test_invalid_distribution(self):
        with pytest.raises(DecoderError):
            Prediction(p=np.array([0.7, 0.7]))

    def test_non_finite_logits(self):
        with pytest.raises(DecoderError):
            softmax(np.array([np.nan, 0.0]))

    @pytest.mark.parametrize("p, expected", [([0.5, 0.5], 0.5), ([0.0, 1.0], 1.0), ([0.75, 0.25], 0.25)])
    def test_p_errp(self, p, expected):
        assert p_errp(Prediction(p=np.array(p))) == expected

    @pytest.mark.parametrize("p, expected", [(0.0, 1.0), (1.0, 0.0), (0.3, 0.7)])
    def test_decode_reward(self, p, expected):
        assert decode_reward(p) == pytest.approx(expected)

    def test_decode_reward_range(self):
        with pytest.raises(DecoderError):
            decode_reward(1.5)


class TestTraining:
    def test_overfits_a_pair(self):
        features = np.array([[1.0, -1.0, 0.5], [-1.0, 1.0, -0.5]])
        labels = np.array([0, 1])
        config = TrainConfig(learning_rate=0.05, epochs=400, batch_size=2, l2_penalty=0.0, hidden=8)
        net, history = fit_features(features, labels, config)
        loss, _ = cross_entropy_loss_and_grads(net, features, labels)
        assert loss < 0.01
        assert min(history) == pytest.approx(loss)

    def test_loss_gradients_match_finite_differences(self, rng):
        net = MLP.build([6, 5, 2], rng, hidden_activation="tanh")
        features = rng.normal(size=(8, 6))
        labels = rng.integers(0, 2, size=8)

        def loss() -> float:
            return cross_entropy_loss_and_grads(net, features, labels, l2_penalty=0.1)[0]

        _, grads = cross_entropy_loss_and_grads(net, features, labels, l2_penalty=0.1)
        for grad, param in zip(grads, net.parameters()):
            numeric = numeric_grad(loss, param)
            rel = np.abs(grad - numeric) / np.maximum(np.abs(grad) + np.abs(numeric), 1e-6)
            assert rel.max() < 1e-4

    def test_l2_term_only_touches_weights(self, rng):
        net = MLP.build([6, 5, 2], rng)
        features, labels = rng.normal(size=(8, 6)), rng.integers(0, 2, size=8)
        _, plain = cross_entropy_loss_and_grads(net, features, labels)
        _, penalised = cross_entropy_loss_and_grads(net, features, labels, l2_penalty=0.1)
        for i, (a, b) in enumerate(zip(plain, penalised)):
            expected = 0.1 * net.parameters()[i] if i % 2 == 0 else 0.0
            assert np.allclose(b - a, expected)

    def test_separable_features(self, rng):
        labels = np.array([i % 2 for i in range(200)])
        features = rng.normal(size=(200, 4)) + np.where(labels[:, None] == 1, 2.0, -2.0)
        net, _ = fit_features(features, labels, FAST)
        accuracy = np.mean(np.argmax(net.predict(features), axis=1) == labels)
        assert accuracy >= 0.95

    def test_shuffled_labels_generalise_to_chance(self, rng):
        features = rng.normal(size=(2400, 8))
        labels = rng.permutation(np.array([i % 2 for i in range(2400)]))
        net, _ = fit_features(features[:400], labels[:400], FAST)
        held_out = np.mean(np.argmax(net.predict(features[400:]), axis=1) == labels[400:])
        assert 0.4 <= held_out <= 0.6

    def test_single_class_rejected(self):
        with pytest.raises(DecoderError):
            fit_features(np.zeros((40, 2)), np.zeros(40, dtype=int), FAST)

    def test_config_validation(self):
        with pytest.raises(ConfigError):
            TrainConfig(learning_rate=0.0)
        with pytest.raises(ConfigError):
            TrainConfig(epochs=0)

    def test_high_snr_subject(self, rng, small_signal, small_profile):
        quiet = replace(small_profile, noise_std=0.5)
        theta = train(record_subject(quiet, small_signal, 200, rng), FAST)
        report = evaluate_accuracy(theta, record_subject(quiet, small_signal, 200, rng))
        assert report.accuracy >= 0.85
        assert report.confusion.total == 200

    def test_predict_matches_batch(self, rng, small_signal, small_profile):
        epochs = record_subject(small_profile, small_signal, 60, rng)
        theta = train(epochs, FAST)
        assert np.allclose(theta.predict(epochs[0]).p, theta.predict_proba(epochs[:1])[0])


class _Perfect:
    def predict_proba(self, epochs):
        return np.array([[0.0, 1.0] if e.is_error else [1.0, 0.0] for e in epochs])


class _AlwaysError:
    def predict_proba(self, epochs):
        return np.tile([0.2, 0.8], (len(epochs), 1))


class TestEvaluateAccuracy:
    def _dataset(self) -> list[EEGEpoch]:
        return [labelled(np.zeros((2, 4)), i % 2 == 1) for i in range(10)]

    def test_perfect_predictor(self):
        report = evaluate_accuracy(_Perfect(), self._dataset())
        assert report.accuracy == 1.0
        assert report.confusion.fp == 0
        assert report.confusion.fn == 0

    def test_constant_predictor(self):
        report = evaluate_accuracy(_AlwaysError(), self._dataset())
        assert report.accuracy == 0.5
        assert report.confusion.tp == 5
        assert report.confusion.fp == 5

    def test_empty(self):
        with pytest.raises(DecoderError):
            evaluate_accuracy(_Perfect(), [])


class TestOracle:
    @pytest.mark.parametrize("accuracy", [0.5, 0.8, 1.0])
    def test_match_rate(self, accuracy):
        rng = np.random.default_rng(7)
        cfg = OracleChannelConfig(accuracy=accuracy)
        labels = rng.random(10_000) < 0.5
        matches = np.mean([oracle_decode(bool(y), cfg, rng).predicted_error == y for y in labels])
        if accuracy == 1.0:
            assert matches == 1.0
        else:
            assert abs(matches - accuracy) <= 0.02

    def test_confidence_above_half(self, rng):
        cfg = OracleChannelConfig(accuracy=0.8, confidence_concentration=0.5)
        for _ in range(1000):
            assert oracle_decode(True, cfg, rng).p.max() > 0.5

    def test_mean_confidence(self):
        rng = np.random.default_rng(3)
        cfg = OracleChannelConfig(accuracy=1.0, confidence_concentration=4.0)
        confidences = [oracle_decode(False, cfg, rng).p[0] for _ in range(20_000)]
        assert np.mean(confidences) == pytest.approx(cfg.mean_confidence(), abs=0.005)

    def test_accuracy_range(self):
        with pytest.raises(ConfigError):
            OracleChannelConfig(accuracy=0.4)


class TestLoso:
    def test_stratified_split_keeps_ratio(self, rng):
        epochs = [labelled(np.zeros((2, 4)), i < 30) for i in range(100)]
        train_part, held_out = stratified_split(epochs, 0.2, rng)
        assert len(held_out) == 20
        assert sum(e.is_error for e in held_out) == 6
        assert sum(e.is_error for e in train_part) == 24

    def test_modes_per_subject(self, rng, small_signal, small_profile):
        subjects = [
            SubjectDataset(pid, record_subject(replace(small_profile, subject_id=pid), small_signal, 40, rng),
                           replace(small_profile, subject_id=pid))
            for pid in ("A", "B", "C")
        ]
        results = loso_evaluate(subjects, FAST, small_signal, online_trials=20, rng=rng)
        assert [(r.subject_id, r.mode) for r in results] == [
            (s, m) for s in ("A", "B", "C") for m in ("pretrain", "online", "loso")
        ]
        assert set(accuracies_by_mode(results, "online")) == {"A", "B", "C"}
        assert all(0.0 <= r.accuracy <= 1.0 for r in results)

    def test_identical_subjects(self, rng, small_signal, small_profile):
        config = replace(FAST, epochs=60)
        subjects = [
            SubjectDataset(pid, record_subject(replace(small_profile, subject_id=pid), small_signal, 120, rng))
            for pid in ("A", "B")
        ]
        results = loso_evaluate(subjects, config, small_signal, rng=rng)
        for pid in ("A", "B"):
            within = accuracies_by_mode(results, "pretrain")[pid]
            across = accuracies_by_mode(results, "loso")[pid]
            assert abs(within - across) <= 0.05

    def test_noise_dominated_subject_at_chance(self, rng, small_signal, small_profile):
        clean = [
            SubjectDataset(pid, record_subject(replace(small_profile, subject_id=pid), small_signal, 100, rng))
            for pid in ("A", "B")
        ]
        loud = replace(small_profile, subject_id="Z", noise_std=1000.0)
        subjects = clean + [SubjectDataset("Z", record_subject(loud, small_signal, 200, rng))]
        accuracy = accuracies_by_mode(loso_evaluate(subjects, FAST, small_signal, rng=rng))["Z"]
        assert 0.35 <= accuracy <= 0.65

    def test_needs_two_subjects(self):
        with pytest.raises(DecoderError):
            loso_evaluate([SubjectDataset("A")], FAST)

    def test_rank_correlation(self):
        assert noise_rank_correlation([1, 2, 3, 4], [0.9, 0.8, 0.7, 0.6]) == pytest.approx(-1.0)
        with pytest.raises(DecoderError):
            noise_rank_correlation([1, 2], [0.9, 0.8])

    @pytest.mark.slow
    def test_cohort_accuracy_spread(self):
        rng = np.random.default_rng(0)
        config = SignalConfig()
        cohort = make_cohort(12, rng)
        subjects = [SubjectDataset(p.subject_id, record_subject(p, config, 200, rng), p) for p in cohort]
        results = loso_evaluate(subjects, TrainConfig(), config, online_trials=0, rng=rng)
        loso = accuracies_by_mode(results, "loso")
        accuracies = [loso[p.subject_id] for p in cohort]
        assert max(accuracies) - min(accuracies) >= 0.25
        assert noise_rank_correlation([p.noise_std for p in cohort], accuracies) < 0
        by_snr = sorted(cohort, key=lambda p: p.snr_db, reverse=True)
        assert all(loso[p.subject_id] >= 0.85 for p in by_snr[:3])

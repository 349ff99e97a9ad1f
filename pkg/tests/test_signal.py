"""Tests for synthetic EEG generation, preprocessing and epoch streaming."""

import numpy as np
import pytest

from rlihf_bench.errors import ConfigError, EpochEvicted, EpochNotReady, OutOfOrderWrite, SignalError
from rlihf_bench.models.signal import EEGEpoch, EpochLabel, SampleFrame, SignalConfig, SubjectProfile
from rlihf_bench.signal import (
    EpochRingBuffer,
    StreamingSession,
    background_noise,
    balanced_labels,
    bandpass_filter,
    decimate,
    design_bandpass,
    erp_template,
    generate_stream,
    make_cohort,
    read_epochs,
    record_subject,
    rereference_common_average,
    write_epochs,
)


class TestGenerator:
    def test_noise_only_stream_has_configured_std(self, rng):
        noise = background_noise(200_000, 2, 3.0, rng)
        assert abs(noise.mean()) < 0.05
        assert noise.std(axis=0) == pytest.approx([3.0, 3.0], rel=0.05)

    def test_zero_noise_epoch_equals_template(self, rng, small_signal, small_profile):
        stream = generate_stream(small_profile, [40], [], 400, rng, small_signal, noise_std=0.0)
        template = erp_template(small_profile, small_signal)
        assert np.array_equal(stream[40:40 + small_signal.epoch_samples].T, template)
        assert np.all(stream[:40] == 0.0)

    def test_nonerror_onsets_add_nothing(self, rng, small_signal, small_profile):
        stream = generate_stream(small_profile, [], [0, 100], 300, rng, small_signal, noise_std=0.0)
        assert not stream.any()

    def test_ensemble_average_recovers_template(self, rng, small_signal, small_profile):
        T = small_signal.epoch_samples
        n = 200
        sigma = small_profile.noise_std
        epochs = [generate_stream(small_profile, [0], [], T, rng, small_signal) for _ in range(n)]
        average = np.mean(epochs, axis=0).T
        deviation = np.abs(average - erp_template(small_profile, small_signal))
        assert deviation.mean() < sigma / np.sqrt(n)
        # per-sample 3σ bound; a handful of the C·T samples may exceed it by chance
        assert np.mean(deviation < 3 * sigma / np.sqrt(n)) >= 0.98

    def test_onset_past_end_rejected(self, rng, small_signal, small_profile):
        with pytest.raises(SignalError):
            generate_stream(small_profile, [300], [], 400, rng, small_signal)

    def test_channel_mismatch_rejected(self, rng, small_signal):
        with pytest.raises(SignalError):
            generate_stream(SubjectProfile(), [], [], 200, rng, small_signal)

    def test_profile_rejects_zero_noise(self):
        with pytest.raises(ConfigError):
            SubjectProfile(noise_std=0.0)

    def test_cohort_noise_is_geometric_and_snr_decreasing(self, rng):
        cohort = make_cohort(5, rng, noise_min=1.0, noise_max=16.0)
        noise = [p.noise_std for p in cohort]
        assert noise == pytest.approx([1.0, 2.0, 4.0, 8.0, 16.0])
        assert [p.subject_id for p in cohort] == ["S01", "S02", "S03", "S04", "S05"]
        assert cohort[0].snr_db > cohort[-1].snr_db


class TestBandpass:
    def test_dc_attenuated_by_30_db(self):
        out = bandpass_filter(np.ones((2000, 1)))
        steady = np.abs(out[300:, 0]).max()
        assert steady <= 10 ** (-30 / 20)

    def test_10hz_passband_gain_within_1_db(self):
        t = np.arange(4096) / 256.0
        x = np.sin(2 * np.pi * 10.0 * t)
        y = bandpass_filter(x[:, None])[:, 0]
        gain = np.abs(y[1024:]).max() / np.abs(x[1024:]).max()
        assert 10 ** (-1 / 20) <= gain <= 10 ** (1 / 20)

    def test_taps_are_symmetric_and_sum_to_zero(self):
        taps = design_bandpass()
        assert len(taps) == 257
        assert np.allclose(taps, taps[::-1])
        assert abs(taps.sum()) < 1e-12

    def test_linearity(self, rng):
        x, y = rng.normal(size=(600, 3)), rng.normal(size=(600, 3))
        a, b = rng.normal(size=2)
        combined = bandpass_filter(a * x + b * y)
        assert np.allclose(combined, a * bandpass_filter(x) + b * bandpass_filter(y), atol=1e-10)

    def test_invalid_band_rejected(self):
        with pytest.raises(SignalError):
            design_bandpass(low_hz=20.0, high_hz=10.0)
        with pytest.raises(SignalError):
            design_bandpass(numtaps=256)


class TestRereference:
    def test_two_channels(self):
        assert np.array_equal(rereference_common_average(np.array([1.0, 3.0])), [-1.0, 1.0])

    def test_equal_channels_give_zeros(self):
        assert not rereference_common_average(np.full(8, 4.2)).any()

    def test_frame_mean_is_zero_and_idempotent(self, rng):
        frame = SampleFrame(sample_index=7, values=rng.normal(size=8))
        once = rereference_common_average(frame)
        twice = rereference_common_average(once)
        assert once.sample_index == 7
        assert abs(once.values.mean()) < 1e-12
        assert np.allclose(once.values, twice.values)

    def test_single_channel_rejected(self):
        with pytest.raises(SignalError):
            rereference_common_average(np.array([1.0]))


class TestDecimate:
    def test_factor_one_is_identity(self, rng):
        x = rng.normal(size=(100, 2))
        assert np.array_equal(decimate(x, 1), x)

    def test_length(self, rng):
        assert decimate(rng.normal(size=1000), 4).shape == (250,)

    def test_constant_preserved(self):
        assert np.allclose(decimate(np.full((1000, 3), 2.5), 4), 2.5, atol=1e-9)

    def test_dc_null_survives_decimation(self):
        filtered = bandpass_filter(np.full((2000, 2), 3.0))
        out = decimate(filtered, 4)
        # past the 257-sample start-up transient
        assert np.abs(out[100:]).max() < 1e-6

    def test_1024_hz_stream_decimated_to_256(self, rng, small_signal, small_profile):
        fast = SignalConfig(channels=4, rate_hz=1024.0, epoch_samples=512)
        stream = generate_stream(small_profile, [0], [], 512, rng, fast, noise_std=0.0)
        out = decimate(stream, 4)
        assert out.shape == (small_signal.epoch_samples, 4)
        assert np.allclose(out.T, erp_template(small_profile, small_signal), atol=0.05)

    def test_bad_factor(self):
        with pytest.raises(SignalError):
            decimate(np.zeros(10), 0)


class TestRingBuffer:
    def _fill(self, buffer: EpochRingBuffer, n: int, rng) -> np.ndarray:
        block = rng.normal(size=(n, buffer.channels))
        for values in block:
            buffer.write(SampleFrame(sample_index=buffer.write_head, values=values))
        return block

    def test_round_trip_is_bit_exact(self, rng):
        buffer = EpochRingBuffer(capacity=1024, channels=2, epoch_samples=512, subject_id="X")
        block = self._fill(buffer, 512, rng)
        epoch = buffer.extract_epoch(0, label=EpochLabel.ERROR)
        assert np.array_equal(epoch.data, block.T)
        assert epoch.subject_id == "X"
        assert epoch.is_error is True

    def test_not_ready(self, rng):
        buffer = EpochRingBuffer(capacity=1024, channels=2, epoch_samples=512)
        self._fill(buffer, 600, rng)
        with pytest.raises(EpochNotReady):
            buffer.extract_epoch(buffer.write_head - 100)

    def test_oldest_frame_evicted(self, rng):
        buffer = EpochRingBuffer(capacity=1024, channels=2, epoch_samples=512)
        self._fill(buffer, 1025, rng)
        assert buffer.oldest_index == 1
        with pytest.raises(EpochEvicted):
            buffer.extract_epoch(0)
        buffer.extract_epoch(1)

    def test_out_of_order_write(self):
        buffer = EpochRingBuffer(capacity=16, channels=2, epoch_samples=4)
        with pytest.raises(OutOfOrderWrite):
            buffer.write(SampleFrame(sample_index=3, values=np.zeros(2)))
        with pytest.raises(OutOfOrderWrite):
            buffer.write_block(np.zeros((4, 2)), start_index=1)

    def test_block_write_wraps(self, rng):
        buffer = EpochRingBuffer(capacity=16, channels=2, epoch_samples=8)
        buffer.write_block(np.zeros((12, 2)), 0)
        block = rng.normal(size=(8, 2))
        buffer.write_block(block, 12)
        assert np.array_equal(buffer.extract_epoch(12).data, block.T)

    def test_capacity_below_epoch_rejected(self):
        with pytest.raises(SignalError):
            EpochRingBuffer(capacity=8, channels=2, epoch_samples=16)


class TestStreamingSession:
    def test_zero_noise_nonerror_epoch_is_silent(self, rng, small_signal, small_profile):
        session = StreamingSession(small_profile, small_signal, rng, noise_std=0.0)
        epoch = session.next_epoch(False)
        assert epoch.data.shape == (4, 128)
        assert epoch.label is EpochLabel.NON_ERROR
        assert not epoch.data.any()

    def test_error_epoch_carries_referenced_template(self, rng, small_signal, small_profile):
        session = StreamingSession(small_profile, small_signal, rng, noise_std=0.0)
        epoch = session.next_epoch(True)
        assert np.abs(epoch.data).max() > 0.5
        assert np.allclose(epoch.data.mean(axis=0), 0.0, atol=1e-12)

    def test_every_event_is_extractable(self, rng, small_signal, small_profile):
        session = StreamingSession(small_profile, small_signal, rng)
        labels = balanced_labels(20, rng)
        epochs = session.record(labels)
        assert [e.is_error for e in epochs] == labels
        assert session.events == 20

    def test_config_requires_gap_to_cover_group_delay(self):
        with pytest.raises(ConfigError):
            SignalConfig(numtaps=257, gap_samples=64)


class TestEpochFiles:
    def test_round_trip(self, tmp_path, rng, small_signal, small_profile):
        epochs = record_subject(small_profile, small_signal, 10, rng)
        path = write_epochs(epochs, tmp_path / "T01.errp")
        loaded = read_epochs(path)
        assert len(loaded) == 10
        for original, restored in zip(epochs, loaded):
            assert restored.subject_id == "T01"
            assert restored.label is original.label
            assert restored.onset_index == original.onset_index
            assert np.array_equal(restored.data, original.data.astype(np.float32).astype(np.float64))

    def test_unlabelled_epochs_survive(self, tmp_path):
        epoch = EEGEpoch(data=np.ones((2, 4)), onset_index=3, subject_id="U")
        loaded = read_epochs(write_epochs([epoch], tmp_path / "u.errp"))
        assert loaded[0].label is None

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "bad.errp"
        path.write_bytes(b"NOPE" + bytes(16))
        with pytest.raises(SignalError, match="magic"):
            read_epochs(path)

    def test_truncated(self, tmp_path, rng, small_signal, small_profile):
        path = write_epochs(record_subject(small_profile, small_signal, 4, rng), tmp_path / "t.errp")
        path.write_bytes(path.read_bytes()[:-10])
        with pytest.raises(SignalError, match="size"):
            read_epochs(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(SignalError):
            read_epochs(tmp_path / "absent.errp")

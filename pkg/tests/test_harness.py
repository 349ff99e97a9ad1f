"""Tests for training runs, phase aggregation, reports and result loading."""

import json
from dataclasses import replace

import numpy as np
import pytest

from rlihf_bench.agent import Actor
from rlihf_bench.config import BenchConfig
from rlihf_bench.env import compute_ideal_path
from rlihf_bench.errors import ReportError
from rlihf_bench.harness import (
    RunSpec,
    aggregate_phases,
    bucket_records,
    derive_rng,
    emit_reports,
    eval_steps,
    evaluate,
    grid_specs,
    load_results,
    run_grid,
    run_training,
    summarize,
    sweep_specs,
    sweep_whf,
)
from rlihf_bench.models.records import Condition, EvalRecord, Phase
from rlihf_bench.models.scenario import Scenario
from tests.conftest import make_tiny_config


def record(step: int, success: float = 0.0, ret: float = 0.0) -> EvalRecord:
    return EvalRecord(step=step, mean_return=ret, return_std=0.0, success_rate=success,
                      path_efficiency=0.5, path_deviation=0.1)


def phase_means(logs, condition: Condition, metric: str) -> float:
    runs = [log for log in logs if log.condition is condition]
    late = [getattr(r, metric) for run in runs for r in run.eval_records
            if Phase.of_step(r.step, run.total_steps) is Phase.LATE]
    return float(np.mean(late))


@pytest.fixture(scope="module")
def tiny_logs():
    config = make_tiny_config()
    return config, run_grid(config, grid_specs(config))


class TestSchedule:
    def test_eval_steps(self):
        assert eval_steps(4000, 2000) == [2000, 4000]
        assert eval_steps(1000, 300) == [300, 600, 900, 1000]

    def test_phase_buckets(self):
        buckets = bucket_records([record(s) for s in (10_000, 30_000, 70_000, 110_000)], 120_000)
        assert [len(buckets[p]) for p in Phase] == [2, 1, 1]

    def test_single_record_per_phase_has_zero_std(self):
        summaries = aggregate_phases([record(10), record(50), record(90)], 100, "RL dense")
        assert all(s.stat("success_rate").std == 0.0 for s in summaries)
        assert [s.phase for s in summaries] == list(Phase)

    def test_empty_phase(self):
        with pytest.raises(ReportError, match="Mid"):
            aggregate_phases([record(10), record(90)], 100)

    def test_run_ids(self):
        assert RunSpec(Condition.DENSE, 3).run_id == "dense_s3"
        assert RunSpec(Condition.RLIHF, 0, 0.4).run_id == "rlihf_w0.4_s0"

    def test_sweep_specs(self):
        config = replace(BenchConfig(), experiment=replace(BenchConfig().experiment, seeds=(0, 1, 2)))
        specs = sweep_specs(config, [0.1, 0.4, 0.7])
        assert len(specs) == 9
        assert {s.condition for s in specs} == {Condition.RLIHF}

    def test_derived_streams(self):
        a = derive_rng(0, 1, "env").random(4)
        assert np.array_equal(a, derive_rng(0, 1, "env").random(4))
        assert not np.array_equal(a, derive_rng(0, 1, "agent").random(4))
        assert not np.array_equal(a, derive_rng(1, 1, "env").random(4))


class TestEvaluate:
    @pytest.fixture(scope="class")
    def short_scenario(self) -> Scenario:
        return Scenario(max_steps=150)

    def test_untrained_policy_fails(self, short_scenario):
        ideal = compute_ideal_path(short_scenario)
        actor = Actor.build(short_scenario.observation_size, 2, (16, 16), np.random.default_rng(0))
        result, trajectories = evaluate(actor, short_scenario, ideal, n=5, rng=np.random.default_rng(1))
        assert result.success_rate == 0.0
        assert result.rollouts == 5
        assert all(len(t.points) == 151 for t in trajectories)

    def test_identical_policy_and_seed(self, short_scenario):
        ideal = compute_ideal_path(short_scenario)
        actor = Actor.build(short_scenario.observation_size, 2, (16,), np.random.default_rng(0))
        first, _ = evaluate(actor, short_scenario, ideal, n=2, rng=np.random.default_rng(3), step=7)
        second, _ = evaluate(actor, short_scenario, ideal, n=2, rng=np.random.default_rng(3), step=7)
        assert first == second


class TestTraining:
    def test_every_condition_runs(self, tiny_logs):
        config, logs = tiny_logs
        assert [log.run_id for log in logs] == ["sparse_s0", "dense_s0", "rlihf_w0.1_s0"]
        for log in logs:
            assert [r.step for r in log.eval_records] == [60, 120, 180, 240, 300]
            assert log.episodes >= 3
        rlihf = logs[2]
        assert rlihf.online_confusion.total == 300
        assert logs[0].online_confusion.total == 0

    def test_run_is_deterministic(self, tiny_logs):
        config, logs = tiny_logs
        again = run_training(config, RunSpec(Condition.DENSE, 0))
        assert again.eval_records == logs[1].eval_records

    def test_zero_weight_matches_sparse(self, tiny_logs):
        config, logs = tiny_logs
        zero = run_training(config, RunSpec(Condition.RLIHF, 0, 0.0))
        assert zero.eval_records == logs[0].eval_records

    def test_reward_log_and_checkpoint(self, tiny_config, tmp_path):
        config = replace(tiny_config, experiment=replace(tiny_config.experiment, log_rewards=True))
        log = run_training(config, RunSpec(Condition.RLIHF, 0, 0.4), out_dir=tmp_path)
        assert len(log.reward_log) == 300
        assert all(row.r_hf is not None for row in log.reward_log)
        sc = config.scenario
        for row in log.reward_log:
            assert row.w_hf == 0.4
            assert row.r_env in (0.0, sc.collision_penalty, sc.success_reward, sc.success_reward + sc.collision_penalty)
            assert row.total == pytest.approx(row.r_env + row.w_hf * (row.r_hf - 0.5))
        assert any(row.total != row.r_env for row in log.reward_log)
        assert (tmp_path / "checkpoints" / "rlihf_w0.4_s0.sacp").exists()

    def test_sweep_groups_by_weight(self, tiny_config):
        config = replace(tiny_config, experiment=replace(tiny_config.experiment, total_steps=120, eval_interval=40))
        by_weight = sweep_whf(config, [0.0, 0.7])
        assert sorted(by_weight) == [0.0, 0.7]
        assert all(len(logs) == 1 for logs in by_weight.values())


class TestReports:
    def test_counts(self, tiny_logs, tmp_path):
        config, logs = tiny_logs
        paths = emit_reports(logs, tmp_path, config)
        assert len(list((tmp_path / "runs").glob("*.csv"))) == 3
        assert paths.summary.exists() and paths.manifest.exists() and paths.summary_text.exists()
        rows = paths.summary.read_text().splitlines()
        assert rows[0] == (
            "phase,method,success_rate_mean,success_rate_std,path_eff_mean,path_eff_std,path_dev_mean,path_dev_std"
        )
        assert len(rows) == 1 + 3 * 3
        assert paths.svg is None and paths.sweep is None

    def test_empty_logs_write_nothing(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        with pytest.raises(ReportError):
            emit_reports([], out, tiny_config)
        assert not out.exists()

    def test_short_run_leaves_out_empty_phase(self, tiny_logs, tmp_path, caplog):
        config, logs = tiny_logs
        # records at 120..300 of 300 steps: Mid and Late only
        short = [replace(log, eval_records=[r for r in log.eval_records if r.step >= 120]) for log in logs]
        assert {Phase.of_step(r.step, 300) for r in short[0].eval_records} == {Phase.MID, Phase.LATE}

        paths = emit_reports(short, tmp_path, config)
        assert len(list((tmp_path / "runs").glob("*.csv"))) == 3
        assert paths.manifest.exists()
        rows = paths.summary.read_text().splitlines()
        assert len(rows) == 1 + 2 * 3
        assert not any(row.startswith("Early,") for row in rows)
        assert "(no evaluation records)" in paths.summary_text.read_text()
        assert "no evaluation records in phase Early" in caplog.text
        assert len(load_results(tmp_path).summaries) == 6

    def test_outputs_are_byte_identical(self, tiny_logs, tmp_path):
        config, logs = tiny_logs
        first = emit_reports(logs, tmp_path / "a", config, svg=True)
        second = emit_reports(logs, tmp_path / "b", config, svg=True)
        for run_id, path in first.eval_csvs.items():
            assert path.read_bytes() == second.eval_csvs[run_id].read_bytes()
        assert first.summary.read_bytes() == second.summary.read_bytes()
        assert first.manifest.read_bytes() == second.manifest.read_bytes()
        assert first.svg.read_bytes() == second.svg.read_bytes()

    def test_manifest_contents(self, tiny_logs, tmp_path):
        config, logs = tiny_logs
        paths = emit_reports(logs, tmp_path, config)
        manifest = json.loads(paths.manifest.read_text())
        assert manifest["tool"] == "rlihf-bench"
        assert len(manifest["content_hash"]) == 40
        assert manifest["config"]["experiment"]["total_steps"] == 300
        assert [run["eval_csv"] for run in manifest["runs"]] == [
            "runs/sparse_s0.csv", "runs/dense_s0.csv", "runs/rlihf_w0.1_s0.csv"
        ]
        assert manifest["runs"][0]["online_confusion"]["accuracy"] is None

    def test_sweep_labels_by_weight(self, tiny_logs, tmp_path):
        config, logs = tiny_logs
        rlihf = logs[2]
        other = replace(rlihf, run_id="rlihf_w0.7_s0", w_hf=0.7)
        paths = emit_reports([rlihf, other], tmp_path, config, sweep=True)
        methods = {s.method for s in summarize([rlihf, other], by_weight=True)}
        assert methods == {"RLIHF w=0.1", "RLIHF w=0.7"}
        rows = paths.sweep.read_text().splitlines()
        assert rows[0] == "w_hf,phase,mean_return_mean,mean_return_std,success_rate_mean,success_rate_std"
        assert len(rows) == 1 + 2 * 3

    def test_load_results_round_trip(self, tiny_logs, tmp_path):
        config, logs = tiny_logs
        emit_reports(logs, tmp_path, config)
        results = load_results(tmp_path)
        assert results.config == config
        assert [run.run_id for run in results.runs] == [log.run_id for log in logs]
        for run, log in zip(results.runs, logs):
            assert [r.step for r in run.records] == [r.step for r in log.eval_records]
            assert [r.mean_return for r in run.records] == [r.mean_return for r in log.eval_records]
        assert len(results.summaries) == 9
        assert results.run("dense_s0").condition is Condition.DENSE

    def test_load_results_without_manifest(self, tmp_path):
        with pytest.raises(ReportError, match="manifest"):
            load_results(tmp_path)


def full_config(**experiment) -> BenchConfig:
    base = BenchConfig()
    return replace(base, experiment=replace(base.experiment, parallel=5, **experiment))


@pytest.mark.slow
def test_dense_reward_solves_default_scenario():
    config = full_config(conditions=(Condition.DENSE,))
    logs = run_grid(config, grid_specs(config))
    assert phase_means(logs, Condition.DENSE, "success_rate") >= 0.6


@pytest.mark.slow
def test_condition_ordering():
    config = full_config()
    logs = run_grid(config, grid_specs(config))
    sparse = phase_means(logs, Condition.SPARSE, "success_rate")
    rlihf = phase_means(logs, Condition.RLIHF, "success_rate")
    dense = phase_means(logs, Condition.DENSE, "success_rate")
    assert sparse < rlihf <= dense + 0.1
    assert phase_means(logs, Condition.RLIHF, "path_deviation") < phase_means(logs, Condition.SPARSE, "path_deviation")


@pytest.mark.slow
def test_larger_feedback_weight_returns_more():
    by_weight = sweep_whf(full_config(), [0.1, 0.7])
    late = {w: phase_means(logs, Condition.RLIHF, "mean_return") for w, logs in by_weight.items()}
    assert late[0.7] > late[0.1]

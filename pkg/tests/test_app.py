"""Tests for the Textual results browser."""

import pytest
from textual.widgets import ListView

from rlihf_bench.app import ResultsApp
from rlihf_bench.config import BenchConfig
from rlihf_bench.harness.phases import aggregate_phases
from rlihf_bench.harness.results import Results, RunResult
from rlihf_bench.models.records import Condition, EvalRecord
from rlihf_bench.views.curve_view import CurveView
from rlihf_bench.widgets.run_list import RunList
from rlihf_bench.widgets.status_bar import StatusBar


def curve(offset: float) -> list[EvalRecord]:
    return [
        EvalRecord(step=s, mean_return=offset + s / 100, return_std=0.1, success_rate=min(1.0, s / 300),
                   path_efficiency=0.5, path_deviation=0.05)
        for s in (50, 150, 250, 300)
    ]


@pytest.fixture
def results(tmp_path) -> Results:
    runs = [
        RunResult("sparse_s0", Condition.SPARSE, 0, 0.0, curve(0.0)),
        RunResult("dense_s0", Condition.DENSE, 0, 0.0, curve(1.0)),
        RunResult("rlihf_w0.1_s0", Condition.RLIHF, 0, 0.1, curve(0.5), online_accuracy=0.8),
    ]
    summaries = [s for run in runs for s in aggregate_phases(run.records, 300, run.condition.label)]
    return Results(
        root=tmp_path,
        manifest={"tool": "rlihf-bench", "content_hash": "ab" * 20, "runs": []},
        config=BenchConfig(),
        runs=runs,
        summaries=summaries,
    )


async def test_starts_on_summary(results):
    app = ResultsApp(results)
    async with app.run_test() as pilot:
        await pilot.pause()
        assert app.current_view == "summary"
        assert not app.query_one("#summary-view").has_class("hidden")
        assert app.query_one("#curves-view").has_class("hidden")
        assert len(app.query_one(RunList).runs) == 3


async def test_number_keys_switch_views(results):
    app = ResultsApp(results)
    async with app.run_test() as pilot:
        await pilot.press("2")
        assert app.current_view == "curves"
        assert app.query_one("#summary-view").has_class("hidden")
        await pilot.press("3")
        assert app.current_view == "manifest"
        assert app.query_one("#status-bar", StatusBar).view_mode == "manifest"
        await pilot.press("1")
        assert app.current_view == "summary"
        assert app.query_one("#manifest-view").has_class("hidden")


async def test_selecting_a_run_shows_its_curves(results):
    app = ResultsApp(results)
    async with app.run_test() as pilot:
        await pilot.pause()
        list_view = app.query_one("#run-list", ListView)
        list_view.focus()
        list_view.index = 2
        await pilot.press("enter")
        await pilot.pause()
        assert app.current_view == "curves"
        assert app.query_one("#curves-view", CurveView)._run.run_id == "rlihf_w0.1_s0"


async def test_empty_results(tmp_path):
    empty = Results(root=tmp_path, manifest={}, config=BenchConfig())
    app = ResultsApp(empty)
    async with app.run_test() as pilot:
        await pilot.press("2")
        assert app.current_view == "curves"
        assert app.query_one("#empty-message").display

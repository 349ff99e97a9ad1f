"""Sidebar listing the runs of a results directory."""

from textual.containers import Container
from textual.message import Message
from textual.widgets import Label, ListItem, ListView, Static
from rich.text import Text

from rlihf_bench.harness.results import RunResult


class RunItem(ListItem):
    """A single run entry."""

    DEFAULT_CSS = """
    RunItem {
        height: 2;
        padding: 0 1;
        background: transparent;
    }

    RunItem:hover {
        background: #1f1f1f;
    }

    RunItem.-highlight {
        background: #2a2a2a;
    }
    """

    def __init__(self, run: RunResult, index: int):
        super().__init__()
        self.run_result = run
        self.index = index

    def compose(self):
        """Compose the run item."""
        run_id = self.run_result.run_id
        if len(run_id) > 18:
            run_id = run_id[:15] + "..."

        text = Text()
        text.append("● ", style=self.run_result.condition.color)
        text.append(run_id, style="grey70")
        final = self.run_result.final
        if final is not None:
            text.append(f"\n  success {final.success_rate:.2f}", style="dim")
        yield Label(text)


class RunList(Container):
    """Panel listing every run of the loaded results."""

    DEFAULT_CSS = """
    RunList {
        width: 100%;
        height: 100%;
        background: #111;
        padding: 0;
        layout: vertical;
    }

    RunList #runs-header {
        height: 2;
        width: 100%;
        background: #1a1a1a;
        color: #aaa;
        text-align: center;
        content-align: center bottom;
        text-style: bold;
        border-bottom: solid #333;
    }

    RunList #run-list {
        height: 1fr;
        background: #111;
        scrollbar-size: 1 1;
    }

    RunList #empty-message {
        color: #555;
        text-align: center;
        padding: 2 1;
    }
    """

    class RunSelected(Message):
        """Message sent when a run is selected."""

        def __init__(self, run: RunResult):
            super().__init__()
            self.run_result = run

    def __init__(self, runs: list[RunResult] | None = None, **kwargs):
        super().__init__(**kwargs)
        self._runs: list[RunResult] = list(runs or [])

    def compose(self):
        """Compose the run list."""
        yield Static("RUNS", id="runs-header")
        yield Static("No runs in manifest", id="empty-message")
        yield ListView(id="run-list")

    def on_mount(self) -> None:
        self._rebuild_list()

    def _rebuild_list(self) -> None:
        list_view = self.query_one("#run-list", ListView)
        empty_msg = self.query_one("#empty-message", Static)

        list_view.clear()

        if self._runs:
            empty_msg.display = False
            for i, run in enumerate(self._runs):
                list_view.append(RunItem(run, i))
        else:
            empty_msg.display = True

    def on_list_view_selected(self, event: ListView.Selected) -> None:
        """Handle run selection."""
        if isinstance(event.item, RunItem):
            self.post_message(self.RunSelected(event.item.run_result))

    @property
    def runs(self) -> list[RunResult]:
        return self._runs.copy()

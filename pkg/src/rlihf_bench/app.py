"""Textual browser for a results directory."""

from datetime import datetime
from pathlib import Path

from textual.app import App, ComposeResult
from textual.binding import Binding
from textual.containers import Container, Horizontal, ScrollableContainer, Vertical
from textual.widgets import Footer, Header

from rlihf_bench.harness.results import Results, RunResult
from rlihf_bench.views.curve_view import CurveView
from rlihf_bench.views.manifest_view import ManifestView
from rlihf_bench.views.summary_view import SummaryView
from rlihf_bench.widgets.run_list import RunList
from rlihf_bench.widgets.status_bar import StatusBar

VIEWS = ("summary", "curves", "manifest")


class ResultsApp(App):
    """Offline browser for rlihf-bench outputs."""

    TITLE = "rlihf-bench"
    SUB_TITLE = "Results"

    CSS = """
    Screen {
        background: #0a0a0a;
    }

    Header {
        dock: top;
        height: 1;
        background: #151515;
        color: #888;
    }

    Footer {
        dock: bottom;
        height: 1;
        background: #151515;
    }

    #main-layout {
        layout: horizontal;
        height: 1fr;
    }

    #sidebar {
        width: 26;
        background: #101010;
        border-right: solid #222;
    }

    #content {
        width: 1fr;
    }

    #view-area {
        height: 1fr;
        overflow-y: auto;
        background: #0a0a0a;
        padding: 0 1;
    }

    .hidden {
        display: none;
    }
    """

    BINDINGS = [
        Binding("q", "quit", "Quit"),
        Binding("1", "view_summary", "Summary"),
        Binding("2", "view_curves", "Curves"),
        Binding("3", "view_manifest", "Manifest"),
        Binding("s", "screenshot", "Screenshot"),
    ]

    def __init__(self, results: Results):
        super().__init__()
        self.results = results
        self.sub_title = str(results.root)
        self._current_view = "summary"
        self._selected: RunResult | None = results.runs[0] if results.runs else None

    def compose(self) -> ComposeResult:
        yield Header()
        with Horizontal(id="main-layout"):
            with Container(id="sidebar"):
                yield RunList(self.results.runs, id="run-list-panel")
            with Vertical(id="content"):
                with ScrollableContainer(id="view-area"):
                    yield SummaryView(self.results, id="summary-view")
                    yield CurveView(self._selected, id="curves-view", classes="hidden")
                    yield ManifestView(self.results, id="manifest-view", classes="hidden")
                yield StatusBar(self.results.content_hash, id="status-bar")
        yield Footer()

    def on_mount(self) -> None:
        self.query_one("#status-bar", StatusBar).set_run(self._selected)

    def _switch_view(self, view_name: str) -> None:
        for v in VIEWS:
            widget = self.query_one(f"#{v}-view")
            if v == view_name:
                widget.remove_class("hidden")
            else:
                widget.add_class("hidden")
        self._current_view = view_name
        self.query_one("#status-bar", StatusBar).set_view_mode(view_name)

    @property
    def current_view(self) -> str:
        return self._current_view

    def action_view_summary(self) -> None:
        self._switch_view("summary")

    def action_view_curves(self) -> None:
        self._switch_view("curves")

    def action_view_manifest(self) -> None:
        self._switch_view("manifest")

    def action_screenshot(self) -> None:
        """Save an SVG screenshot next to the results."""
        try:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            screenshots = Path(self.results.root) / "screenshots"
            screenshots.mkdir(parents=True, exist_ok=True)
            path = screenshots / f"{self._current_view}_{timestamp}.svg"
            self.save_screenshot(path.name, str(screenshots))
            self.notify(f"Screenshot saved: {path}")
        except OSError as e:
            self.notify(f"Screenshot failed: {e}", severity="error")

    def on_run_list_run_selected(self, event: RunList.RunSelected) -> None:
        self._selected = event.run_result
        self.query_one("#curves-view", CurveView).set_run(event.run_result)
        self.query_one("#status-bar", StatusBar).set_run(event.run_result)
        self._switch_view("curves")

"""Status bar widget."""

from textual.widgets import Static
from rich.text import Text
from rich.table import Table

from rlihf_bench.harness.results import RunResult

VIEW_LABELS = {
    "summary": "Summary",
    "curves": "Curves",
    "manifest": "Manifest",
}


class StatusBar(Static):
    """Status bar showing the selected run, view and manifest hash."""

    DEFAULT_CSS = """
    StatusBar {
        dock: bottom;
        height: 1;
        background: #151515;
        padding: 0 1;
    }
    """

    def __init__(self, content_hash: str = "", **kwargs):
        super().__init__(**kwargs)
        self._run: RunResult | None = None
        self._view_mode: str = "summary"
        self._content_hash = content_hash

    def set_run(self, run: RunResult | None) -> None:
        self._run = run
        self.refresh()

    def set_view_mode(self, mode: str) -> None:
        self._view_mode = mode
        self.refresh()

    @property
    def view_mode(self) -> str:
        return self._view_mode

    def render(self) -> Table:
        """Render the status bar."""
        table = Table.grid(expand=True)
        table.add_column(ratio=1)
        table.add_column(ratio=1, justify="right")

        left = Text()
        if self._run:
            left.append("● ", style=self._run.condition.color)
            left.append(self._run.run_id, style="bold")
            if self._run.online_accuracy is not None:
                left.append(f"  online acc {self._run.online_accuracy:.3f}", style="dim")
        else:
            left.append("No run selected", style="dim")

        right = Text()
        right.append(VIEW_LABELS.get(self._view_mode, self._view_mode), style="bold")
        if self._content_hash:
            right.append(" │ ", style="dim")
            right.append(f"config {self._content_hash[:10]}", style="dim")

        table.add_row(left, right)
        return table

"""Table view of phase summaries and final run metrics."""

from rich.console import Group, RenderableType
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from textual.widgets import Static

from rlihf_bench.harness.results import SUMMARY_COLUMNS, Results
from rlihf_bench.models.records import Phase

PHASE_STYLES = {
    Phase.EARLY: "grey70",
    Phase.MID: "yellow",
    Phase.LATE: "green",
}


class SummaryView(Static):
    """Phase × method summary plus a per-run table."""

    DEFAULT_CSS = """
    SummaryView {
        height: auto;
        padding: 1;
    }
    """

    def __init__(self, results: Results | None = None, **kwargs):
        super().__init__(**kwargs)
        self._results = results

    def set_results(self, results: Results) -> None:
        self._results = results
        self.refresh()

    def _build_phase_table(self) -> Table:
        table = Table(
            title="[bold]Phase summary[/bold]",
            show_header=True,
            header_style="bold cyan",
            border_style="cyan",
            padding=(0, 1),
            expand=True,
        )
        table.add_column("Phase", style="bold")
        table.add_column("Method")
        for metric in SUMMARY_COLUMNS:
            table.add_column(metric.replace("_", " ").title(), justify="right")

        for phase in Phase:
            for s in self._results.summaries:
                if s.phase is not phase:
                    continue
                table.add_row(
                    Text(phase.value, style=PHASE_STYLES[phase]),
                    s.method,
                    *(str(s.stat(metric)) for metric in SUMMARY_COLUMNS),
                )
        return table

    def _build_runs_table(self) -> Table:
        table = Table(
            title="[bold]Runs (final evaluation)[/bold]",
            show_header=True,
            header_style="bold orange1",
            border_style="orange1",
            padding=(0, 1),
            expand=True,
        )
        table.add_column("Run", style="bold")
        table.add_column("Seed", justify="right")
        table.add_column("w_hf", justify="right")
        table.add_column("Step", justify="right", style="dim")
        table.add_column("Return", justify="right")
        table.add_column("Success", justify="right")
        table.add_column("Path dev.", justify="right")
        table.add_column("Online acc.", justify="right", style="dim")

        for run in self._results.runs:
            final = run.final
            if final is None:
                table.add_row(run.run_id, str(run.seed), f"{run.w_hf:g}", "-", "-", "-", "-", "-")
                continue
            accuracy = "-" if run.online_accuracy is None else f"{run.online_accuracy:.3f}"
            table.add_row(
                Text(run.run_id, style=run.condition.color),
                str(run.seed),
                f"{run.w_hf:g}",
                f"{final.step:,}",
                f"{final.mean_return:.2f} ± {final.return_std:.2f}",
                f"{final.success_rate:.2f}",
                f"{final.path_deviation:.4f}",
                accuracy,
            )
        return table

    def render(self) -> RenderableType:
        if not self._results:
            return Panel(Text("No results loaded", style="dim"), title="Summary", border_style="dim")
        return Group(self._build_phase_table(), Text(""), self._build_runs_table())

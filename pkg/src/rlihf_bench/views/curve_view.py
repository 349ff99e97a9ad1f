"""ASCII line charts of a run's evaluation curve."""

from collections.abc import Sequence

from rich.console import Group, RenderableType
from rich.panel import Panel
from rich.text import Text
from textual.widgets import Static

from rlihf_bench.harness.results import RunResult

CHART_WIDTH = 56
CHART_HEIGHT = 10


def render_curve(
    xs: Sequence[float],
    ys: Sequence[float],
    width: int = CHART_WIDTH,
    height: int = CHART_HEIGHT,
) -> list[str]:
    """Scatter ys against xs onto a character grid with a labelled y axis.

    Returns:
        height plot rows followed by the x axis row
    """
    if not xs:
        return ["(no points)"]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    if y_hi == y_lo:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_span = (x_hi - x_lo) or 1.0

    grid = [[" "] * width for _ in range(height)]
    prev = None
    for x, y in zip(xs, ys):
        col = round((x - x_lo) / x_span * (width - 1))
        row = height - 1 - round((y - y_lo) / (y_hi - y_lo) * (height - 1))
        if prev is not None:
            # dotted segment between consecutive points
            pc, pr = prev
            steps = max(abs(col - pc), abs(row - pr))
            for k in range(1, steps):
                c = pc + round(k * (col - pc) / steps)
                r = pr + round(k * (row - pr) / steps)
                if grid[r][c] == " ":
                    grid[r][c] = "·"
        grid[row][col] = "●"
        prev = (col, row)

    labels = [f"{y_hi:>9.2f} │", *([" " * 9 + " │"] * (height - 2)), f"{y_lo:>9.2f} │"]
    lines = [label + "".join(row) for label, row in zip(labels, grid)]
    lines.append(" " * 10 + "└" + "─" * width)
    lines.append(" " * 11 + f"{x_lo:<{width // 2},.0f}" + f"{x_hi:>{width - width // 2},.0f}")
    return lines


class CurveView(Static):
    """Return and success curves of the selected run."""

    DEFAULT_CSS = """
    CurveView {
        height: auto;
        padding: 1;
    }
    """

    def __init__(self, run: RunResult | None = None, **kwargs):
        super().__init__(**kwargs)
        self._run = run

    def set_run(self, run: RunResult) -> None:
        self._run = run
        self.refresh()

    def _chart(self, title: str, metric: str, style: str) -> Text:
        steps = [r.step for r in self._run.records]
        values = [getattr(r, metric) for r in self._run.records]
        text = Text()
        text.append(f"{title}\n", style="bold")
        text.append("\n".join(render_curve(steps, values)), style=style)
        return text

    def render(self) -> RenderableType:
        if not self._run:
            return Panel(Text("Select a run from the sidebar", style="dim"), title="Curves", border_style="dim")
        color = self._run.condition.color
        content = Group(
            self._chart("Mean return", "mean_return", color),
            Text(""),
            self._chart("Success rate", "success_rate", color),
            Text(""),
            self._chart("Path deviation", "path_deviation", "grey70"),
        )
        return Panel(
            content,
            title=f"[bold]{self._run.run_id}[/bold]",
            subtitle=f"[dim]{len(self._run.records)} evaluation points[/dim]",
            border_style=color,
            padding=(1, 2),
        )

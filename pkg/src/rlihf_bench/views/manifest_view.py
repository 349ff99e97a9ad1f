"""Tree view of the experiment manifest."""

from typing import Any

from rich.console import Group, RenderableType
from rich.panel import Panel
from rich.table import Table
from rich.text import Text
from rich.tree import Tree
from textual.widgets import Static

from rlihf_bench.harness.results import Results


def _add_value(tree: Tree, key: str, value: Any) -> None:
    if isinstance(value, dict):
        branch = tree.add(Text(key, style="bold"))
        for k, v in value.items():
            _add_value(branch, str(k), v)
    elif isinstance(value, list) and value and all(isinstance(v, dict) for v in value):
        branch = tree.add(Text(f"{key} ({len(value)})", style="bold"))
        for i, v in enumerate(value):
            _add_value(branch, f"[{i}]", v)
    else:
        text = Text()
        text.append(key, style="cyan")
        text.append(" = ")
        text.append(repr(value) if isinstance(value, str) else str(value), style="yellow")
        tree.add(text)


class ManifestView(Static):
    """Resolved config and run entries as a tree."""

    DEFAULT_CSS = """
    ManifestView {
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

    def render(self) -> RenderableType:
        if not self._results:
            return Panel(Text("No manifest loaded", style="dim"), title="Manifest", border_style="dim")
        manifest = self._results.manifest

        header = Table.grid(padding=(0, 2))
        header.add_column()
        header.add_column()
        header.add_row(
            Text(f"{manifest.get('tool', '?')} {manifest.get('version', '')}", style="bold"),
            Text(f"content hash {self._results.content_hash}", style="dim"),
        )

        tree = Tree(Text(str(self._results.root), style="bold white"), guide_style="dim")
        _add_value(tree, "config", manifest.get("config", {}))
        runs = tree.add(Text(f"runs ({len(manifest.get('runs', []))})", style="bold"))
        for entry in manifest.get("runs", []):
            _add_value(runs, entry.get("run_id", "?"), entry)
        _add_value(tree, "artifacts", manifest.get("artifacts", {}))

        return Panel(
            Group(header, Text(""), tree),
            title="[bold]Experiment manifest[/bold]",
            border_style="cyan",
            padding=(1, 2),
        )

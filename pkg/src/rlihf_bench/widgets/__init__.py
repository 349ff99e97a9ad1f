"""TUI widgets for the results browser."""

from rlihf_bench.widgets.run_list import RunItem, RunList
from rlihf_bench.widgets.status_bar import StatusBar

__all__ = ["RunItem", "RunList", "StatusBar"]

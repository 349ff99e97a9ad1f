"""Result views for the browser."""

from rlihf_bench.views.curve_view import CurveView, render_curve
from rlihf_bench.views.manifest_view import ManifestView
from rlihf_bench.views.summary_view import SummaryView

__all__ = ["CurveView", "ManifestView", "SummaryView", "render_curve"]

"""Export functionality for benchmark results."""

from rlihf_bench.export.csv_export import (
    DECODER_BENCH_HEADERS,
    EVAL_HEADERS,
    REWARD_LOG_HEADERS,
    SUMMARY_HEADERS,
    SWEEP_HEADERS,
    TRAJECTORY_HEADERS,
    parse_eval_rows,
    read_rows,
    write_decoder_bench,
    write_eval_csv,
    write_reward_log,
    write_summary_csv,
    write_sweep_csv,
    write_trajectory,
)
from rlihf_bench.export.json_export import MANIFEST_NAME, content_hash, export_json, manifest_to_dict
from rlihf_bench.export.svg_export import export_svg
from rlihf_bench.export.text_export import export_text

__all__ = [
    "DECODER_BENCH_HEADERS",
    "EVAL_HEADERS",
    "MANIFEST_NAME",
    "REWARD_LOG_HEADERS",
    "SUMMARY_HEADERS",
    "SWEEP_HEADERS",
    "TRAJECTORY_HEADERS",
    "content_hash",
    "export_json",
    "export_svg",
    "export_text",
    "manifest_to_dict",
    "parse_eval_rows",
    "read_rows",
    "write_decoder_bench",
    "write_eval_csv",
    "write_reward_log",
    "write_summary_csv",
    "write_sweep_csv",
    "write_trajectory",
]

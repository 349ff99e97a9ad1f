"""Command line: train, eval, sweep, synth-data, decoder-bench and view."""

import argparse
import json
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Optional

import numpy as np
from rich.console import Console
from rich.markup import escape
from rich.table import Table

from rlihf_bench import __version__
from rlihf_bench.agent.checkpoint import load_checkpoint
from rlihf_bench.config import BenchConfig, apply_overrides, build_dataclass, load_config, to_plain
from rlihf_bench.decoder.loso import SubjectDataset, accuracies_by_mode, loso_evaluate, noise_rank_correlation
from rlihf_bench.env.planner import compute_ideal_path
from rlihf_bench.errors import AgentError, ConfigError, DecoderError, RlihfError, SignalError
from rlihf_bench.export.csv_export import write_decoder_bench, write_eval_csv, write_trajectory
from rlihf_bench.export.json_export import export_json
from rlihf_bench.harness.reports import emit_reports
from rlihf_bench.harness.rng import derive_rng
from rlihf_bench.harness.runner import evaluate
from rlihf_bench.harness.sweep import grid_specs, run_grid, sweep_whf
from rlihf_bench.log import setup_logging
from rlihf_bench.models.records import METRICS, Condition, Phase, PhaseSummary
from rlihf_bench.models.signal import SubjectProfile
from rlihf_bench.signal.epoch_io import read_epochs, write_epochs
from rlihf_bench.signal.generator import make_cohort
from rlihf_bench.signal.session import record_subject

logger = logging.getLogger(__name__)

COHORT_FILE = "cohort.json"
DECODER_BENCH_CSV = "decoder_bench.csv"
EPOCH_SUFFIX = ".errp"

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2

console = Console()


def _float_list(text: str) -> list[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _conditions(text: str) -> list[Condition]:
    try:
        return [Condition(part.strip()) for part in text.split(",") if part.strip()]
    except ValueError:
        choices = ",".join(c.value for c in Condition)
        raise argparse.ArgumentTypeError(f"conditions must be drawn from {choices}, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rlihf-bench",
        description="Desk-scale testbed for RL from implicit (ErrP) human feedback.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging and tracebacks")
    common.add_argument("--config", type=Path, help="YAML config or JSON manifest (packaged defaults if omitted)")
    common.add_argument("--seed", type=int, help="Master seed")

    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", parents=[common], help="Train every condition × seed and write reports")
    train.add_argument("--out", type=Path, default=Path("results"))
    train.add_argument("--condition", type=_conditions, help="Comma-separated subset of sparse,dense,rlihf")
    train.add_argument("--whf", type=float, help="Feedback weight of the rlihf condition")
    train.add_argument("--steps", type=int, help="Training steps per run")
    train.add_argument("--parallel", type=int, help="Worker processes")
    train.add_argument("--log-rewards", action="store_true", help="Write per-step reward logs")
    train.add_argument("--svg", action="store_true", help="Plot evaluation curves")

    ev = sub.add_parser("eval", parents=[common], help="Evaluate a saved policy checkpoint")
    ev.add_argument("--checkpoint", type=Path, required=True)
    ev.add_argument("--out", type=Path, help="Write eval.csv and trajectory.csv here")
    ev.add_argument("--rollouts", type=int, help="Deterministic rollouts (defaults to experiment.eval_rollouts)")

    sweep = sub.add_parser("sweep", parents=[common], help="RLIHF runs over several feedback weights")
    sweep.add_argument("--weights", type=_float_list, help="Comma-separated w_hf values")
    sweep.add_argument("--out", type=Path, default=Path("results-sweep"))
    sweep.add_argument("--steps", type=int)
    sweep.add_argument("--parallel", type=int)
    sweep.add_argument("--svg", action="store_true")

    synth = sub.add_parser("synth-data", parents=[common], help="Record a synthetic subject cohort")
    synth.add_argument("--out", type=Path, required=True)
    synth.add_argument("--subjects", type=int, default=12)
    synth.add_argument("--trials", type=int, default=200, help="Balanced trials per subject")
    synth.add_argument("--noise-min", type=float, default=1.0)
    synth.add_argument("--noise-max", type=float, default=40.0)

    bench = sub.add_parser("decoder-bench", parents=[common], help="Leave-one-subject-out decoder accuracy")
    bench.add_argument("--data", type=Path, required=True, help="Directory written by synth-data")
    bench.add_argument("--out", type=Path, help="Where decoder_bench.csv goes (defaults to --data)")
    bench.add_argument("--online-trials", type=int, default=200)

    view = sub.add_parser("view", help="Browse an output directory")
    view.add_argument("-v", "--verbose", action="store_true")
    view.add_argument("results", type=Path)
    return parser


def _load(args: argparse.Namespace) -> BenchConfig:
    config = load_config(getattr(args, "config", None))
    return apply_overrides(
        config,
        seed=getattr(args, "seed", None),
        conditions=getattr(args, "condition", None),
        w_hf=getattr(args, "whf", None),
        steps=getattr(args, "steps", None),
        parallel=getattr(args, "parallel", None),
        log_rewards=True if getattr(args, "log_rewards", False) else None,
        sweep_weights=getattr(args, "weights", None),
    )


def summary_table(summaries: Sequence[PhaseSummary], title: str) -> Table:
    """Phase × method table of mean ± std metrics."""
    table = Table(title=title, show_header=True, header_style="bold")
    table.add_column("Phase", style="bold")
    table.add_column("Method")
    for metric in METRICS:
        table.add_column(metric.replace("_", " ").title(), justify="right")
    for phase in Phase:
        for s in summaries:
            if s.phase is phase and all(m in s.metrics for m in METRICS):
                table.add_row(phase.value, s.method, *(str(s.stat(m)) for m in METRICS))
    return table


def cmd_train(args: argparse.Namespace) -> int:
    config = _load(args)
    logs = run_grid(config, grid_specs(config), out_dir=args.out)
    paths = emit_reports(logs, args.out, config, svg=args.svg)
    console.print(summary_table(paths.summaries, "Phase summary"))
    console.print(f"[dim]manifest:[/dim] {paths.manifest}")
    return EXIT_OK


def cmd_eval(args: argparse.Namespace) -> int:
    config = _load(args)
    actor = load_checkpoint(args.checkpoint)
    scenario = config.run_scenario
    obs_dim = actor.trunk.weights[0].shape[0]
    if obs_dim != scenario.observation_size:
        raise AgentError(
            f"{args.checkpoint}: policy expects {obs_dim} observations, scenario provides {scenario.observation_size}"
        )
    ideal = compute_ideal_path(scenario)
    n = args.rollouts or config.experiment.eval_rollouts
    if n < 1:
        raise ConfigError("--rollouts must be >= 1")
    record, trajectories = evaluate(
        actor, scenario, ideal, n, derive_rng(config.experiment.master_seed, "eval"), step=0
    )

    table = Table(title=f"Evaluation of {args.checkpoint.name}", show_header=True, header_style="bold")
    table.add_column("Metric", style="bold")
    table.add_column("Value", justify="right")
    table.add_row("Rollouts", str(record.rollouts))
    table.add_row("Mean return", f"{record.mean_return:.3f} ± {record.return_std:.3f}")
    table.add_row("Success rate", f"{record.success_rate:.2f} ({record.successes}/{record.rollouts})")
    table.add_row("Path efficiency", f"{record.path_efficiency:.3f}")
    table.add_row("Path deviation", f"{record.path_deviation:.4f}")
    console.print(table)

    if args.out:
        write_eval_csv([record], args.out / "eval.csv")
        write_trajectory(trajectories[0], ideal, args.out / "trajectory.csv")
        console.print(f"[dim]wrote:[/dim] {args.out / 'eval.csv'}, {args.out / 'trajectory.csv'}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    config = _load(args)
    by_weight = sweep_whf(config, args.weights, out_dir=args.out)
    logs = [log for w in sorted(by_weight) for log in by_weight[w]]
    paths = emit_reports(logs, args.out, config, svg=args.svg, sweep=True)
    console.print(summary_table(paths.summaries, "Feedback weight sweep"))
    console.print(f"[dim]sweep returns:[/dim] {paths.sweep}")
    return EXIT_OK


def cmd_synth_data(args: argparse.Namespace) -> int:
    config = _load(args)
    if args.trials < 2:
        raise ConfigError("--trials must be >= 2")
    signal = config.pipeline.signal
    rng = derive_rng(config.experiment.master_seed, "cohort")
    cohort = make_cohort(args.subjects, rng, args.noise_min, args.noise_max, channels=signal.channels)

    table = Table(title=f"Synthetic cohort → {args.out}", show_header=True, header_style="bold")
    table.add_column("Subject", style="bold")
    table.add_column("Noise µV", justify="right")
    table.add_column("SNR dB", justify="right")
    table.add_column("Epochs", justify="right")
    for profile in cohort:
        epochs = record_subject(profile, signal, args.trials, rng)
        write_epochs(epochs, args.out / f"{profile.subject_id}{EPOCH_SUFFIX}")
        table.add_row(profile.subject_id, f"{profile.noise_std:.2f}", f"{profile.snr_db:.1f}", str(len(epochs)))

    export_json(
        {"signal": to_plain(signal), "subjects": [to_plain(p) for p in cohort]},
        args.out / COHORT_FILE,
    )
    console.print(table)
    return EXIT_OK


def load_cohort(data_dir: Path) -> dict[str, SubjectProfile]:
    """subject_id → profile from cohort.json; empty when the file is absent."""
    path = data_dir / COHORT_FILE
    if not path.exists():
        return {}
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise SignalError(f"{path}: {e}") from e
    profiles = [build_dataclass(SubjectProfile, item, f"subjects[{i}]") for i, item in enumerate(data.get("subjects", []))]
    return {p.subject_id: p for p in profiles}


def cmd_decoder_bench(args: argparse.Namespace) -> int:
    config = _load(args)
    files = sorted(args.data.glob(f"*{EPOCH_SUFFIX}"))
    if not files:
        raise DecoderError(f"no {EPOCH_SUFFIX} files in {args.data}")
    profiles = load_cohort(args.data)
    if not profiles:
        logger.warning("no %s in %s; skipping online replay scores", COHORT_FILE, args.data)

    subjects = []
    for path in files:
        epochs = read_epochs(path)
        subjects.append(SubjectDataset(path.stem, epochs, profiles.get(path.stem)))

    results = loso_evaluate(
        subjects,
        config.pipeline.decoder,
        config.pipeline.signal,
        online_trials=args.online_trials if profiles else 0,
        rng=derive_rng(config.experiment.master_seed, "decoder"),
    )
    out = write_decoder_bench(results, (args.out or args.data) / DECODER_BENCH_CSV)

    table = Table(title="Leave-one-subject-out accuracy", show_header=True, header_style="bold")
    table.add_column("Subject", style="bold")
    modes = [m for m in ("pretrain", "loso", "online") if any(r.mode == m for r in results)]
    for mode in modes:
        table.add_column(mode, justify="right")
    by_mode = {mode: accuracies_by_mode(results, mode) for mode in modes}
    for subject in subjects:
        table.add_row(subject.subject_id, *(f"{by_mode[m].get(subject.subject_id, float('nan')):.3f}" for m in modes))
    console.print(table)

    loso = by_mode["loso"]
    values = np.array(list(loso.values()))
    console.print(f"LOSO accuracy range {values.min():.3f}..{values.max():.3f} (mean {values.mean():.3f})")
    known = [s for s in subjects if s.profile is not None]
    if len(known) >= 3:
        rho = noise_rank_correlation([s.profile.noise_std for s in known], [loso[s.subject_id] for s in known])
        console.print(f"Spearman ρ(noise, accuracy) = {rho:.3f}")
    console.print(f"[dim]wrote:[/dim] {out}")
    return EXIT_OK


def cmd_view(args: argparse.Namespace) -> int:
    from rlihf_bench.app import ResultsApp
    from rlihf_bench.harness.results import load_results

    ResultsApp(load_results(args.results)).run()
    return EXIT_OK


COMMANDS = {
    "train": cmd_train,
    "eval": cmd_eval,
    "sweep": cmd_sweep,
    "synth-data": cmd_synth_data,
    "decoder-bench": cmd_decoder_bench,
    "view": cmd_view,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv and dispatch.

    Returns:
        0 on success, 1 on configuration errors, 2 on runtime failures
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as e:
        console.print(f"[red]config error:[/red] {escape(str(e))}", highlight=False)
        return EXIT_CONFIG
    except RlihfError as e:
        if args.verbose:
            console.print_exception()
        console.print(f"[red]error:[/red] {escape(str(e))}", highlight=False)
        return EXIT_RUNTIME
    except Exception as e:
        if args.verbose:
            console.print_exception()
        console.print(f"[red]unexpected failure:[/red] {escape(repr(e))}", highlight=False)
        return EXIT_RUNTIME

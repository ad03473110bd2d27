"""Command-line interface: run, plot, compare and oracle verbs."""

import argparse
import logging
from pathlib import Path
from typing import Optional, Sequence

from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from mopbnb import __version__
from mopbnb.config import Settings, get_settings, load_experiment_config
from mopbnb.core.exceptions import ConfigError, MopbnbError
from mopbnb.core.models import OPTIMIZERS, ExperimentConfig, OracleConfig
from mopbnb.problems.registry import PROBLEMS
from mopbnb.services.experiment import align_uniform, load_oracle, load_threshold, run_experiment, sweep_sigmas
from mopbnb.storage.bundle_store import BundleStore, ResultsBundle
from mopbnb.storage.oracle_store import OracleStore
from mopbnb.ui.plots import PLOT_KINDS, emit_plots
from mopbnb.ui.tables import compare_table, render_compare
from mopbnb.ui.terminal_chart import render_metric_chart

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mopbnb", description="Multi-objective probabilistic branch and bound")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    verbs = parser.add_subparsers(dest="verb", required=True)

    run = verbs.add_parser("run", help="execute an experiment and write a results bundle")
    run.add_argument("config", nargs="?", help="YAML experiment config")
    run.add_argument("--problem", choices=sorted(PROBLEMS))
    run.add_argument("--dim", type=int)
    run.add_argument("--optimizer", choices=OPTIMIZERS)
    run.add_argument("--iters", type=int, help="iterations (MOPBnB) or checkpoints (uniform)")
    run.add_argument("--runs", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--sigma", type=float, nargs="+", help="one or more noise levels")
    run.add_argument("--out", help="bundle directory")
    run.add_argument("--budget", type=int, help="evaluation budget for the baselines")
    run.add_argument("--align-to", help="MOPBnB bundle whose evaluation counts set uniform checkpoints")
    run.add_argument("--independent-noise", action="store_true", help="one noise draw per objective")

    plot = verbs.add_parser("plot", help="draw SVG figures from bundles")
    plot.add_argument("bundles", nargs="+")
    plot.add_argument("--kind", choices=PLOT_KINDS + ("all",), default="all")
    plot.add_argument("--out", help="figure directory (default: <first bundle>/figures)")
    plot.add_argument("--terminal", action="store_true", help="also print metric curves in the terminal")
    plot.add_argument("--metric", choices=("m1", "m2", "m3"), default="m1")

    compare = verbs.add_parser("compare", help="final-iteration table across bundles")
    compare.add_argument("bundles", nargs="+")
    compare.add_argument("--out", default="compare.csv", help="CSV output path")

    oracle = verbs.add_parser("oracle", help="precompute frontier grids and y(delta, S) thresholds")
    oracle.add_argument("--problem", choices=sorted(PROBLEMS), required=True)
    oracle.add_argument("--dim", type=int, default=2)
    oracle.add_argument("--resolution", type=int, default=10_000)
    oracle.add_argument("--delta", type=float, default=0.1)
    oracle.add_argument("--mc-points", type=int, default=100_000)
    oracle.add_argument("--seed", type=int, default=0)
    return parser


def configure_logging(settings: Settings, verbose: bool) -> None:
    level = logging.DEBUG if verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    cfg = load_experiment_config(args.config) if args.config else ExperimentConfig()
    data = cfg.model_dump()
    overrides = {
        "problem": args.problem,
        "dim": args.dim,
        "optimizer": args.optimizer,
        "iterations": args.iters,
        "runs": args.runs,
        "seed": args.seed,
        "out": args.out,
    }
    data.update({key: value for key, value in overrides.items() if value is not None})
    if args.budget is not None:
        data["baselines"]["budget"] = args.budget
    if args.independent_noise:
        data["noise"]["shared"] = False
    return ExperimentConfig.model_validate(data)


def cmd_run(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    cfg = _experiment_config(args)
    if args.align_to:
        if cfg.optimizer != "uniform":
            raise ConfigError("--align-to only applies to the uniform optimizer")
        cfg = align_uniform(cfg, BundleStore(args.align_to).load(include_runs=False))
    oracle_store = OracleStore(settings.data_path)
    for sweep_cfg in sweep_sigmas(cfg, args.sigma or []):
        bundle = run_experiment(sweep_cfg, settings=settings, oracle_store=oracle_store)
        console.print(render_compare(compare_table([bundle])))
        console.print(f"[dim]Bundle written to {bundle.path}[/dim]")
    return EXIT_OK


def _has_partition(bundle: ResultsBundle) -> bool:
    return bundle.dim == 2 and bool(bundle.runs) and bool(bundle.runs[0]["regions"])


def cmd_plot(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    bundles = [BundleStore(path).load() for path in args.bundles]
    out_dir = Path(args.out) if args.out else Path(args.bundles[0]) / "figures"
    kinds = PLOT_KINDS if args.kind == "all" else (args.kind,)
    for kind in kinds:
        if kind == "partition" and args.kind == "all" and not all(map(_has_partition, bundles)):
            logger.info("Skipping partition plot (needs two-variable MOPBnB bundles)")
            continue
        for path in emit_plots(bundles, kind, out_dir):
            console.print(f"Wrote {path}")
    if args.terminal:
        console.print(render_metric_chart(bundles, metric=args.metric))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    bundles = [BundleStore(path).load(include_runs=False) for path in args.bundles]
    frame = compare_table(bundles, args.out)
    console.print(render_compare(frame))
    console.print(f"[dim]Table written to {args.out}[/dim]")
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace, settings: Settings, console: Console) -> int:
    oracle_cfg = OracleConfig(
        resolution=args.resolution,
        delta=args.delta,
        mc_points=args.mc_points,
        seed=args.seed,
        compute_threshold=True,
    )
    cfg = ExperimentConfig(problem=args.problem, dim=args.dim, oracle=oracle_cfg)
    store = OracleStore(settings.data_path)
    oracle = load_oracle(cfg, store)
    threshold = load_threshold(cfg, oracle, store)
    console.print(
        f"{args.problem} n={args.dim}: {len(oracle.points)} frontier points "
        f"(spacing {oracle.spacing:.2e}), y({threshold.delta:g}) = {threshold.y_delta:.6f}"
    )
    return EXIT_OK


COMMANDS = {
    "run": cmd_run,
    "plot": cmd_plot,
    "compare": cmd_compare,
    "oracle": cmd_oracle,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch the verb and map errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    console = Console()
    err_console = Console(stderr=True)
    try:
        settings = get_settings()
        configure_logging(settings, args.verbose)
        return COMMANDS[args.verb](args, settings, console)
    except MopbnbError as e:
        err_console.print(f"[red]Error:[/red] {e.message}")
        return e.exit_code
    except ValidationError as e:
        err_console.print(f"[red]Invalid configuration:[/red] {e}")
        return EXIT_CONFIG
    except OSError as e:
        err_console.print(f"[red]I/O error:[/red] {e}")
        return EXIT_IO

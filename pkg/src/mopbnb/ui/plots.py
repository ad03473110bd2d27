"""SVG figures: final fronts, n=2 partitions and metric curves."""

from pathlib import Path
from typing import Literal, Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.figure import Figure  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

from mopbnb.core.exceptions import PlotUnsupportedError, StorageError  # noqa: E402
from mopbnb.services.metrics import FrontierOracle  # noqa: E402
from mopbnb.storage.bundle_store import ResultsBundle  # noqa: E402

PlotKind = Literal["frontier", "partition", "metric_curves"]
PLOT_KINDS: tuple[str, ...] = ("frontier", "partition", "metric_curves")

# fixed salt keeps SVG element ids stable between runs
matplotlib.rcParams["svg.hashsalt"] = "mopbnb"

MARKERS = ("o", "s", "^", "D", "v", "x")


def frontier_figure(bundles: Sequence[ResultsBundle], oracle: FrontierOracle, run_id: int = 0) -> Figure:
    """Final archive of one run per bundle over the true frontier."""
    fig, ax = plt.subplots(figsize=(6, 5))
    ax.scatter(oracle.points[:, 0], oracle.points[:, 1], s=4, marker="*", color="tab:blue", label="true frontier")
    for i, bundle in enumerate(bundles):
        runs = [r for r in bundle.runs if r["run_id"] == run_id]
        if not runs or not runs[0]["archive"]["estimates"]:
            continue
        estimates = np.asarray(runs[0]["archive"]["estimates"])
        ax.scatter(estimates[:, 0], estimates[:, 1], s=12, marker=MARKERS[i % len(MARKERS)], label=bundle.label)
    ax.set_xlabel("f1")
    ax.set_ylabel("f2")
    ax.set_title(f"{oracle.problem_id} front (run {run_id})")
    ax.legend(loc="upper right", fontsize="small")
    return fig


def partition_figure(bundle: ResultsBundle, run_id: int = 0) -> Figure:
    """Final boxes of a two-variable run: pruned boxes labelled with their pruning iteration."""
    if bundle.dim != 2:
        raise PlotUnsupportedError("partition", f"needs n = 2, bundle has n = {bundle.dim}")
    runs = [r for r in bundle.runs if r["run_id"] == run_id]
    if not runs or not runs[0]["regions"]:
        raise PlotUnsupportedError("partition", f"{bundle.optimizer} bundles carry no region tree")
    run = runs[0]
    leaves = [node for node in run["regions"] if node["status"] in ("active", "pruned")]
    points = np.asarray(run["archive"]["points"]).reshape(-1, 2)

    lower = np.min([node["lower"] for node in leaves], axis=0)
    upper = np.max([node["upper"] for node in leaves], axis=0)
    min_label_width = 0.04 * (upper[0] - lower[0])

    fig, ax = plt.subplots(figsize=(6, 6))
    for node in leaves:
        (x0, y0), (x1, y1) = node["lower"], node["upper"]
        pruned = node["status"] == "pruned"
        ax.add_patch(
            Rectangle(
                (x0, y0),
                x1 - x0,
                y1 - y0,
                facecolor="lightgrey" if pruned else "tab:green",
                edgecolor="black",
                linewidth=0.3,
                alpha=0.5 if pruned else 0.8,
            )
        )
        if pruned and node["pruned_at"] is not None and (x1 - x0) > min_label_width:
            ax.text((x0 + x1) / 2, (y0 + y1) / 2, str(node["pruned_at"]), ha="center", va="center", fontsize=6)
    if len(points):
        ax.scatter(points[:, 0], points[:, 1], s=6, color="tab:red", zorder=3, label="archive")
    ax.set_xlim(lower[0], upper[0])
    ax.set_ylim(lower[1], upper[1])
    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title(f"{bundle.problem} partition, {len(leaves)} boxes (run {run_id})")
    return fig


def metric_curves_figure(bundles: Sequence[ResultsBundle]) -> Figure:
    """Mean M1/M2/M3 against mean cumulative evaluations, one curve per bundle per metric."""
    fig, axes = plt.subplots(1, 3, figsize=(15, 4))
    for bundle in bundles:
        aggregate = bundle.aggregate.sort_values("iteration")
        for ax, metric in zip(axes, ("m1", "m2", "m3")):
            ax.plot(aggregate["evals_mean"], aggregate[f"{metric}_mean"], marker="o", markersize=3, label=bundle.label)
    for ax, metric in zip(axes, ("M1", "M2", "M3")):
        ax.set_xscale("log")
        ax.set_xlabel("evaluations")
        ax.set_ylabel(metric)
        ax.legend(fontsize="small")
    fig.tight_layout()
    return fig


def _save(fig: Figure, path: Path) -> Path:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
    except OSError as e:
        raise StorageError(path, e.strerror or str(e)) from e
    finally:
        plt.close(fig)
    return path


def emit_plots(
    bundles: Sequence[ResultsBundle],
    kind: PlotKind,
    out_dir: str | Path,
    oracle: Optional[FrontierOracle] = None,
) -> list[Path]:
    """Write the requested figure(s) as SVG files under `out_dir`."""
    out_dir = Path(out_dir)
    if kind == "frontier":
        if oracle is None:
            oracle = FrontierOracle.build(bundles[0].problem, bundles[0].dim, bundles[0].config.oracle.resolution)
        return [_save(frontier_figure(bundles, oracle), out_dir / "frontier.svg")]
    if kind == "partition":
        paths = []
        for bundle in bundles:
            name = f"partition_{bundle.optimizer}.svg" if len(bundles) > 1 else "partition.svg"
            paths.append(_save(partition_figure(bundle), out_dir / name))
        return paths
    if kind == "metric_curves":
        return [_save(metric_curves_figure(bundles), out_dir / "metric_curves.svg")]
    raise PlotUnsupportedError(kind, f"unknown plot kind, expected one of {', '.join(PLOT_KINDS)}")

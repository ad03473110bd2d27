"""Final-iteration comparison tables (CSV and rich)."""

from pathlib import Path
from typing import Optional, Sequence

import pandas as pd
from rich.table import Table
from rich.text import Text

from mopbnb.core.exceptions import IncompatibleBundlesError, StorageError
from mopbnb.storage.bundle_store import FLOAT_FORMAT, ResultsBundle

METRICS = ("m1", "m2", "m3", "evals")


def compare_rows(bundles: Sequence[ResultsBundle]) -> pd.DataFrame:
    """One row per bundle: mean and std over runs of each run's last record."""
    if not bundles:
        raise ValueError("compare needs at least one bundle")
    problems = sorted({f"{b.problem} n={b.dim}" for b in bundles})
    if len(problems) > 1:
        raise IncompatibleBundlesError(problems)
    rows = []
    for bundle in bundles:
        frame = bundle.trajectories
        last = frame.sort_values(["run_id", "iteration"]).groupby("run_id").tail(1)
        row = {
            "optimizer": bundle.optimizer,
            "problem": bundle.problem,
            "dim": bundle.dim,
            "sigma": bundle.config.noise.sigma,
            "runs": int(last["run_id"].nunique()),
        }
        for metric in METRICS:
            row[f"{metric}_mean"] = float(last[metric].mean())
            row[f"{metric}_std"] = float(last[metric].std()) if len(last) > 1 else 0.0
        rows.append(row)
    return pd.DataFrame(rows)


def compare_table(bundles: Sequence[ResultsBundle], path: Optional[str | Path] = None) -> pd.DataFrame:
    """Build the comparison and, when `path` is given, write it as CSV."""
    frame = compare_rows(bundles)
    if path is not None:
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        except OSError as e:
            raise StorageError(path, e.strerror or str(e)) from e
    return frame


def _format_pair(mean: float, std: float, digits: int = 4) -> str:
    if pd.isna(mean):
        return "-"
    return f"{mean:.{digits}f} ± {std:.{digits}f}"


def _format_evals(mean: float) -> Text:
    if mean >= 1e6:
        return Text(f"{mean / 1e6:.2f}M", style="bold red")
    if mean >= 1e3:
        return Text(f"{mean / 1e3:.1f}k")
    return Text(f"{mean:.0f}")


def render_compare(frame: pd.DataFrame) -> Table:
    """Rich table of a `compare_rows` frame."""
    table = Table(box=None, padding=(0, 1), row_styles=["on grey23", ""])
    table.add_column("Optimizer", style="bold yellow")
    table.add_column("Problem")
    table.add_column("σ", justify="right")
    table.add_column("Runs", justify="right")
    table.add_column("M1", justify="right")
    table.add_column("M2", justify="right")
    table.add_column("M3", justify="right")
    table.add_column("Evals", justify="right")
    for row in frame.itertuples(index=False):
        table.add_row(
            row.optimizer,
            f"{row.problem} n={row.dim}",
            f"{row.sigma:g}",
            str(row.runs),
            _format_pair(row.m1_mean, row.m1_std),
            _format_pair(row.m2_mean, row.m2_std, digits=2),
            _format_pair(row.m3_mean, row.m3_std),
            _format_evals(row.evals_mean),
        )
    return table

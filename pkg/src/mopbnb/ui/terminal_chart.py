"""Metric curves rendered in the terminal with plotext."""

from typing import Sequence

import plotext as plt
from rich.text import Text

from mopbnb.storage.bundle_store import ResultsBundle


def render_metric_chart(
    bundles: Sequence[ResultsBundle],
    metric: str = "m1",
    width: int = 80,
    height: int = 20,
) -> Text:
    """Mean `metric` against mean cumulative evaluations, one line per bundle."""
    if not bundles:
        return Text("No bundles to plot.", style="dim italic")

    plt.clf()
    plt.plotsize(width, height)
    for bundle in bundles:
        aggregate = bundle.aggregate.sort_values("iteration")
        plt.plot(
            aggregate["evals_mean"].tolist(),
            aggregate[f"{metric}_mean"].fillna(0.0).tolist(),
            marker="braille",
            label=bundle.label,
        )
    plt.xscale("log")
    plt.title(f"{bundles[0].problem} n={bundles[0].dim}: {metric.upper()}")
    plt.xlabel("Evaluations")
    plt.ylabel(metric.upper())
    plt.theme("dark")

    return Text.from_ansi(plt.build())

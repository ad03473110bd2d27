"""Unit tests for comparison tables."""

import pandas as pd
import pytest
from rich.console import Console
from rich.table import Table

from mopbnb.core.exceptions import IncompatibleBundlesError
from mopbnb.ui.tables import compare_rows, compare_table, render_compare


class TestCompareRows:
    """Tests for compare_rows."""

    def test_uses_last_row_of_each_run(self, so_bundle):
        """Test statistics are taken over each run's final record."""
        frame = compare_rows([so_bundle])
        row = frame.iloc[0]
        assert row["optimizer"] == "mopbnb-so"
        assert row["runs"] == 2
        assert row["evals_mean"] == pytest.approx(300.5)
        assert row["m1_mean"] == pytest.approx(0.1 / 3 + 0.005)
        assert row["m3_std"] == pytest.approx(0.0707106781)

    def test_one_row_per_bundle(self, so_bundle, uniform_bundle):
        """Test bundles keep their order."""
        frame = compare_rows([so_bundle, uniform_bundle])
        assert frame["optimizer"].tolist() == ["mopbnb-so", "uniform"]
        assert frame["evals_mean"].tolist() == [300.5, 600.5]

    def test_incompatible_problems(self, so_bundle, bundle_factory):
        """Test bundles from different problems cannot be compared."""
        with pytest.raises(IncompatibleBundlesError, match="zdt1 n=2, zdt2 n=2"):
            compare_rows([so_bundle, bundle_factory(problem="zdt2")])

    def test_incompatible_dimensions(self, so_bundle, bundle_factory):
        """Test bundles from different dimensions cannot be compared."""
        with pytest.raises(IncompatibleBundlesError):
            compare_rows([so_bundle, bundle_factory(dim=5)])

    def test_no_bundles(self):
        """Test an empty comparison is rejected."""
        with pytest.raises(ValueError, match="at least one bundle"):
            compare_rows([])


class TestCompareTable:
    """Tests for compare_table and render_compare."""

    def test_writes_csv(self, so_bundle, uniform_bundle, tmp_path):
        """Test the comparison is written as CSV."""
        path = tmp_path / "out" / "compare.csv"
        frame = compare_table([so_bundle, uniform_bundle], path)
        written = pd.read_csv(path)
        assert written["optimizer"].tolist() == ["mopbnb-so", "uniform"]
        assert list(written.columns) == list(frame.columns)

    def test_no_path(self, so_bundle, tmp_path):
        """Test nothing is written without a path."""
        compare_table([so_bundle])
        assert not any(tmp_path.iterdir())

    def test_render(self, so_bundle, uniform_bundle):
        """Test the rich table has one row per bundle."""
        table = render_compare(compare_rows([so_bundle, uniform_bundle]))
        assert isinstance(table, Table)
        assert table.row_count == 2
        assert [c.header for c in table.columns][:2] == ["Optimizer", "Problem"]

    def test_render_prints(self, so_bundle):
        """Test the table renders to text."""
        console = Console(record=True, width=120)
        console.print(render_compare(compare_rows([so_bundle])))
        text = console.export_text()
        assert "mopbnb-so" in text
        assert "zdt1 n=2" in text

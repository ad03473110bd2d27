"""Unit tests for the terminal metric chart."""

from rich.text import Text

from mopbnb.ui.terminal_chart import render_metric_chart


class TestRenderMetricChart:
    """Tests for render_metric_chart."""

    def test_empty(self):
        """Test the placeholder when there is nothing to plot."""
        text = render_metric_chart([])
        assert isinstance(text, Text)
        assert text.plain == "No bundles to plot."

    def test_renders_chart(self, so_bundle, uniform_bundle):
        """Test the chart has a title naming the problem and metric."""
        text = render_metric_chart([so_bundle, uniform_bundle], metric="m3", width=60, height=15)
        assert isinstance(text, Text)
        assert "zdt1 n=2: M3" in text.plain

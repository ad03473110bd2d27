"""Unit tests for the command-line interface."""

import pytest

from mopbnb import __version__
from mopbnb.cli import build_parser, main
from mopbnb.storage.bundle_store import BundleStore


@pytest.fixture(autouse=True)
def isolated_env(tmp_path, monkeypatch):
    """Keep the oracle cache and .env lookups inside tmp_path."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.setenv("MOPBNB_DATA_DIR", str(tmp_path / "data"))
    monkeypatch.delenv("MOPBNB_WORKERS", raising=False)


@pytest.fixture
def run_bundle(tmp_path):
    """Path of a one-run MOPBnB(so) bundle written through the CLI."""
    out = tmp_path / "so"
    code = main(["run", "--problem", "zdt1", "--runs", "1", "--iters", "2", "--seed", "3", "--out", str(out)])
    assert code == 0
    return out


class TestParser:
    """Tests for argument parsing."""

    def test_version(self, capsys):
        """Test --version prints the package version."""
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert __version__ in capsys.readouterr().out

    def test_verb_required(self):
        """Test a verb must be given."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_sigma_list(self):
        """Test --sigma accepts several values."""
        args = build_parser().parse_args(["run", "--sigma", "0", "0.1", "0.2"])
        assert args.sigma == [0.0, 0.1, 0.2]

    def test_unknown_problem_choice(self):
        """Test problem ids are restricted to the registry."""
        with pytest.raises(SystemExit):
            build_parser().parse_args(["run", "--problem", "dtlz2"])


class TestRun:
    """Tests for the run verb."""

    def test_writes_bundle(self, capsys, run_bundle):
        """Test a bundle is written with the overrides applied."""
        bundle = BundleStore(run_bundle).load()
        assert bundle.config.runs == 1
        assert bundle.config.iterations == 2
        assert bundle.config.seed == 3
        assert bundle.trajectories["iteration"].tolist() == [1, 2]
        assert "Bundle written to" in capsys.readouterr().out

    def test_config_file(self, tmp_path):
        """Test a YAML config is read and overridden by flags."""
        config = tmp_path / "exp.yaml"
        config.write_text("problem: zdt2\nruns: 3\niterations: 2\nnoise:\n  sigma: 0.0\n")
        out = tmp_path / "from_file"
        assert main(["run", str(config), "--runs", "1", "--out", str(out)]) == 0
        bundle = BundleStore(out).load(include_runs=False)
        assert bundle.problem == "zdt2"
        assert bundle.config.runs == 1
        assert bundle.config.noise.sigma == 0.0

    def test_sigma_sweep(self, tmp_path):
        """Test several sigmas write one bundle each."""
        out = tmp_path / "sweep"
        code = main(["run", "--runs", "1", "--iters", "1", "--sigma", "0", "0.2", "--out", str(out)])
        assert code == 0
        assert BundleStore(f"{out}_sigma0").exists()
        assert BundleStore(f"{out}_sigma0.2").exists()

    def test_uniform_aligned(self, run_bundle, tmp_path):
        """Test --align-to gives uniform search the reference evaluation counts."""
        out = tmp_path / "uniform"
        code = main(["run", "--optimizer", "uniform", "--runs", "1", "--align-to", str(run_bundle), "--out", str(out)])
        assert code == 0
        reference = BundleStore(run_bundle).load(include_runs=False)
        uniform = BundleStore(out).load(include_runs=False)
        assert uniform.trajectories["evals"].tolist() == reference.trajectories["evals"].tolist()

    def test_align_requires_uniform(self, capsys, run_bundle):
        """Test --align-to is rejected for other optimizers."""
        assert main(["run", "--align-to", str(run_bundle)]) == 2
        assert "only applies to the uniform optimizer" in capsys.readouterr().err

    def test_missing_config(self, tmp_path):
        """Test an unreadable config file exits with the I/O code."""
        assert main(["run", str(tmp_path / "missing.yaml")]) == 3

    def test_invalid_config(self, tmp_path):
        """Test an invalid config exits with the configuration code."""
        config = tmp_path / "bad.yaml"
        config.write_text("runs: 0\n")
        assert main(["run", str(config)]) == 2

    def test_invalid_override(self, tmp_path):
        """Test invalid flag values exit with the configuration code."""
        assert main(["run", "--runs", "0", "--out", str(tmp_path / "x")]) == 2

    def test_uniform_without_budget(self, tmp_path):
        """Test uniform search without budget exits with the configuration code."""
        assert main(["run", "--optimizer", "uniform", "--out", str(tmp_path / "x")]) == 2


class TestPlotAndCompare:
    """Tests for the plot and compare verbs."""

    def test_plot_all(self, run_bundle, tmp_path):
        """Test every figure kind is written for an n=2 MOPBnB bundle."""
        figures = tmp_path / "figures"
        assert main(["plot", str(run_bundle), "--out", str(figures)]) == 0
        assert sorted(p.name for p in figures.iterdir()) == ["frontier.svg", "metric_curves.svg", "partition.svg"]

    def test_plot_default_directory(self, run_bundle):
        """Test figures default to <bundle>/figures."""
        assert main(["plot", str(run_bundle), "--kind", "metric_curves"]) == 0
        assert (run_bundle / "figures" / "metric_curves.svg").exists()

    def test_plot_terminal(self, run_bundle, tmp_path, capsys):
        """Test --terminal also prints the chart."""
        assert main(["plot", str(run_bundle), "--kind", "metric_curves", "--out", str(tmp_path), "--terminal"]) == 0
        assert "M1" in capsys.readouterr().out

    def test_plot_missing_bundle(self, tmp_path):
        """Test a missing bundle exits with the I/O code."""
        assert main(["plot", str(tmp_path / "nothing")]) == 3

    def test_compare(self, run_bundle, tmp_path):
        """Test the comparison CSV is written."""
        out = tmp_path / "compare.csv"
        assert main(["compare", str(run_bundle), str(run_bundle), "--out", str(out)]) == 0
        assert len(out.read_text().strip().splitlines()) == 3

    def test_compare_incompatible(self, run_bundle, tmp_path):
        """Test bundles from different problems exit with the configuration code."""
        other = tmp_path / "ff"
        assert main(["run", "--problem", "ff", "--runs", "1", "--iters", "1", "--out", str(other)]) == 0
        assert main(["compare", str(run_bundle), str(other), "--out", str(tmp_path / "c.csv")]) == 2


class TestOracle:
    """Tests for the oracle verb."""

    def test_caches_frontier_and_threshold(self, tmp_path, capsys):
        """Test the frontier grid and threshold land in the data directory."""
        code = main(["oracle", "--problem", "zdt1", "--resolution", "100", "--mc-points", "10000"])
        assert code == 0
        cached = sorted(p.name for p in (tmp_path / "data" / "oracles").iterdir())
        assert cached == ["frontier_zdt1_n2_r100.npy", "threshold_zdt1_n2_d0.1_mc10000_s0.json"]
        assert "y(0.1)" in capsys.readouterr().out

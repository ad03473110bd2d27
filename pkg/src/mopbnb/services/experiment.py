"""Seeded multi-run experiments and results bundles."""

import logging
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from importlib.metadata import PackageNotFoundError, version
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from pydantic import ValidationError

from mopbnb.config import Settings, get_settings
from mopbnb.core.exceptions import ConfigError, UnknownOptimizerError
from mopbnb.core.models import OPTIMIZERS, ExperimentConfig, NoiseSpec, QualityThreshold, Variant
from mopbnb.core.streams import MONTE_CARLO, SAMPLING, make_rng
from mopbnb.core.trajectory import RunTrajectory
from mopbnb.problems.noise import NoisyProblem
from mopbnb.problems.registry import get_function, make_problem
from mopbnb.services import baselines, engine
from mopbnb.services.metrics import FrontierOracle, estimate_y_delta, front_metrics
from mopbnb.storage.bundle_store import TRAJECTORY_COLUMNS, BundleStore, ResultsBundle, aggregate_trajectories
from mopbnb.storage.oracle_store import OracleStore

logger = logging.getLogger(__name__)

REPLICATION_RULE = "min(cap, R1 * 2^(k-1))"


def validate_config(cfg: ExperimentConfig) -> None:
    """Check registry ids and optimizer-specific requirements."""
    get_function(cfg.problem, cfg.dim)
    if cfg.optimizer not in OPTIMIZERS:
        raise UnknownOptimizerError(cfg.optimizer)
    uniform = cfg.baselines.uniform
    if cfg.optimizer == "uniform" and cfg.baselines.budget is None and uniform.checkpoints is None:
        raise ConfigError("uniform search needs baselines.budget or explicit checkpoints")


def run_optimizer(cfg: ExperimentConfig, problem: NoisyProblem, seed: int) -> RunTrajectory:
    """Run the configured optimizer once with `seed`; never touches true values."""
    if cfg.optimizer in ("mopbnb-so", "mopbnb-wr"):
        variant = Variant.SO if cfg.optimizer == "mopbnb-so" else Variant.WR
        params = cfg.algo.model_copy(update={"variant": variant, "max_iterations": cfg.iterations, "rng_seed": seed})
        return engine.run(problem, params)
    rng = make_rng(seed, SAMPLING)
    if cfg.optimizer == "uniform":
        uniform = cfg.baselines.uniform
        budget = cfg.baselines.budget or uniform.checkpoints[-1]
        checkpoints = uniform.checkpoints or baselines.default_checkpoints(budget, cfg.iterations)
        return baselines.uniform_search(
            problem,
            budget,
            uniform.estimator,
            rng,
            checkpoints=checkpoints,
            schedules=cfg.algo.schedules,
            replications=uniform.replications,
            seed=seed,
        )
    if cfg.optimizer == "nsga2":
        return baselines.nsga2(problem, cfg.baselines.nsga2, rng, budget=cfg.baselines.budget, seed=seed)
    raise UnknownOptimizerError(cfg.optimizer)


def load_oracle(cfg: ExperimentConfig, store: Optional[OracleStore] = None) -> FrontierOracle:
    """Frontier oracle for the config, from the cache when available."""
    resolution = cfg.oracle.resolution
    points = store.load_frontier(cfg.problem, cfg.dim, resolution) if store else None
    if points is None:
        points = get_function(cfg.problem, cfg.dim).frontier(resolution)
        if store:
            store.save_frontier(cfg.problem, cfg.dim, resolution, points)
    return FrontierOracle(points=points, problem_id=cfg.problem, resolution=resolution)


def load_threshold(
    cfg: ExperimentConfig, oracle: FrontierOracle, store: Optional[OracleStore] = None
) -> QualityThreshold:
    """y(delta, S) for the config's oracle settings, from the cache when available."""
    oc = cfg.oracle
    threshold = store.load_threshold(cfg.problem, cfg.dim, oc.delta, oc.mc_points, oc.seed) if store else None
    if threshold is None:
        problem = make_problem(cfg.problem, cfg.dim, cfg.noise)
        threshold = estimate_y_delta(problem, oc.delta, oc.mc_points, oracle, make_rng(oc.seed, MONTE_CARLO), oc.seed)
        if store:
            store.save_threshold(cfg.problem, cfg.dim, threshold)
    return threshold


def execute_run(cfg: ExperimentConfig, run_id: int, oracle: FrontierOracle) -> tuple[list[dict], dict]:
    """One seeded run: trajectory rows with metrics, plus the per-run JSON document."""
    seed = cfg.seed + run_id
    problem = make_problem(cfg.problem, cfg.dim, cfg.noise)
    trajectory = run_optimizer(cfg, problem, seed)
    rows = []
    for record, snapshot in zip(trajectory.records, trajectory.snapshots):
        if cfg.oracle.metric_basis == "true" and len(snapshot):
            front = problem.true_values_batch(snapshot.points)
        else:
            front = snapshot.estimates
        record.m1, record.m2, record.m3 = front_metrics(front, oracle, cfg.oracle.d_star)
        rows.append(
            {
                "run_id": run_id,
                "iteration": record.k,
                "evals": record.evals,
                "active_regions": record.active_regions,
                "pruned_regions": record.pruned_regions,
                "archive_size": record.archive_size,
                "r_k": record.r_k,
                "n_k": record.n_k,
                "m1": record.m1,
                "m2": record.m2,
                "m3": record.m3,
            }
        )
    final = trajectory.final_archive
    document = {
        "run_id": run_id,
        "seed": seed,
        "optimizer": trajectory.optimizer,
        "total_evaluations": trajectory.total_evaluations,
        "archive": {
            "points": final.points.tolist() if final is not None else [],
            "estimates": final.estimates.tolist() if final is not None else [],
        },
        "regions": [node.to_dict() for node in trajectory.regions],
    }
    logger.info("Run %d (seed %d) done: %d evaluations", run_id, seed, trajectory.total_evaluations)
    return rows, document


def _package_versions() -> dict[str, str]:
    versions = {}
    for package in ("mopbnb", "numpy", "scipy", "pandas"):
        try:
            versions[package] = version(package)
        except PackageNotFoundError:
            versions[package] = "unknown"
    return versions


def build_manifest(
    cfg: ExperimentConfig, oracle: FrontierOracle, threshold: Optional[QualityThreshold] = None
) -> dict:
    manifest = {
        "optimizer": cfg.optimizer,
        "problem": cfg.problem,
        "dim": cfg.dim,
        "runs": cfg.runs,
        "base_seed": cfg.seed,
        "seeds": [cfg.seed + i for i in range(cfg.runs)],
        "rng": "numpy Philox, SeedSequence(seed, spawn_key=(stream,))",
        "noise": cfg.noise.model_dump(),
        "replication_rule": REPLICATION_RULE if cfg.optimizer == "mopbnb-wr" else None,
        "metric_basis": cfg.oracle.metric_basis,
        "oracle_resolution": oracle.resolution,
        "oracle_spacing": oracle.spacing,
        "versions": _package_versions(),
        "created_at": datetime.now(timezone.utc).isoformat(),
    }
    if threshold is not None:
        manifest["quality_threshold"] = threshold.model_dump()
    return manifest


def run_experiment(
    cfg: ExperimentConfig,
    settings: Optional[Settings] = None,
    write: bool = True,
    oracle_store: Optional[OracleStore] = None,
) -> ResultsBundle:
    """Execute `cfg.runs` seeded runs (seed_i = seed + i) and write the bundle to `cfg.out`."""
    validate_config(cfg)
    settings = settings or get_settings()
    oracle = load_oracle(cfg, oracle_store)
    threshold = load_threshold(cfg, oracle, oracle_store) if cfg.oracle.compute_threshold else None
    run_ids = list(range(cfg.runs))
    logger.info("Running %s on %s n=%d: %d runs, %d workers", cfg.optimizer, cfg.problem, cfg.dim, cfg.runs, settings.workers)

    if settings.workers > 1 and cfg.runs > 1:
        with ProcessPoolExecutor(max_workers=settings.workers) as pool:
            results = list(pool.map(execute_run, [cfg] * cfg.runs, run_ids, [oracle] * cfg.runs))
    else:
        results = [execute_run(cfg, run_id, oracle) for run_id in run_ids]

    rows = [row for run_rows, _ in results for row in run_rows]
    frame = pd.DataFrame(rows, columns=TRAJECTORY_COLUMNS)
    frame["n_k"] = frame["n_k"].astype("Int64")
    frame = frame.sort_values(["run_id", "iteration"], kind="stable").reset_index(drop=True)
    bundle = ResultsBundle(
        config=cfg,
        trajectories=frame,
        aggregate=aggregate_trajectories(frame),
        runs=[document for _, document in results],
        manifest=build_manifest(cfg, oracle, threshold),
    )
    if write:
        path = BundleStore(cfg.out).save(bundle)
        logger.info("Bundle written to %s", path)
    return bundle


def checkpoints_from_bundle(bundle: ResultsBundle) -> list[int]:
    """Mean cumulative evaluations per iteration of a bundle, as strictly increasing checkpoints."""
    means = np.rint(bundle.aggregate.sort_values("iteration")["evals_mean"].to_numpy()).astype(int)
    checkpoints: list[int] = []
    for value in means:
        if value >= 1 and (not checkpoints or value > checkpoints[-1]):
            checkpoints.append(int(value))
    if not checkpoints:
        raise ConfigError(f"bundle {bundle.path} has no usable evaluation counts")
    return checkpoints


def align_uniform(cfg: ExperimentConfig, reference: ResultsBundle) -> ExperimentConfig:
    """Uniform-search config whose checkpoints match a reference bundle's evaluation counts."""
    checkpoints = checkpoints_from_bundle(reference)
    uniform = cfg.baselines.uniform.model_copy(update={"checkpoints": checkpoints})
    baselines_params = cfg.baselines.model_copy(update={"budget": checkpoints[-1], "uniform": uniform})
    return cfg.model_copy(update={"baselines": baselines_params})


def sweep_sigmas(cfg: ExperimentConfig, sigmas: Sequence[float]) -> list[ExperimentConfig]:
    """One config per noise level; several levels write to `<out>_sigma<value>` directories."""
    if not sigmas:
        return [cfg]

    def with_sigma(sigma: float, out: str) -> ExperimentConfig:
        try:
            noise = NoiseSpec.model_validate({**cfg.noise.model_dump(), "sigma": sigma})
        except ValidationError as e:
            raise ConfigError(f"invalid sigma {sigma}: {e}") from e
        return cfg.model_copy(update={"noise": noise, "out": out})

    if len(sigmas) == 1:
        return [with_sigma(sigmas[0], cfg.out)]
    return [with_sigma(sigma, f"{cfg.out}_sigma{sigma:g}") for sigma in sigmas]

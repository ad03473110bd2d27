"""Comparison optimizers: uniform random search and a compact NSGA-II."""

import logging
from typing import Literal, Optional, Sequence

import numpy as np

from mopbnb.core.models import NSGA2Params, Schedules
from mopbnb.core.pareto import ParetoArchive, crowding_distance, fast_non_dominated_sort
from mopbnb.core.trajectory import ArchiveSnapshot, IterationRecord, RunTrajectory
from mopbnb.problems.noise import NoisyProblem
from mopbnb.services.estimation import SampleStore, estimate_all, radius, replicate

logger = logging.getLogger(__name__)


def default_checkpoints(budget: int, count: int = 12) -> list[int]:
    """`count` evenly spaced evaluation counts ending at `budget` (duplicates dropped)."""
    grid = np.unique(np.linspace(budget / count, budget, count).astype(int))
    return [int(c) for c in grid if c >= 1]


def uniform_search(
    problem: NoisyProblem,
    budget: int,
    estimator_mode: Literal["so", "wr"],
    rng: np.random.Generator,
    checkpoints: Optional[Sequence[int]] = None,
    schedules: Optional[Schedules] = None,
    replications: int = 20,
    seed: int = 0,
) -> RunTrajectory:
    """I.i.d. uniform sampling of the whole domain, recorded at evaluation checkpoints.

    In "so" mode checkpoint j estimates with the ball radius of iteration j; in
    "wr" mode every point costs `replications` evaluations and is estimated by
    its replication mean.
    """
    if budget < 1:
        raise ValueError(f"budget must be at least 1, got {budget}")
    schedules = schedules or Schedules()
    checkpoints = [c for c in (checkpoints or default_checkpoints(budget)) if c <= budget] or [budget]
    domain = problem.domain
    box = domain.full_box()
    store = SampleStore(domain, problem.m)
    trajectory = RunTrajectory(optimizer="uniform", seed=seed)
    per_point = replications if estimator_mode == "wr" else 1
    evals = 0

    for j, checkpoint in enumerate(checkpoints, start=1):
        target_points = max(1, checkpoint // per_point)
        new = target_points - len(store)
        if new > 0:
            X = box.sample_uniform(rng, new)
            counts = np.full(new, per_point, dtype=np.int64)
            store.add(X, replicate(problem, X, counts, rng) / per_point, born_at=j, replications=per_point)
            evals += int(counts.sum())
        r_k = None
        if estimator_mode == "wr" or problem.noise_free:
            store.set_estimates(store.raw)
        else:
            r_k = radius(j, domain.n, schedules)
            estimate_all(store, r_k)
        archive = ParetoArchive.from_estimates(np.arange(len(store)), store.estimates)
        trajectory.records.append(
            IterationRecord(k=j, evals=evals, active_regions=0, pruned_regions=0, archive_size=len(archive), r_k=r_k)
        )
        trajectory.snapshots.append(ArchiveSnapshot(store.X[archive.sample_ids].copy(), archive.estimates.copy()))
    logger.info("Uniform search finished: %d points, %d evaluations", len(store), evals)
    return trajectory


def binary_tournament(ranks: np.ndarray, crowding: np.ndarray, count: int, rng: np.random.Generator) -> np.ndarray:
    """Winners of `count` tournaments: lower rank, then larger crowding distance."""
    a = rng.integers(0, len(ranks), size=count)
    b = rng.integers(0, len(ranks), size=count)
    b_wins = (ranks[b] < ranks[a]) | ((ranks[b] == ranks[a]) & (crowding[b] > crowding[a]))
    return np.where(b_wins, b, a)


def sbx_crossover(
    p1: np.ndarray, p2: np.ndarray, lower: np.ndarray, upper: np.ndarray, eta: float, prob: float, rng: np.random.Generator
) -> tuple[np.ndarray, np.ndarray]:
    """Simulated binary crossover on rows of p1/p2, clipped to the bounds."""
    u = rng.random(p1.shape)
    beta = np.where(u <= 0.5, (2.0 * u) ** (1.0 / (eta + 1)), (1.0 / (2.0 * (1.0 - u))) ** (1.0 / (eta + 1)))
    c1 = 0.5 * ((1 + beta) * p1 + (1 - beta) * p2)
    c2 = 0.5 * ((1 - beta) * p1 + (1 + beta) * p2)
    apply = (rng.random(len(p1)) < prob)[:, None]
    c1 = np.where(apply, np.clip(c1, lower, upper), p1)
    c2 = np.where(apply, np.clip(c2, lower, upper), p2)
    return c1, c2


def polynomial_mutation(
    X: np.ndarray, lower: np.ndarray, upper: np.ndarray, eta: float, prob: float, rng: np.random.Generator
) -> np.ndarray:
    u = rng.random(X.shape)
    delta = np.where(u < 0.5, (2.0 * u) ** (1.0 / (eta + 1)) - 1.0, 1.0 - (2.0 * (1.0 - u)) ** (1.0 / (eta + 1)))
    mutated = np.clip(X + delta * (upper - lower), lower, upper)
    return np.where(rng.random(X.shape) < prob, mutated, X)


def _make_offspring(
    parents: np.ndarray, problem: NoisyProblem, params: NSGA2Params, rng: np.random.Generator
) -> np.ndarray:
    domain = problem.domain
    n1 = domain.n1
    lower, upper = domain.lower, domain.upper
    pm = params.mutation_prob if params.mutation_prob is not None else 1.0 / domain.n
    p1, p2 = parents[0::2], parents[1::2]
    c1, c2 = p1.copy(), p2.copy()
    if n1:
        c1[:, :n1], c2[:, :n1] = sbx_crossover(
            p1[:, :n1], p2[:, :n1], lower[:n1], upper[:n1], params.eta_crossover, params.crossover_prob, rng
        )
    if domain.n2:
        # integer genes: uniform crossover
        swap = rng.random(p1[:, n1:].shape) < 0.5
        c1[:, n1:] = np.where(swap, p2[:, n1:], p1[:, n1:])
        c2[:, n1:] = np.where(swap, p1[:, n1:], p2[:, n1:])
    children = np.concatenate([c1, c2])
    if n1:
        children[:, :n1] = polynomial_mutation(children[:, :n1], lower[:n1], upper[:n1], params.eta_mutation, pm, rng)
    if domain.n2:
        reset = rng.random(children[:, n1:].shape) < pm
        fresh = rng.integers(lower[n1:].astype(np.int64), upper[n1:].astype(np.int64) + 1, size=reset.shape)
        children[:, n1:] = np.where(reset, fresh, children[:, n1:])
    return children


def _rank_and_crowd(fitness: np.ndarray) -> tuple[list[np.ndarray], np.ndarray, np.ndarray]:
    fronts = fast_non_dominated_sort(fitness)
    ranks = np.empty(len(fitness), dtype=np.int64)
    crowding = np.empty(len(fitness))
    for rank, front in enumerate(fronts):
        ranks[front] = rank
        crowding[front] = crowding_distance(fitness[front])
    return fronts, ranks, crowding


def _survivors(fitness: np.ndarray, size: int) -> np.ndarray:
    """Elitist truncation: whole fronts first, the last one by descending crowding distance."""
    chosen: list[np.ndarray] = []
    remaining = size
    for front in fast_non_dominated_sort(fitness):
        if len(front) <= remaining:
            chosen.append(front)
            remaining -= len(front)
        else:
            order = np.argsort(-crowding_distance(fitness[front]), kind="stable")
            chosen.append(front[order[:remaining]])
            remaining = 0
        if remaining == 0:
            break
    return np.concatenate(chosen)


def nsga2(
    problem: NoisyProblem,
    params: NSGA2Params,
    rng: np.random.Generator,
    budget: Optional[int] = None,
    seed: int = 0,
) -> RunTrajectory:
    """Generational NSGA-II with replication-averaged fitness.

    Records one row per generation with the rank-0 set of the population as
    the archive. Stops early when the next generation would exceed `budget`.
    """
    size = params.population
    R = params.replications
    domain = problem.domain
    trajectory = RunTrajectory(optimizer="nsga2", seed=seed)

    def evaluate(X: np.ndarray) -> np.ndarray:
        return replicate(problem, X, np.full(len(X), R, dtype=np.int64), rng) / R

    population = domain.full_box().sample_uniform(rng, size)
    fitness = evaluate(population)
    evals = size * R

    for generation in range(1, params.generations + 1):
        if budget is not None and evals + size * R > budget:
            break
        _, ranks, crowding = _rank_and_crowd(fitness)
        parents = population[binary_tournament(ranks, crowding, size, rng)]
        offspring = _make_offspring(parents, problem, params, rng)
        offspring_fitness = evaluate(offspring)
        evals += len(offspring) * R

        merged = np.concatenate([population, offspring])
        merged_fitness = np.concatenate([fitness, offspring_fitness])
        keep = _survivors(merged_fitness, size)
        population, fitness = merged[keep], merged_fitness[keep]

        archive = ParetoArchive.from_estimates(np.arange(size), fitness)
        trajectory.records.append(
            IterationRecord(k=generation, evals=evals, active_regions=0, pruned_regions=0, archive_size=len(archive))
        )
        trajectory.snapshots.append(ArchiveSnapshot(population[archive.sample_ids].copy(), archive.estimates.copy()))
    logger.info("NSGA-II finished: %d generations, %d evaluations", len(trajectory.records), evals)
    return trajectory

"""Multi-objective probabilistic branch and bound, single-observation and replication variants."""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from mopbnb.core.domain import Box, DomainSpec, RegionStatus, Subregion
from mopbnb.core.exceptions import DomainError, UnbranchableDomainError
from mopbnb.core.models import AlgoParams, Variant
from mopbnb.core.pareto import ParetoArchive
from mopbnb.core.streams import NOISE, SAMPLING, make_rng
from mopbnb.core.trajectory import ArchiveSnapshot, IterationRecord, RegionNode, RunTrajectory
from mopbnb.problems.noise import NoisyProblem
from mopbnb.services.estimation import (
    SampleStore,
    estimate_all,
    radius,
    replicate,
    replication_schedule,
    sample_target,
)

logger = logging.getLogger(__name__)


def branch_dimension(box: Box, min_branch_width: float, domain: DomainSpec) -> Optional[int]:
    """Widest splittable dimension in normalized units (ties to the lowest index), or None."""
    widths = box.normalized_widths(domain)
    eligible = np.zeros(box.n, dtype=bool)
    eligible[: box.n1] = widths[: box.n1] > min_branch_width
    eligible[box.n1 :] = box.integer_counts() >= 2
    if not eligible.any():
        return None
    return int(np.argmax(np.where(eligible, widths, -np.inf)))


def is_branchable(region: Subregion, min_branch_width: float, domain: DomainSpec) -> bool:
    return branch_dimension(region.box, min_branch_width, domain) is not None


def branch(
    region: Subregion, B: int, min_branch_width: float, domain: DomainSpec, first_id: int = 0
) -> list[Subregion]:
    """Split `region` into B children along its widest dimension.

    Integer ranges holding fewer than B values yield one child per value.
    Children get consecutive ids from `first_id`; samples are not attributed.
    """
    dim = branch_dimension(region.box, min_branch_width, domain)
    if dim is None:
        raise ValueError(f"region {region.id} is not branchable")
    return [
        Subregion(id=first_id + i, box=box, parent_id=region.id)
        for i, box in enumerate(region.box.split(dim, B))
    ]


@dataclass
class AlgoState:
    """Mutable state of one run; only the engine functions write to it."""

    problem: NoisyProblem
    params: AlgoParams
    k: int
    alpha_k: float
    regions: list[Subregion]
    store: SampleStore
    sampling_rng: np.random.Generator
    noise_rng: np.random.Generator
    archive: ParetoArchive = field(default_factory=ParetoArchive)
    eval_count: int = 0
    sample_region: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    tree: dict[int, RegionNode] = field(default_factory=dict)
    next_id: int = 0

    @property
    def active(self) -> list[Subregion]:
        return [r for r in self.regions if r.status is RegionStatus.ACTIVE]

    @property
    def pruned(self) -> list[Subregion]:
        return [r for r in self.regions if r.status is RegionStatus.PRUNED]

    @property
    def domain(self) -> DomainSpec:
        return self.problem.domain

    def region(self, region_id: int) -> Subregion:
        for region in self.regions:
            if region.id == region_id:
                return region
        raise KeyError(region_id)

    def _register(self, region: Subregion) -> None:
        self.tree[region.id] = RegionNode(
            id=region.id,
            parent_id=region.parent_id,
            lower=region.box.lower,
            upper=region.box.upper,
            status=region.status.value,
            pruned_at=region.pruned_at,
        )
        self.next_id = max(self.next_id, region.id + 1)

    def _sync(self, region: Subregion) -> None:
        node = self.tree[region.id]
        node.status = region.status.value
        node.pruned_at = region.pruned_at

    def add_samples(self, X: np.ndarray, raw: np.ndarray, k: Optional[int] = None, replications: int = 1) -> np.ndarray:
        """Store evaluated points and attribute each to the leaf region containing it."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        owner = np.full(len(X), -1, dtype=np.int64)
        for region in self.regions:
            owner[(owner < 0) & region.box.contains_array(X)] = region.id
        if np.any(owner < 0):
            raise DomainError("sample lies outside every region")
        ids = self.store.add(X, raw, born_at=self.k if k is None else k, replications=replications)
        self.sample_region = np.concatenate([self.sample_region, owner])
        by_id = {region.id: region for region in self.regions}
        for sample_id, region_id in zip(ids.tolist(), owner.tolist()):
            by_id[region_id].sample_ids.append(sample_id)
        return ids


def initialize(problem: NoisyProblem, params: AlgoParams) -> AlgoState:
    """Split the domain once into B children; empty store and archive, alpha_1 = alpha/B."""
    domain = problem.domain
    s = params.schedules
    root = Subregion(id=0, box=domain.full_box())
    if not is_branchable(root, params.min_branch_width, domain):
        raise UnbranchableDomainError()
    children = branch(root, s.B, params.min_branch_width, domain, first_id=1)
    state = AlgoState(
        problem=problem,
        params=params,
        k=1,
        alpha_k=s.alpha / s.B,
        regions=children,
        store=SampleStore(domain, problem.m),
        sampling_rng=make_rng(params.rng_seed, SAMPLING),
        noise_rng=make_rng(params.rng_seed, NOISE),
    )
    state._register(root)
    state.tree[0].status = "branched"
    for child in children:
        state._register(child)
    return state


def _pooled_counts(state: AlgoState, pruned: list[Subregion], total: int) -> np.ndarray:
    volumes = np.asarray([r.box.volume(state.domain) for r in pruned])
    choices = state.sampling_rng.choice(len(pruned), size=total, p=volumes / volumes.sum())
    return np.bincount(choices, minlength=len(pruned))


def _draw(state: AlgoState, n_k: int) -> tuple[list[Subregion], list[np.ndarray]]:
    """New uniform draws, one array per region that needs samples."""
    params = state.params
    k = state.k
    targets: list[tuple[Subregion, int]] = []
    pruned = state.pruned
    for region in state.regions:
        if region.status is RegionStatus.ACTIVE:
            targets.append((region, max(0, n_k - len(region.sample_ids))))
        elif params.pruned_sampling == "per_region" and not params.permanent_pruning:
            target = sample_target(k, RegionStatus.PRUNED, state.alpha_k, params.schedules)
            targets.append((region, max(0, target - len(region.sample_ids))))
    if pruned and params.pruned_sampling == "pooled" and not params.permanent_pruning:
        counts = _pooled_counts(state, pruned, k * params.schedules.c)
        targets.extend(zip(pruned, counts.tolist()))
    regions, draws = [], []
    for region, count in targets:
        if count > 0:
            regions.append(region)
            draws.append(region.box.sample_uniform(state.sampling_rng, count))
    return regions, draws


def _top_up(state: AlgoState, R_k: int) -> None:
    """Bring every eligible existing point up to R_k replications."""
    store = state.store
    if len(store) == 0:
        return
    deficit = np.maximum(0, R_k - store.replications)
    if state.params.permanent_pruning:
        pruned_ids = [r.id for r in state.pruned]
        deficit[np.isin(state.sample_region, pruned_ids)] = 0
    ids = np.flatnonzero(deficit)
    if len(ids) == 0:
        return
    sums = replicate(state.problem, store.X[ids], deficit[ids], state.noise_rng)
    store.add_replications(ids, sums, deficit[ids])
    state.eval_count += int(deficit[ids].sum())


def _sample(state: AlgoState, n_k: int) -> None:
    params = state.params
    regions, draws = _draw(state, n_k)
    if params.variant is Variant.WR:
        R_k = replication_schedule(state.k, params.wr_R1, params.wr_cap)
        _top_up(state, R_k)
    else:
        R_k = 1
    if not draws:
        return
    X = np.concatenate(draws)
    counts = np.full(len(X), R_k, dtype=np.int64)
    raw = replicate(state.problem, X, counts, state.noise_rng) / R_k
    ids = state.store.add(X, raw, born_at=state.k, replications=R_k)
    owner = np.concatenate([np.full(len(d), r.id, dtype=np.int64) for r, d in zip(regions, draws)])
    state.sample_region = np.concatenate([state.sample_region, owner])
    start = 0
    for region, d in zip(regions, draws):
        region.sample_ids.extend(ids[start : start + len(d)].tolist())
        start += len(d)
    state.eval_count += int(counts.sum())


def _estimate(state: AlgoState, r_k: float) -> None:
    store = state.store
    if state.params.variant is Variant.WR or state.problem.noise_free:
        store.set_estimates(store.raw)
    else:
        estimate_all(store, r_k)


def _update_front(state: AlgoState) -> None:
    store = state.store
    candidates = np.arange(len(store))
    if state.params.permanent_pruning and state.pruned:
        pruned_ids = [r.id for r in state.pruned]
        candidates = candidates[~np.isin(state.sample_region, pruned_ids)]
    state.archive = ParetoArchive.from_estimates(candidates, store.estimates[candidates])


def _reattribute(state: AlgoState, parent: Subregion, children: list[Subregion]) -> None:
    ids = np.asarray(parent.sample_ids, dtype=np.int64)
    points = state.store.X[ids]
    unassigned = np.ones(len(ids), dtype=bool)
    for child in children:
        mask = unassigned & child.box.contains_array(points)
        child.sample_ids = ids[mask].tolist()
        state.sample_region[ids[mask]] = child.id
        unassigned &= ~mask
    parent.sample_ids = []


def _update_regions(state: AlgoState) -> None:
    """Prune regions without archive members, branch (or reclassify and branch) the rest."""
    params = state.params
    has_member = np.zeros(state.next_id, dtype=bool)
    has_member[state.sample_region[state.archive.sample_ids]] = True
    next_regions: list[Subregion] = []
    for region in state.regions:
        if region.status is RegionStatus.PRUNED and params.permanent_pruning:
            next_regions.append(region)
            continue
        if not has_member[region.id]:
            if region.status is RegionStatus.ACTIVE:
                region.status = RegionStatus.PRUNED
                region.pruned_at = state.k
                state._sync(region)
            next_regions.append(region)
            continue
        if region.status is RegionStatus.PRUNED:
            logger.debug("Reclassifying pruned region %d (pruned at %s)", region.id, region.pruned_at)
            region.status = RegionStatus.ACTIVE
            region.pruned_at = None
            state._sync(region)
        if not is_branchable(region, params.min_branch_width, state.domain):
            next_regions.append(region)
            continue
        children = branch(region, params.schedules.B, params.min_branch_width, state.domain, first_id=state.next_id)
        for child in children:
            state._register(child)
        _reattribute(state, region, children)
        state.tree[region.id].status = "branched"
        next_regions.extend(children)
    state.regions = next_regions


def _snapshot(state: AlgoState) -> ArchiveSnapshot:
    ids = state.archive.sample_ids
    return ArchiveSnapshot(points=state.store.X[ids].copy(), estimates=state.archive.estimates.copy())


def iterate(state: AlgoState) -> IterationRecord:
    """Sample, estimate, update the front and the partition, then decay alpha and advance k."""
    params = state.params
    s = params.schedules
    r_k = radius(state.k, state.domain.n, s)
    n_k = sample_target(state.k, RegionStatus.ACTIVE, state.alpha_k, s)

    _sample(state, n_k)
    _estimate(state, r_k)
    _update_front(state)
    _update_regions(state)

    record = IterationRecord(
        k=state.k,
        evals=state.eval_count,
        active_regions=len(state.active),
        pruned_regions=len(state.pruned),
        archive_size=len(state.archive),
        r_k=r_k,
        n_k=n_k,
    )
    logger.debug(
        "k=%d evals=%d active=%d pruned=%d archive=%d r_k=%.5f n_k=%d",
        record.k,
        record.evals,
        record.active_regions,
        record.pruned_regions,
        record.archive_size,
        r_k,
        n_k,
    )
    state.alpha_k /= s.B
    state.k += 1
    return record


def can_branch(state: AlgoState) -> bool:
    return any(is_branchable(r, state.params.min_branch_width, state.domain) for r in state.active)


def run(problem: NoisyProblem, params: AlgoParams, state: Optional[AlgoState] = None) -> RunTrajectory:
    """Iterate until max_iterations or until no active region can be branched."""
    state = state or initialize(problem, params)
    trajectory = RunTrajectory(optimizer=f"mopbnb-{params.variant.value}", seed=params.rng_seed)
    logger.info(
        "Starting %s on %r (seed %d, %d iterations)",
        trajectory.optimizer,
        problem,
        params.rng_seed,
        params.max_iterations,
    )
    while state.k <= params.max_iterations and can_branch(state):
        trajectory.records.append(iterate(state))
        trajectory.snapshots.append(_snapshot(state))
    trajectory.regions = [state.tree[i] for i in sorted(state.tree)]
    logger.info(
        "Finished %s after %d iterations: %d evaluations, %d active regions",
        trajectory.optimizer,
        len(trajectory.records),
        state.eval_count,
        len(state.active),
    )
    return trajectory

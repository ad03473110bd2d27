"""Run results shared by every optimizer."""

from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np


@dataclass
class IterationRecord:
    """One row of a trajectory; metric fields are filled in by the harness."""

    k: int
    evals: int
    active_regions: int
    pruned_regions: int
    archive_size: int
    r_k: Optional[float] = None
    n_k: Optional[int] = None
    m1: Optional[float] = None
    m2: Optional[float] = None
    m3: Optional[float] = None


@dataclass
class ArchiveSnapshot:
    """Archive points (domain coordinates) and their estimated objective vectors."""

    points: np.ndarray
    estimates: np.ndarray

    @classmethod
    def empty(cls, n: int, m: int) -> "ArchiveSnapshot":
        return cls(np.zeros((0, n)), np.zeros((0, m)))

    def __len__(self) -> int:
        return len(self.points)


@dataclass
class RegionNode:
    id: int
    parent_id: Optional[int]
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    status: str
    pruned_at: Optional[int] = None

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class RunTrajectory:
    optimizer: str
    seed: int
    records: list[IterationRecord] = field(default_factory=list)
    snapshots: list[ArchiveSnapshot] = field(default_factory=list)
    regions: list[RegionNode] = field(default_factory=list)

    @property
    def final_archive(self) -> Optional[ArchiveSnapshot]:
        return self.snapshots[-1] if self.snapshots else None

    @property
    def total_evaluations(self) -> int:
        return self.records[-1].evals if self.records else 0

    @property
    def final_regions(self) -> list[RegionNode]:
        """Leaves of the region tree (the final active and pruned boxes)."""
        return [node for node in self.regions if node.status in ("active", "pruned")]

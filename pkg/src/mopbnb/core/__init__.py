"""Core types: domain geometry, Pareto fronts, parameter models and errors."""

from mopbnb.core.domain import (
    Box,
    DomainSpec,
    MixedPoint,
    ObjectiveVector,
    Subregion,
    contains,
    dominates,
    normalized_distance,
)
from mopbnb.core.exceptions import (
    ConfigError,
    DomainError,
    IncompatibleBundlesError,
    MopbnbError,
    PlotUnsupportedError,
    StorageError,
    UnbranchableDomainError,
    UnknownOptimizerError,
    UnknownProblemError,
)
from mopbnb.core.pareto import (
    ParetoArchive,
    brute_force_front,
    crowding_distance,
    fast_non_dominated_sort,
    non_dominated_front,
)

__all__ = [
    "Box",
    "DomainSpec",
    "MixedPoint",
    "ObjectiveVector",
    "Subregion",
    "contains",
    "dominates",
    "normalized_distance",
    "ParetoArchive",
    "brute_force_front",
    "crowding_distance",
    "fast_non_dominated_sort",
    "non_dominated_front",
    "MopbnbError",
    "ConfigError",
    "DomainError",
    "UnknownProblemError",
    "UnknownOptimizerError",
    "UnbranchableDomainError",
    "PlotUnsupportedError",
    "IncompatibleBundlesError",
    "StorageError",
]

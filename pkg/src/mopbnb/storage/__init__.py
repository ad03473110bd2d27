"""Storage layer for results bundles and oracle caches."""

from mopbnb.storage.bundle_store import BundleStore, ResultsBundle, aggregate_trajectories
from mopbnb.storage.oracle_store import OracleStore

__all__ = ["BundleStore", "ResultsBundle", "OracleStore", "aggregate_trajectories"]

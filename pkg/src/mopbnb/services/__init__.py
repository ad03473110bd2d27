"""Services: estimation, the branch-and-bound engine, baselines, metrics and experiments."""

"""MOPBnB - multi-objective probabilistic branch and bound for noisy problems."""

__version__ = "0.1.0"

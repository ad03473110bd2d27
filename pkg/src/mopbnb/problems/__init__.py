"""Benchmark problems: test functions, noise wrapper and registry."""

from mopbnb.problems.functions import ZDT1, ZDT2, ZDT3, FonsecaFleming, TestFunction, ff, zdt1, zdt2, zdt3
from mopbnb.problems.noise import MultiplicativeNoiseProblem, NoisyProblem, with_noise
from mopbnb.problems.registry import PROBLEMS, get_function, make_problem, true_frontier

__all__ = [
    "TestFunction",
    "ZDT1",
    "ZDT2",
    "ZDT3",
    "FonsecaFleming",
    "zdt1",
    "zdt2",
    "zdt3",
    "ff",
    "NoisyProblem",
    "MultiplicativeNoiseProblem",
    "with_noise",
    "PROBLEMS",
    "get_function",
    "make_problem",
    "true_frontier",
]

"""Problem registry keyed by string id."""

from typing import Optional

from mopbnb.core.domain import ObjectiveVector
from mopbnb.core.exceptions import UnknownProblemError
from mopbnb.core.models import NoiseSpec
from mopbnb.problems.functions import ZDT1, ZDT2, ZDT3, FonsecaFleming, TestFunction
from mopbnb.problems.noise import MultiplicativeNoiseProblem, with_noise

PROBLEMS: dict[str, type[TestFunction]] = {
    "zdt1": ZDT1,
    "zdt2": ZDT2,
    "zdt3": ZDT3,
    "ff": FonsecaFleming,
}


def get_function(problem_id: str, n: int) -> TestFunction:
    """Deterministic test function for `problem_id` in `n` variables."""
    try:
        function_cls = PROBLEMS[problem_id.lower()]
    except KeyError:
        raise UnknownProblemError(problem_id) from None
    return function_cls(n)


def make_problem(problem_id: str, n: int, noise: Optional[NoiseSpec] = None) -> MultiplicativeNoiseProblem:
    """Noisy problem as seen by the optimizers (sigma = 0.1 shared by default)."""
    return with_noise(get_function(problem_id, n), noise or NoiseSpec())


def true_frontier(problem_id: str, n: int, resolution: int) -> list[ObjectiveVector]:
    """Grid image of the true efficient frontier."""
    points = get_function(problem_id, n).frontier(resolution)
    return [ObjectiveVector(tuple(row)) for row in points]

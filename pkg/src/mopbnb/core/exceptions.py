"""Custom exceptions for mopbnb."""

from pathlib import Path


class MopbnbError(Exception):
    """Base exception for mopbnb errors."""

    def __init__(self, message: str, exit_code: int = 1):
        self.message = message
        self.exit_code = exit_code
        super().__init__(message)


class ConfigError(MopbnbError):
    """Raised when parameters or an experiment config are invalid."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class UnknownProblemError(ConfigError):
    """Raised when a problem id is not in the registry."""

    def __init__(self, problem_id: str):
        self.problem_id = problem_id
        super().__init__(f"Unknown problem: {problem_id}")


class UnknownOptimizerError(ConfigError):
    """Raised when an optimizer id is not in the registry."""

    def __init__(self, optimizer_id: str):
        self.optimizer_id = optimizer_id
        super().__init__(f"Unknown optimizer: {optimizer_id}")


class UnbranchableDomainError(ConfigError):
    """Raised when the initial partition cannot split the domain."""

    def __init__(self):
        super().__init__("Domain cannot be branched: every dimension is below the minimum branch width")


class DomainError(MopbnbError, ValueError):
    """Raised on dimension mismatches, out-of-domain points and invalid objective vectors."""

    def __init__(self, message: str):
        super().__init__(message, exit_code=2)


class PlotUnsupportedError(MopbnbError):
    """Raised when a plot kind does not apply to a bundle."""

    def __init__(self, kind: str, reason: str):
        self.kind = kind
        super().__init__(f"Cannot draw {kind} plot: {reason}", exit_code=2)


class IncompatibleBundlesError(MopbnbError):
    """Raised when bundles from different problems are compared."""

    def __init__(self, problems: list[str]):
        self.problems = problems
        super().__init__(f"Bundles come from different problems: {', '.join(problems)}", exit_code=2)


class StorageError(MopbnbError):
    """Raised when a file cannot be read or written."""

    def __init__(self, path: Path | str, reason: str):
        self.path = Path(path)
        super().__init__(f"{path}: {reason}", exit_code=3)

"""Configuration settings for mopbnb."""

from pathlib import Path

import yaml
from pydantic import ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from mopbnb.core.exceptions import ConfigError, StorageError
from mopbnb.core.models import ExperimentConfig


def get_default_data_dir() -> Path:
    """Get the default data directory (oracle cache)."""
    data_dir = Path.home() / ".mopbnb"
    data_dir.mkdir(parents=True, exist_ok=True)
    return data_dir


class Settings(BaseSettings):
    """Settings loaded from MOPBNB_* environment variables or a .env file."""

    model_config = SettingsConfigDict(
        env_prefix="MOPBNB_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )

    workers: int = 1
    data_dir: str = ""
    results_dir: str = "results"
    log_level: str = "INFO"

    @property
    def data_path(self) -> Path:
        if self.data_dir:
            path = Path(self.data_dir).expanduser()
            path.mkdir(parents=True, exist_ok=True)
            return path
        return get_default_data_dir()


def get_settings() -> Settings:
    """Get settings from the current environment."""
    return Settings()


def load_experiment_config(path: str | Path) -> ExperimentConfig:
    """Read and validate a YAML experiment config."""
    path = Path(path)
    try:
        with open(path, "r") as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise StorageError(path, e.strerror or str(e)) from e
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: invalid YAML ({e})") from e
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping at the top level")
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}") from e


def dump_experiment_config(cfg: ExperimentConfig) -> str:
    """YAML text for a config, keys in declaration order."""
    return yaml.safe_dump(cfg.model_dump(mode="json"), sort_keys=False)

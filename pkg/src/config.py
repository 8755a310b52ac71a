"""
Runtime configuration for the simulator.

Scenario physics lives in scenario files (see `src.scenario`); this module only
holds process-level settings read from the environment or a JSON file.
"""

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .errors import ConfigError

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class RuntimeConfig:
    """Process-level settings."""
    log_level: str = "INFO"
    json_logs: bool = False
    default_seed: int = 0

    # Paths
    output_dir: Path = field(default_factory=lambda: Path("output"))
    scenario_dir: Path = field(default_factory=lambda: Path("scenarios"))


def _env_flag(name: str, default: str = "false") -> bool:
    return os.getenv(name, default).strip().lower() in ("1", "true", "yes", "on")


class Config:
    """Central configuration manager."""

    def __init__(self, runtime: RuntimeConfig):
        self.runtime = runtime

    @classmethod
    def from_env(cls, env_path: Optional[str] = None) -> "Config":
        """Load configuration from environment variables."""
        if env_path:
            load_dotenv(env_path)
        else:
            load_dotenv()

        try:
            seed = int(os.getenv("TMSIM_DEFAULT_SEED", "0"))
        except ValueError:
            raise ConfigError(["TMSIM_DEFAULT_SEED must be an integer"])

        runtime = RuntimeConfig(
            log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
            json_logs=_env_flag("TMSIM_JSON_LOGS"),
            default_seed=seed,
            output_dir=Path(os.getenv("TMSIM_OUTPUT_DIR", "output")),
            scenario_dir=Path(os.getenv("TMSIM_SCENARIO_DIR", "scenarios")),
        )
        return cls(runtime)

    @classmethod
    def from_json(cls, json_path: str) -> "Config":
        """Load configuration from a JSON file."""
        with open(json_path, "r") as f:
            data = json.load(f)

        runtime = dict(data.get("runtime", {}))
        for key in ("output_dir", "scenario_dir"):
            if key in runtime:
                runtime[key] = Path(runtime[key])
        try:
            return cls(RuntimeConfig(**runtime))
        except TypeError as exc:
            raise ConfigError([f"runtime: {exc}"])

    def validate(self) -> bool:
        """Validate the runtime settings."""
        errors = []

        if self.runtime.log_level not in LOG_LEVELS:
            errors.append(f"LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}")
        if self.runtime.default_seed < 0:
            errors.append("TMSIM_DEFAULT_SEED must be non-negative")
        if self.runtime.output_dir.exists() and not self.runtime.output_dir.is_dir():
            errors.append(f"output directory {self.runtime.output_dir} is not a directory")

        if errors:
            raise ConfigError(errors)

        return True

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "runtime": {
                "log_level": self.runtime.log_level,
                "json_logs": self.runtime.json_logs,
                "default_seed": self.runtime.default_seed,
                "output_dir": str(self.runtime.output_dir),
                "scenario_dir": str(self.runtime.scenario_dir),
            }
        }

"""Configuration management for gcirc."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

from pydantic import ValidationError

from .errors import MalformedInput
from .models import AppConfig

logger = logging.getLogger(__name__)

TOL_ENV_VAR = "GCIRC_TOL"


class ConfigManager:
    """Manages persistent configuration for gcirc."""

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = config_path or Path.home() / ".gcirc" / "config.json"

    def load_config(self) -> AppConfig:
        """Load configuration from file or return defaults."""
        if not self.config_path.exists():
            return AppConfig()

        try:
            with open(self.config_path, "r", encoding="utf-8") as f:
                data: Dict[str, Any] = json.load(f)

            if data.get("golden_file"):
                data["golden_file"] = Path(data["golden_file"]).expanduser()

            return AppConfig(**data)
        except (json.JSONDecodeError, IOError, TypeError, ValidationError) as e:
            logger.warning("Failed to load config from %s: %s", self.config_path, e)
            return AppConfig()

    def save_config(self, config: AppConfig) -> None:
        """Save configuration to file."""
        self.config_path.parent.mkdir(parents=True, exist_ok=True)
        data = config.model_dump(mode="json")

        try:
            with open(self.config_path, "w", encoding="utf-8") as f:
                json.dump(data, f, indent=2, sort_keys=True)
        except (IOError, OSError) as e:
            raise ValueError(f"Failed to save config to {self.config_path}: {e}")

    def get_setting(self, key: str, default: Any = None) -> Any:
        """Get a specific configuration setting."""
        config = self.load_config()
        return getattr(config, key, default)

    def set_setting(self, key: str, value: Any) -> None:
        """Set a specific configuration setting."""
        config = self.load_config()
        if key not in AppConfig.model_fields:
            raise ValueError(f"Unknown configuration key: {key}")

        if key == "golden_file":
            value = Path(value).expanduser() if value else None

        setattr(config, key, value)
        self.save_config(config)


def resolve_tolerance(config: AppConfig, override: Optional[float] = None) -> float:
    """Flag beats environment beats stored configuration."""
    if override is not None:
        return override
    raw = os.environ.get(TOL_ENV_VAR)
    if raw:
        try:
            tol = float(raw)
        except ValueError:
            raise MalformedInput(f"{TOL_ENV_VAR} is not a number: {raw!r}")
        if tol <= 0:
            raise MalformedInput(f"{TOL_ENV_VAR} must be positive, got {tol}")
        return tol
    return config.tol

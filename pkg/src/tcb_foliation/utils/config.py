"""Configuration management for the foliation toolkit."""

import os
from pathlib import Path
from typing import Any, Optional

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from .logging import get_logger

# Load environment variables
load_dotenv()

logger = get_logger(__name__)

DEFAULT_CONFIG_PATH = Path.home() / ".tcb_foliation" / "config.yaml"


class OracleConfig(BaseModel):
    """Search window of the tracing oracle."""

    initial_window: int = Field(default=8, gt=0, description="First translate window")
    window_cap: int = Field(default=2**14, gt=0, description="Largest window before giving up")


class EnumerationConfig(BaseModel):
    """Caps for code-word enumeration."""

    max_depth: int = Field(default=12, gt=0, description="Longest enumerated word length")
    max_words: int = Field(default=250_000, gt=0, description="Most words kept per length")


class EuclidConfig(BaseModel):
    """Termination guards for the arithmetic descents."""

    max_iterations: int = Field(default=10_000, gt=0, description="m-cut Euclid steps")
    stern_brocot_steps: int = Field(
        default=100_000, gt=0, description="Minimal-pair walk steps"
    )


class RenderConfig(BaseModel):
    """SVG canvas settings."""

    width: int = Field(default=640, gt=0, description="Canvas width in px")
    height: int = Field(default=240, gt=0, description="Canvas height in px")
    margin: int = Field(default=24, ge=0, description="Canvas margin in px")
    precision: int = Field(default=2, ge=0, description="Decimal places emitted")
    font_size: int = Field(default=12, gt=0, description="Label font size")


class ToolkitConfig(BaseModel):
    """Main toolkit configuration."""

    seed: int = Field(default=0, description="Seed for randomized commands")
    verbose: bool = Field(default=False, description="Verbose output")
    color_output: bool = Field(default=True, description="Colored terminal output")
    log_level: str = Field(default="WARNING", description="Package log level")

    oracle: OracleConfig = Field(default_factory=OracleConfig)
    enumeration: EnumerationConfig = Field(default_factory=EnumerationConfig)
    euclid: EuclidConfig = Field(default_factory=EuclidConfig)
    render: RenderConfig = Field(default_factory=RenderConfig)


class ConfigManager:
    """Manages configuration loading and saving."""

    def __init__(self, config_path: Optional[Path] = None):
        self.config_path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
        self._config: Optional[ToolkitConfig] = None

    def load_config(self) -> ToolkitConfig:
        """Load configuration from file or create default."""
        if self._config is not None:
            return self._config

        if self.config_path.exists():
            try:
                with open(self.config_path, "r") as f:
                    data = yaml.safe_load(f) or {}
                self._config = ToolkitConfig(**data)
            except (OSError, yaml.YAMLError, ValidationError, TypeError) as e:
                logger.warning("Could not load config from %s: %s", self.config_path, e)
                self._config = ToolkitConfig()
        else:
            self._config = ToolkitConfig()

        self._apply_env_overrides()
        return self._config

    def save_config(self) -> None:
        """Save current configuration to file."""
        if self._config is None:
            return

        self.config_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_path, "w") as f:
            yaml.dump(self._config.model_dump(), f, default_flow_style=False)

    def _apply_env_overrides(self) -> None:
        """Apply environment variable overrides."""
        if not self._config:
            return

        for name, setter in (
            ("TCB_SEED", lambda v: setattr(self._config, "seed", int(v))),
            ("TCB_WINDOW_CAP", lambda v: setattr(self._config.oracle, "window_cap", int(v))),
            ("TCB_MAX_DEPTH", lambda v: setattr(self._config.enumeration, "max_depth", int(v))),
            ("TCB_LOG_LEVEL", lambda v: setattr(self._config, "log_level", v.upper())),
        ):
            value = os.getenv(name)
            if not value:
                continue
            try:
                setter(value)
            except ValueError:
                logger.warning("Ignoring %s=%r: not an integer", name, value)

    @property
    def config(self) -> ToolkitConfig:
        """Get current configuration."""
        if self._config is None:
            self.load_config()
        return self._config

    def update_config(self, **kwargs: Any) -> None:
        """Update top-level configuration values."""
        if self._config is None:
            self.load_config()

        for key, value in kwargs.items():
            if hasattr(self._config, key):
                setattr(self._config, key, value)

        self.save_config()

    def set_value(self, dotted_key: str, value: Any) -> None:
        """Set a nested value such as ``oracle.window_cap`` and save."""
        target: Any = self.config
        *parents, leaf = dotted_key.split(".")
        for part in parents:
            if not isinstance(getattr(target, part, None), BaseModel):
                raise KeyError(dotted_key)
            target = getattr(target, part)
        if leaf not in type(target).model_fields:
            raise KeyError(dotted_key)
        updated = target.model_validate({**target.model_dump(), leaf: value})
        setattr(target, leaf, getattr(updated, leaf))
        self.save_config()

    def reset(self) -> None:
        """Drop the cached configuration so the next access reloads it."""
        self._config = None


# Global config manager instance
config_manager = ConfigManager()

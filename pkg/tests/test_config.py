"""
Tests for configuration management.
"""

from pathlib import Path

import pytest
import yaml
from pydantic import ValidationError

from tcb_foliation.utils.config import ConfigManager, ToolkitConfig


class TestConfigManager:
    """Test configuration manager functionality."""

    def test_default_config(self, temp_dir, clean_environment):
        """Test loading default configuration."""
        manager = ConfigManager(Path(temp_dir) / "config.yaml")
        config = manager.load_config()

        assert isinstance(config, ToolkitConfig)
        assert config.oracle.window_cap == 2**14
        assert config.enumeration.max_depth == 12
        assert config.render.precision == 2

    def test_set_value_persists(self, temp_dir, clean_environment):
        """Test nested values survive a reload."""
        path = Path(temp_dir) / "config.yaml"
        manager = ConfigManager(path)
        manager.set_value("oracle.window_cap", 64)

        assert path.exists()
        saved = yaml.safe_load(path.read_text())
        assert saved["oracle"]["window_cap"] == 64
        assert ConfigManager(path).config.oracle.window_cap == 64

    def test_set_value_coerces(self, temp_dir, clean_environment):
        manager = ConfigManager(Path(temp_dir) / "config.yaml")
        manager.set_value("render.width", "800")
        assert manager.config.render.width == 800

    @pytest.mark.parametrize("key", ["oracle.nope", "seed.inner", "missing"])
    def test_unknown_key(self, temp_dir, key):
        manager = ConfigManager(Path(temp_dir) / "config.yaml")
        with pytest.raises(KeyError):
            manager.set_value(key, 1)

    def test_invalid_value(self, temp_dir):
        manager = ConfigManager(Path(temp_dir) / "config.yaml")
        with pytest.raises(ValidationError):
            manager.set_value("oracle.window_cap", 0)

    def test_env_overrides(self, temp_dir, clean_environment, monkeypatch):
        """Test environment variable overrides."""
        monkeypatch.setenv("TCB_WINDOW_CAP", "99")
        monkeypatch.setenv("TCB_MAX_DEPTH", "5")
        monkeypatch.setenv("TCB_LOG_LEVEL", "debug")
        config = ConfigManager(Path(temp_dir) / "config.yaml").load_config()

        assert config.oracle.window_cap == 99
        assert config.enumeration.max_depth == 5
        assert config.log_level == "DEBUG"

    def test_bad_env_value_ignored(self, temp_dir, clean_environment, monkeypatch):
        monkeypatch.setenv("TCB_SEED", "abc")
        config = ConfigManager(Path(temp_dir) / "config.yaml").load_config()
        assert config.seed == 0

    def test_invalid_yaml_falls_back(self, temp_dir, clean_environment):
        path = Path(temp_dir) / "config.yaml"
        path.write_text("oracle: [unclosed\n")
        config = ConfigManager(path).load_config()
        assert config == ToolkitConfig()

    def test_reset_reloads(self, temp_dir, clean_environment):
        path = Path(temp_dir) / "config.yaml"
        manager = ConfigManager(path)
        manager.set_value("seed", 7)
        path.write_text(yaml.dump({"seed": 11}))
        assert manager.config.seed == 7
        manager.reset()
        assert manager.config.seed == 11

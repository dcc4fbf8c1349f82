"""
Configuration loading (YAML) and logging setup.
"""

import copy
import logging
from pathlib import Path

import yaml

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_CONFIG_PATH = ROOT / "config.ci.yaml"

DEFAULTS = {
    "paths": {
        "output_dir": "output",
    },
    "verification": {
        "direct_count_threshold": 256,
        "materialize_limit": 128,
        "row_chunk_bytes": 8 * 1024 * 1024,
    },
    "grid": {
        "five_class": [[2, 2], [2, 3], [4, 7]],
        "cover": [[2, 3]],
    },
    "logging": {
        "level": "INFO",
    },
}

_active = None


def _merge(base, override):
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path=None):
    """Load configuration from a YAML file, merged over the built-in defaults."""
    path = Path(config_path) if config_path else DEFAULT_CONFIG_PATH
    if not path.exists():
        if config_path:
            raise FileNotFoundError(f"Config file not found: {path}")
        return copy.deepcopy(DEFAULTS)
    with open(path, "r", encoding="utf-8") as f:
        return _merge(DEFAULTS, yaml.safe_load(f))


def use_config(config_path=None):
    """Make the given file the process-wide configuration and return it."""
    global _active
    _active = load_config(config_path)
    return _active


def settings():
    global _active
    if _active is None:
        _active = load_config()
    return _active


def setting(section, key):
    return settings()[section][key]


def setup_logging(level=None):
    level = level or setting("logging", "level")
    logging.basicConfig(
        level=getattr(logging, str(level).upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )

import os
import logging
from fractions import Fraction
from typing import Any, Dict, Optional

# optional .env
try:
    from dotenv import load_dotenv
    load_dotenv()
except Exception:
    pass

try:
    import yaml
except Exception:
    yaml = None

logger = logging.getLogger("chaincalc.config")

DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Built-in defaults, overridden key by key from config.yaml
DEFAULTS: Dict[str, Any] = {
    "logging": {"level": "INFO", "format": DEFAULT_LOG_FORMAT},
    "evaluation": {"inflation_offset": 4},
    "koch": {"buffer": "1/8", "max_shrinks": 6},
    "osgood": {"max_depth": 8},
    "construction": {
        "stages": 12,
        "emax": 8,
        "comb_depth": 10,
        "budget": 20000,
        "net_offset": 3,          # compact nets at resolution t + net_offset
        "max_scale_gap": 16,      # scan scales t+1 .. t+max_scale_gap
    },
    "witness": {"max_scale_gap": 12},
    "svg": {"size": 512, "margin": 16},
}


# config helpers
def _safe_load_yaml(path: str) -> Dict[str, Any]:
    if not yaml:
        return {}
    try:
        if os.path.exists(path):
            with open(path, "r", encoding="utf-8") as f:
                return yaml.safe_load(f) or {}
    except Exception as e:
        logger.warning(f"Config load failed: {e}")
    return {}


def _cfg_get(cfg: Dict[str, Any], *keys, default=None):
    cur = cfg
    for k in keys:
        if not isinstance(cur, dict) or k not in cur:
            return default
        cur = cur[k]
    return cur


def config_path() -> str:
    return os.getenv("CHAINCALC_CONFIG", "config.yaml")


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """
    Load config.yaml merged over the built-in defaults.

    Args:
        path: Explicit path; falls back to $CHAINCALC_CONFIG then config.yaml

    Returns:
        Nested dictionary with every default section present
    """
    raw = _safe_load_yaml(path or config_path())
    merged: Dict[str, Any] = {}
    for section, values in DEFAULTS.items():
        block = dict(values)
        override = raw.get(section) if isinstance(raw, dict) else None
        if isinstance(override, dict):
            block.update(override)
        merged[section] = block
    return merged


def setting(cfg: Dict[str, Any], *keys, default=None):
    """Read a setting, preferring cfg and falling back to DEFAULTS."""
    value = _cfg_get(cfg, *keys, default=None)
    if value is None:
        value = _cfg_get(DEFAULTS, *keys, default=default)
    return value


def rational_setting(cfg: Dict[str, Any], *keys, default="0") -> Fraction:
    return Fraction(str(setting(cfg, *keys, default=default)))


def setup_logging(cfg: Optional[Dict[str, Any]] = None, level: Optional[str] = None) -> None:
    """Configure the root logger once from the logging block."""
    cfg = cfg if cfg is not None else load_config()
    log_level = (level or _cfg_get(cfg, "logging", "level", default="INFO") or "INFO").upper()
    log_fmt = _cfg_get(cfg, "logging", "format", default=DEFAULT_LOG_FORMAT)
    logging.basicConfig(level=getattr(logging, log_level, logging.INFO), format=log_fmt)
    logging.getLogger().setLevel(getattr(logging, log_level, logging.INFO))

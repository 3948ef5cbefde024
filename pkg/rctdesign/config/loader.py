import json
import os
from pathlib import Path
from typing import Dict, Optional

from pydantic import ValidationError

from rctdesign.config.settings import DesignConfig, SyntheticSpec
from rctdesign.errors import DatasetError
from rctdesign.utils.logger import get_logger

logger = get_logger("config")

# Cache for loaded configs, keyed by resolved path
_config_cache: Dict[str, DesignConfig] = {}


def _read_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        raise DatasetError(f"file not found: {path}")
    except json.JSONDecodeError as e:
        raise DatasetError(f"invalid JSON in {path}: {e.msg}", line=e.lineno)
    if not isinstance(data, dict):
        raise DatasetError(f"{path} must contain a JSON object")
    return data


def load_design_config(path: Optional[str] = None) -> DesignConfig:
    """Load a design config JSON file.

    Args:
        path: Path to the config file; None gives the defaults

    Returns:
        Validated DesignConfig
    """
    if path is None:
        return DesignConfig(threads=int(os.getenv("RCTDESIGN_THREADS", "1")))

    key = str(Path(path).resolve())
    if key in _config_cache:
        return _config_cache[key]

    data = _read_json(path)
    data.setdefault("threads", int(os.getenv("RCTDESIGN_THREADS", "1")))
    try:
        config = DesignConfig.model_validate(data)
    except ValidationError as e:
        raise DatasetError(f"invalid config {path}: {e}")

    _config_cache[key] = config
    logger.info(f"Loaded config from {path}")
    return config


def apply_overrides(
    config: DesignConfig,
    seed: Optional[int] = None,
    gamma: Optional[float] = None,
    threads: Optional[int] = None,
) -> DesignConfig:
    """Return a copy of `config` with command-line overrides applied."""
    updates = {}
    if seed is not None:
        updates["seed"] = seed
    if gamma is not None:
        updates["gamma"] = gamma
    if threads is not None:
        updates["threads"] = threads
    if not updates:
        return config
    try:
        # re-validate so overrides obey the same bounds as file values
        return DesignConfig.model_validate({**config.model_dump(), **updates})
    except ValidationError as e:
        raise DatasetError(f"invalid override: {e}")


def load_synthetic_spec(path: str) -> SyntheticSpec:
    """Load a synthetic population spec JSON file."""
    data = _read_json(path)
    try:
        spec = SyntheticSpec.model_validate(data)
    except ValidationError as e:
        raise DatasetError(f"invalid synthetic spec {path}: {e}")
    logger.info(f"Loaded synthetic spec with {spec.K} strata from {path}")
    return spec

"""
Configuration utilities for the LMG sweep toolkit
"""
import hashlib
import json
import os
from typing import Any, Dict, Optional

import numpy as np
from pydantic import ValidationError

from ..models.lmg_models import SweepConfig
from .errors import ConfigError

WORKERS_ENV = "LIPKIN_WORKERS"

# CLI spelling of the simulation modes
MODE_ALIASES = {
    "exact": "exact",
    "ideal": "sim_ideal",
    "noisy": "sim_noisy",
    "sim_ideal": "sim_ideal",
    "sim_noisy": "sim_noisy",
}


def _validation_message(exc: ValidationError) -> ConfigError:
    first = exc.errors()[0]
    field = ".".join(str(part) for part in first.get("loc", ())) or None
    return ConfigError(first.get("msg", str(exc)), field=field)


def load_config(path: Optional[str] = None, overrides: Optional[Dict[str, Any]] = None) -> SweepConfig:
    """
    Resolve a SweepConfig: defaults < JSON file < CLI overrides
    """
    data: Dict[str, Any] = {}
    if path:
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"{path} must contain a JSON object")

    data = apply_overrides(data, overrides or {})
    try:
        return SweepConfig.model_validate(data)
    except ValidationError as e:
        raise _validation_message(e)


def apply_overrides(data: Dict[str, Any], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """
    Fold CLI flags into a raw config dict; None means "flag not given"
    """
    merged = json.loads(json.dumps(data))
    if overrides.get("out") is not None:
        merged.setdefault("output", {})["directory"] = overrides["out"]
    if overrides.get("seed") is not None:
        merged["root_seed"] = overrides["seed"]
    if overrides.get("shots") is not None:
        merged["shots"] = overrides["shots"]
    if overrides.get("n_particles") is not None:
        merged.setdefault("model", {})["n_particles"] = overrides["n_particles"]
    for key in ("eps", "angle_tol", "min_lines"):
        if overrides.get(key) is not None:
            merged.setdefault("hull", {})[key] = overrides[key]
    mode = overrides.get("mode")
    if mode is not None:
        if mode not in MODE_ALIASES:
            raise ConfigError(f"unknown mode '{mode}'", field="mode")
        merged["mode"] = MODE_ALIASES[mode]
    return merged


def config_hash(config: SweepConfig) -> str:
    """
    SHA-256 over the canonical JSON dump of every resolved field
    """
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def get_worker_count() -> int:
    """
    Get worker-pool size from the environment
    """
    default = min(4, os.cpu_count() or 1)
    raw = os.environ.get(WORKERS_ENV)
    if not raw:
        return default
    try:
        workers = int(raw)
    except ValueError:
        raise ConfigError(f"{WORKERS_ENV} must be an integer, got '{raw}'")
    if workers < 1:
        raise ConfigError(f"{WORKERS_ENV} must be >= 1")
    return workers


def point_seed_sequence(root_seed: int, point_index: int, *keys: int) -> np.random.SeedSequence:
    """
    Counter-based split of the root seed, keyed on (point, repetition, group)
    """
    return np.random.SeedSequence(entropy=root_seed, spawn_key=(point_index,) + tuple(keys))


def derive_seed(root_seed: int, point_index: int, *keys: int) -> int:
    """
    A 63-bit integer seed for one (point, repetition, group) cell
    """
    state = point_seed_sequence(root_seed, point_index, *keys).generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 32 | int(state[1])) & (2 ** 63 - 1))

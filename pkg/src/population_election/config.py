"""Protocol parameters, configuration loading, env-var substitution, and validation.

``Params`` is the single source of truth for every constant the transition
function reads. Configuration files (JSON or YAML) mirror the CLI flags.
"""
import json
import math
import os
from dataclasses import dataclass, fields
from enum import Enum
from functools import cached_property
from typing import Any, Dict, List, Mapping, Optional, Set

import yaml

from .exceptions import ConfigurationError

# Reset propagation cap multiplier; fixed by the protocol rather than tunable.
RESET_CONSTANT = 60


def time_unit(n: int, r: int) -> float:
    """(n^2 / r) * ln n, the interaction scale every time bound is quoted in."""
    return n * n / r * math.log(n)


@dataclass(frozen=True)
class Calibration:
    """Acceptance multipliers of ``time_unit(n, r)``, fitted at n=8 and frozen.

    ``stabilize`` bounds stabilization from a clean trigger (adversarial starts
    get three times as much), ``detect`` bounds the first Top after a planted
    duplicate rank, ``rank_accept`` bounds ranking from a fully dormant
    population and ``confirm_window`` is the stable suffix a trial must show.
    docs/parameters.md records how each value was set.
    """

    stabilize: float = 200.0
    detect: float = 100.0
    rank_accept: float = 100.0
    confirm_window: float = 20.0
    recovery_factor: float = 3.0

    def interactions(self, factor: float, n: int, r: int) -> int:
        return max(1, math.ceil(factor * time_unit(n, r)))


CALIBRATED = Calibration()


class RngMode(str, Enum):
    TRUE_RANDOM = "true-random"
    SYNTHETIC_COINS = "synthetic-coins"

    @classmethod
    def parse(cls, value: Any) -> "RngMode":
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("_", "-")
        aliases = {"truerandom": "true-random", "syntheticcoins": "synthetic-coins"}
        text = aliases.get(text, text)
        for mode in cls:
            if mode.value == text:
                return mode
        raise ConfigurationError(
            f"Unknown rng mode '{value}' (expected one of: "
            + ", ".join(m.value for m in cls)
            + ")"
        )


@dataclass(frozen=True)
class Params:
    """Population size, trade-off parameter and all protocol constants.

    Caps are derived lazily from the constants with natural logarithms rounded
    up. The three collision-detection sizes default to per-group formulas and
    can be overridden for model-checking-scale runs.
    """

    n: int
    r: int
    c_countdown: float = 40.0
    c_prob: float = 40.0
    c_delay: float = 64.0
    c_sig: float = 8.0
    c_sleep: float = 20.0
    c_le: float = 15.0
    c_pool: float = 2.0
    sig_space: Optional[int] = None
    ids_per_rank: Optional[int] = None
    sig_refresh: Optional[int] = None
    rng_mode: RngMode = RngMode.TRUE_RANDOM

    @classmethod
    def create(cls, **kwargs: Any) -> "Params":
        """Build and validate; raises ConfigurationError listing every problem."""
        if "rng_mode" in kwargs and kwargs["rng_mode"] is not None:
            kwargs["rng_mode"] = RngMode.parse(kwargs["rng_mode"])
        kwargs = {k: v for k, v in kwargs.items() if v is not None}
        try:
            params = cls(**kwargs)
        except TypeError as e:
            raise ConfigurationError(f"Invalid parameters: {e}")
        errors = validate_params(params)
        if errors:
            raise ConfigurationError("Parameter validation failed: " + "; ".join(errors))
        return params

    # ------------------------------------------------------------------
    # Population-wide caps
    # ------------------------------------------------------------------

    @cached_property
    def ln_n(self) -> float:
        return math.log(self.n)

    @cached_property
    def c_max(self) -> int:
        return _cap(self.c_countdown * (self.n / self.r) * self.ln_n)

    @cached_property
    def p_max(self) -> int:
        return _cap(self.c_prob * (self.n / self.r) * self.ln_n)

    @cached_property
    def r_max(self) -> int:
        return _cap(RESET_CONSTANT * self.ln_n)

    @cached_property
    def d_max(self) -> int:
        return _cap(self.c_delay * self.ln_n)

    @cached_property
    def sleep_max(self) -> int:
        return _cap(self.c_sleep * self.ln_n)

    @cached_property
    def le_count(self) -> int:
        return _cap(self.c_le * self.ln_n)

    @cached_property
    def label_pool(self) -> int:
        return _cap(self.c_pool * self.n / self.r)

    @cached_property
    def id_space(self) -> int:
        return self.n ** 3

    # ------------------------------------------------------------------
    # Per-group collision-detection sizes
    # ------------------------------------------------------------------

    def sig_space_for(self, group_size: int) -> int:
        if self.sig_space is not None:
            return self.sig_space
        return max(2, group_size ** 5)

    def ids_per_rank_for(self, group_size: int) -> int:
        if self.ids_per_rank is not None:
            return self.ids_per_rank
        return 2 * group_size * group_size

    def sig_refresh_for(self, group_size: int) -> int:
        if self.sig_refresh is not None:
            return self.sig_refresh
        return _cap(self.c_sig * math.log(group_size)) if group_size > 1 else 1

    @cached_property
    def coin_width(self) -> int:
        """Bits harvested per synthetic draw: ceil(log2) of the largest range drawn."""
        largest = max(self.id_space, self.sig_space_for(self.r), self.sig_space_for(1))
        return max(1, (largest - 1).bit_length())

    def to_dict(self) -> Dict[str, Any]:
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data["rng_mode"] = self.rng_mode.value
        return data


def _cap(value: float) -> int:
    return max(1, math.ceil(value))


PARAM_KEYS: Set[str] = {f.name for f in fields(Params)} - {"n", "r", "rng_mode"}

# Keys accepted in configuration files; they mirror the CLI flags.
CONFIG_KEYS: Dict[str, str] = {
    "n": "int-list",
    "r": "rlist",
    "scenario": "str",
    "trials": "int",
    "seed": "int",
    "horizon": "int",
    "confirm_window": "int",
    "rng_mode": "str",
    "out": "str",
    "trace": "str",
    "save_final": "str",
    "workers": "int",
    "early_stop": "bool",
    "monitors": "str-list",
    "params": "section",
    "logging": "section",
}


def validate_params(params: Params) -> List[str]:
    """Validate parameters. Returns list of error strings (empty = valid)."""
    errors = []
    if not isinstance(params.n, int) or params.n < 2:
        errors.append(f"Population size n must be an integer >= 2 (got {params.n!r})")
        return errors
    if not isinstance(params.r, int) or not 1 <= params.r <= params.n // 2:
        errors.append(f"Trade-off parameter r must satisfy 1 <= r <= n/2 (got r={params.r!r}, n={params.n})")
        return errors
    for name in ("c_countdown", "c_prob", "c_delay", "c_sig", "c_sleep", "c_le"):
        if getattr(params, name) <= 0:
            errors.append(f"Constant {name} must be positive")
    if params.c_pool <= 1:
        errors.append("Constant c_pool must exceed 1")
    elif params.r * params.label_pool <= params.n:
        errors.append("Total label pool r*label_pool must exceed n")
    if params.sig_space is not None and params.sig_space < 2:
        errors.append("sig_space override must be >= 2")
    if params.ids_per_rank is not None and params.ids_per_rank < 1:
        errors.append("ids_per_rank override must be >= 1")
    if params.sig_refresh is not None and params.sig_refresh < 1:
        errors.append("sig_refresh override must be >= 1")
    return errors


def params_from_mapping(mapping: Mapping[str, Any]) -> Params:
    """Build Params from a plain mapping holding n, r, rng_mode and constants."""
    unknown = set(mapping) - PARAM_KEYS - {"n", "r", "rng_mode"}
    if unknown:
        raise ConfigurationError("Unknown parameter keys: " + ", ".join(sorted(unknown)))
    return Params.create(**dict(mapping))


def substitute_env_vars(obj: Any) -> Any:
    """Recursively substitute ${ENV_VAR} placeholders in config data."""
    if isinstance(obj, dict):
        return {k: substitute_env_vars(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [substitute_env_vars(item) for item in obj]
    if isinstance(obj, str) and obj.startswith("${") and obj.endswith("}"):
        env_var = obj[2:-1]
        value = os.getenv(env_var)
        if value is None:
            return f"[PLACEHOLDER_{env_var}]"
        return value
    return obj


def detect_unresolved_placeholders(obj: Any) -> Set[str]:
    """Return set of unresolved [PLACEHOLDER_X] markers still in config."""
    unresolved: Set[str] = set()
    if isinstance(obj, dict):
        for v in obj.values():
            unresolved.update(detect_unresolved_placeholders(v))
    elif isinstance(obj, list):
        for v in obj:
            unresolved.update(detect_unresolved_placeholders(v))
    elif isinstance(obj, str) and obj.startswith("[PLACEHOLDER_") and obj.endswith("]"):
        unresolved.add(obj[len("[PLACEHOLDER_"):-1])
    return unresolved


def _as_int(value: Any) -> Optional[int]:
    if isinstance(value, bool):
        return None
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().lstrip("-").isdigit():
        return int(value.strip())
    return None


def coerce_config(config: Dict[str, Any]) -> Dict[str, Any]:
    """Convert string values produced by env substitution into their declared types."""
    result = dict(config)
    for key, kind in CONFIG_KEYS.items():
        if key not in result or result[key] is None:
            continue
        value = result[key]
        if kind == "int" and _as_int(value) is not None:
            result[key] = _as_int(value)
        elif kind == "bool" and isinstance(value, str):
            result[key] = value.strip().lower() in ("1", "true", "yes", "on")
        elif kind == "int-list":
            items = value if isinstance(value, list) else [value]
            converted = [_as_int(v) for v in items]
            if all(c is not None for c in converted):
                result[key] = converted if isinstance(value, list) else converted[0]
        elif kind == "str-list" and isinstance(value, str):
            result[key] = [v.strip() for v in value.split(",") if v.strip()]
    return result


def validate_config(config: Dict[str, Any]) -> List[str]:
    """Validate experiment configuration. Returns list of error strings (empty = valid)."""
    errors = []
    for key in sorted(set(config) - set(CONFIG_KEYS)):
        errors.append(f"Unknown configuration key '{key}'")
    for key, kind in CONFIG_KEYS.items():
        if key not in config or config[key] is None:
            continue
        value = config[key]
        if kind == "int" and _as_int(value) is None:
            errors.append(f"'{key}' must be an integer")
        elif kind == "int" and key in ("trials", "seed", "workers") and _as_int(value) < 0:
            errors.append(f"'{key}' must be non-negative")
        elif kind == "int" and key in ("horizon", "confirm_window") and _as_int(value) < 1:
            errors.append(f"'{key}' must be >= 1")
        elif kind == "section" and not isinstance(value, dict):
            errors.append(f"'{key}' must be a mapping")
        elif kind == "bool" and not isinstance(value, bool):
            errors.append(f"'{key}' must be a boolean")
    unknown_params = set(config.get("params") or {}) - PARAM_KEYS
    if isinstance(config.get("params"), dict) and unknown_params:
        errors.append("Unknown params keys: " + ", ".join(sorted(unknown_params)))
    if config.get("rng_mode") is not None:
        try:
            RngMode.parse(config["rng_mode"])
        except ConfigurationError as e:
            errors.append(str(e))
    return errors


def load_config(config_file: str) -> Dict[str, Any]:
    """Load config from JSON or YAML with env-var substitution.

    Raises FileNotFoundError if config_file missing.
    Raises ConfigurationError on parse errors, unresolved placeholders or
    invalid keys/values.
    """
    try:
        with open(config_file, "r", encoding="utf-8") as f:
            if config_file.endswith(".json"):
                config = json.load(f)
            else:
                config = yaml.safe_load(f)
    except FileNotFoundError:
        raise FileNotFoundError(f"Configuration file '{config_file}' not found")
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError(f"Invalid configuration file format: {e}")

    if config is None:
        config = {}
    if not isinstance(config, dict):
        raise ConfigurationError("Invalid configuration file format: top level must be a mapping")

    config = substitute_env_vars(config)

    unresolved = detect_unresolved_placeholders(config)
    if unresolved:
        raise ConfigurationError(
            "Unresolved configuration placeholders: " + ", ".join(sorted(unresolved))
        )

    config = coerce_config(config)
    errors = validate_config(config)
    if errors:
        raise ConfigurationError("Configuration validation failed: " + "; ".join(errors))

    return config


def merge_cli_overrides(file_config: Dict[str, Any], cli_values: Mapping[str, Any]) -> Dict[str, Any]:
    """Flags override file values; flags left unset (None) keep the file's value."""
    merged = dict(file_config)
    for key, value in cli_values.items():
        if value is not None:
            merged[key] = value
    return merged

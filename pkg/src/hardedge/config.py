"""Run configuration: TOML file, command-line overrides, canonical hash."""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib

from .errors import ConfigError
from .potential import DropletFamily, RadialPotential, custom, ginibre, power
from .quadrature import QuadratureSpec

_DEFAULTS = {
    "n": 256,
    "seed": 1,
    "threads": 1,
    "out": "runs",
    "potential": {"name": "ginibre"},
    "grid": {"lo": -6.0, "hi": 4.0, "step": 0.05},
    "quadrature": {
        "abs_tol": 1e-11,
        "rel_tol": 1e-10,
        "max_panels": 16384,
        "truncation_cut": 1e-12,
    },
}


@dataclass(frozen=True)
class RunConfig:
    potential: dict
    n: object
    grid: dict
    quadrature: QuadratureSpec
    out: str
    seed: int
    threads: int
    options: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "potential": self.potential,
            "n": self.n,
            "grid": self.grid,
            "quadrature": {
                "abs_tol": self.quadrature.abs_tol,
                "rel_tol": self.quadrature.rel_tol,
                "max_panels": self.quadrature.max_panels,
                "truncation_cut": self.quadrature.truncation_cut,
            },
            "out": self.out,
            "seed": self.seed,
            "threads": self.threads,
            "options": self.options,
        }


def load_config_file(path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid TOML: {exc}") from exc


def _merged(base: dict, over: dict) -> dict:
    out = dict(base)
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merged(out[key], val)
        else:
            out[key] = val
    return out


_CORE_KEYS = {"n", "seed", "threads", "out", "potential", "grid", "quadrature"}


def resolve_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Layer defaults, file values and command-line overrides, in that order."""
    data = _merged(_DEFAULTS, file_values or {})
    data = _merged(data, {k: v for k, v in (overrides or {}).items() if v is not None})
    try:
        quad = QuadratureSpec(
            abs_tol=float(data["quadrature"]["abs_tol"]),
            rel_tol=float(data["quadrature"]["rel_tol"]),
            max_panels=int(data["quadrature"]["max_panels"]),
            truncation_cut=float(data["quadrature"]["truncation_cut"]),
        )
        cfg = RunConfig(
            potential=dict(data["potential"]),
            n=data["n"],
            grid={k: float(v) for k, v in data["grid"].items()},
            quadrature=quad,
            out=str(data["out"]),
            seed=int(data["seed"]),
            threads=int(data["threads"]),
            options={k: v for k, v in data.items() if k not in _CORE_KEYS},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad configuration value: {exc}") from exc
    if cfg.threads < 1:
        raise ConfigError("threads must be >= 1")
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("seed must fit in an unsigned 64-bit integer")
    return cfg


def config_hash(cfg: RunConfig) -> str:
    """Short stable digest of the fully resolved configuration."""
    blob = json.dumps(cfg.as_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def make_potential(spec: dict) -> RadialPotential:
    try:
        name = str(spec["name"])
    except (KeyError, TypeError) as exc:
        raise ConfigError("potential.name is required") from exc
    if name == "ginibre":
        return ginibre()
    m = re.fullmatch(r"power(\d+)?", name)
    if m:
        p = int(m.group(1)) if m.group(1) else spec.get("p")
        if p is None:
            raise ConfigError("potential 'power' needs an exponent p")
        try:
            return power(int(p))
        except Exception as exc:
            raise ConfigError(str(exc)) from exc
    if name == "custom":
        coeffs = spec.get("coeffs")
        if coeffs is None:
            raise ConfigError("potential 'custom' needs a coeffs list")
        try:
            return custom([float(c) for c in coeffs], spec.get("r_max"))
        except ConfigError:
            raise
        except Exception as exc:
            raise ConfigError(str(exc)) from exc
    raise ConfigError(f"unknown potential name {name!r}")


def make_family(cfg: RunConfig) -> DropletFamily:
    try:
        return DropletFamily(make_potential(cfg.potential))
    except ConfigError:
        raise
    except Exception as exc:
        raise ConfigError(f"potential rejected: {exc}") from exc


def build_grid(grid: dict) -> np.ndarray:
    try:
        lo, hi, step = float(grid["lo"]), float(grid["hi"]), float(grid["step"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"grid needs numeric lo, hi, step: {exc}") from exc
    if step <= 0.0 or hi <= lo:
        raise ConfigError("grid needs step > 0 and hi > lo")
    return np.arange(lo, hi + 0.5 * step, step)

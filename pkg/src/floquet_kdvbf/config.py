"""Run configuration: flat ``key = value`` files plus command-line overrides."""

from __future__ import annotations

import configparser
import math
import os
from dataclasses import dataclass, field, fields
from pathlib import Path

from .errors import ConfigError

DEFAULT_EPS_GRID = (0.001, 0.002, 0.004, 0.008, 0.016)

# acceptance tolerances, overridable as ``tol_<name> = value``
DEFAULT_TOLERANCES = {
    "hopf_location": 1e-8,
    "slope": 1e-5,
    "amplitude_exponent": 0.05,
    "period_constant": 5.0,
    "shooting": 1e-6,
    "symbol": 1e-10,
    "unperturbed": 1e-12,
    "distance_factor": 3.0,
    "monotone": 1e-10,
    "truncation": 1e-8,
}


@dataclass
class RunConfig:
    r: float = 1.0
    alpha: float = 1.0
    eps_grid: tuple[float, ...] = DEFAULT_EPS_GRID
    n_theta: int = 64
    fourier_M: int = 32
    bloch_N: int = 24
    tol: float = 1e-10
    out_dir: Path = Path(".")
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def validate(self, need_eps: bool = True, check_out: bool = True) -> "RunConfig":
        for name in ("r", "alpha"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive")
        if need_eps and not self.eps_grid:
            raise ConfigError("eps grid is empty")
        if any(not (0 < e <= 0.1) for e in self.eps_grid):
            raise ConfigError("eps values must lie in (0, 0.1]")
        if any(b <= a for a, b in zip(self.eps_grid, self.eps_grid[1:])):
            raise ConfigError("eps grid must be strictly ascending")
        if self.n_theta < 3:
            raise ConfigError("n_theta must be at least 3")
        if self.fourier_M < 8:
            raise ConfigError("fourier_M must be at least 8")
        if self.bloch_N < 4:
            raise ConfigError("bloch_N must be at least 4")
        if not self.tol > 0 or any(not v > 0 for v in self.tolerances.values()):
            raise ConfigError("tolerances must be positive")
        if check_out:
            out = Path(self.out_dir)
            try:
                out.mkdir(parents=True, exist_ok=True)
            except OSError as exc:
                raise ConfigError(f"cannot create output directory {out}: {exc}") from exc
            if not os.access(out, os.W_OK):
                raise ConfigError(f"output directory {out} is not writable")
        return self

    def header(self, **extra) -> str:
        """One-line description used as the first line of every output file."""
        from . import __version__

        parts = [f"floquet_kdvbf {__version__}", f"r={self.r!r}", f"alpha={self.alpha!r}"]
        parts += [f"{k}={v!r}" for k, v in extra.items()]
        parts += [f"fourier_M={self.fourier_M}", f"bloch_N={self.bloch_N}", f"n_theta={self.n_theta}"]
        return " ".join(parts)


_ALIASES = {
    "r": "r",
    "alpha": "alpha",
    "eps": "eps_grid",
    "eps_grid": "eps_grid",
    "n_theta": "n_theta",
    "n-theta": "n_theta",
    "fourier_m": "fourier_M",
    "fourier-m": "fourier_M",
    "bloch_n": "bloch_N",
    "bloch-n": "bloch_N",
    "tol": "tol",
    "out": "out_dir",
    "out_dir": "out_dir",
}


def _parse_eps(text) -> tuple[float, ...]:
    if isinstance(text, (list, tuple)):
        return tuple(float(v) for v in text)
    items = [s for s in str(text).replace(";", ",").replace(" ", ",").split(",") if s]
    return tuple(float(s) for s in items)


def _coerce(name: str, value):
    kinds = {f.name: f.type for f in fields(RunConfig)}
    try:
        if name == "eps_grid":
            return _parse_eps(value)
        if name == "out_dir":
            return Path(value)
        if kinds[name] == "int":
            return int(value)
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value for {name}: {value!r}") from exc


def apply_settings(cfg: RunConfig, settings: dict) -> RunConfig:
    """Apply ``key -> value`` pairs (file keys or flag names) to ``cfg``."""
    for key, value in settings.items():
        if value is None:
            continue
        k = key.strip().lower()
        if k.startswith("tol_"):
            name = k[4:]
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance {key!r}")
            try:
                cfg.tolerances[name] = float(value)
            except ValueError as exc:
                raise ConfigError(f"bad value for {key}: {value!r}") from exc
            continue
        if k not in _ALIASES:
            raise ConfigError(f"unknown configuration key {key!r}")
        name = _ALIASES[k]
        setattr(cfg, name, _coerce(name, value))
    return cfg


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",), delimiters=("=",))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text, source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"malformed config file {path}: {exc}") from exc
    return dict(parser["run"])


def load_config(path=None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        apply_settings(cfg, read_config_file(path))
    if overrides:
        apply_settings(cfg, overrides)
    return cfg

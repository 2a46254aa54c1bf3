"""Run configuration: one JSON document with explicit defaults."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .errors import IfsSpectraError
from .lattice import IntMatrix
from .triple import HadamardTriple


class ConfigError(IfsSpectraError):
    """Malformed or inconsistent run configuration."""


_DEFAULTS = {
    "weights": None,
    "horizon": 4,
    "eps": 1e-10,
    "paths": 100_000,
    "steps": 64,
    "seed": 0,
    "out": ".",
    "image_width": 512,
    "image_height": 512,
    "image_points": 1_000_000,
    "window": None,
    "threads": 1,
}


@dataclass
class RunConfig:
    R: list
    B: list
    L: list
    weights: list | None = None
    horizon: int = 4
    eps: float = 1e-10
    paths: int = 100_000
    steps: int = 64
    seed: int = 0
    out: str = "."
    image_width: int = 512
    image_height: int = 512
    image_points: int = 1_000_000
    window: list | None = None
    threads: int = 1

    @classmethod
    def from_json(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
        return cls.from_dict(raw)

    @classmethod
    def from_dict(cls, raw: dict) -> "RunConfig":
        if not isinstance(raw, dict):
            raise ConfigError("config root must be a JSON object")
        for key in ("R", "B", "L"):
            if key not in raw:
                raise ConfigError(f"missing required key {key!r}")
        unknown = set(raw) - {"R", "B", "L"} - set(_DEFAULTS)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {"R": raw["R"], "B": raw["B"], "L": raw["L"]}
        for key, default in _DEFAULTS.items():
            kwargs[key] = raw.get(key, default)
        return cls(**kwargs)

    def effective(self) -> dict:
        """Full config echo with every default made explicit."""
        return asdict(self)

    def triple(self) -> HadamardTriple:
        try:
            return HadamardTriple(IntMatrix(self.R), self.B, self.L)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad triple data: {exc}")

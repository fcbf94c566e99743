"""Run configuration: nested dataclasses with a JSON round-trip.

Derived quantities (the amplitude bound, stationary (A, G)) are recomputed
from the stored fields and never written back.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
import json
import math
from pathlib import Path
from typing import Any

from .stationary import GeometryParams


class ConfigError(ValueError):
    pass


@dataclass
class GeometryConfig:
    r1: float = 2.0
    r2: float = 1.0


@dataclass
class BioConfig:
    """Either ``derive_stationary`` (A, G from psi0) or explicit ``a`` and ``g``."""

    psi0: float = 1.0
    a: float | None = None
    g: float | None = None
    derive_stationary: bool = True


@dataclass
class DiscretizationConfig:
    modes: int = 32
    nr: int | None = None
    radial: str = "chebyshev"
    bound_fraction: float = 0.9


@dataclass
class TimeConfig:
    t_end: float = 0.1
    dt: float = 1e-3
    output_every: int = 10


@dataclass
class SeedConfig:
    interface: int
    mode: int
    amplitude: float
    phase: float = 0.0


@dataclass
class SweepConfig:
    parameter: str = "psi0"
    start: float = 0.1
    stop: float = 10.0
    num: int = 50
    workers: int = 1


@dataclass
class OutputConfig:
    out: str | None = None


@dataclass
class RunConfig:
    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    bio: BioConfig = field(default_factory=BioConfig)
    discretization: DiscretizationConfig = field(default_factory=DiscretizationConfig)
    time: TimeConfig = field(default_factory=TimeConfig)
    seeds: list[SeedConfig] = field(default_factory=list)
    sweep: SweepConfig = field(default_factory=SweepConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    m_max: int = 64

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a JSON object")
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        try:
            cfg = cls(
                geometry=_section(GeometryConfig, data.get("geometry", {})),
                bio=_section(BioConfig, data.get("bio", {})),
                discretization=_section(DiscretizationConfig, data.get("discretization", {})),
                time=_section(TimeConfig, data.get("time", {})),
                seeds=[_section(SeedConfig, s) for s in data.get("seeds", [])],
                sweep=_section(SweepConfig, data.get("sweep", {})),
                output=_section(OutputConfig, data.get("output", {})),
                m_max=data.get("m_max", 64),
            )
        except TypeError as exc:
            raise ConfigError(str(exc)) from None
        cfg.validate()
        return cfg

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None

    @classmethod
    def load(cls, path: str | Path) -> "RunConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_json(text)

    def validate(self) -> None:
        g, b, d, t = self.geometry, self.bio, self.discretization, self.time
        for name, val in (("r1", g.r1), ("r2", g.r2), ("psi0", b.psi0), ("t_end", t.t_end), ("dt", t.dt)):
            if not isinstance(val, (int, float)) or isinstance(val, bool) or not math.isfinite(val):
                raise ConfigError(f"{name} must be a finite number")
        if not 0 < g.r2 < g.r1:
            raise ConfigError(f"need 0 < r2 < r1, got r1={g.r1}, r2={g.r2}")
        if b.psi0 <= 0:
            raise ConfigError("psi0 must be positive")
        if not b.derive_stationary and (b.a is None or b.g is None):
            raise ConfigError("explicit bio parameters need both a and g")
        if not (isinstance(d.modes, int) and d.modes >= 1):
            raise ConfigError("modes must be a positive integer")
        if d.nr is not None and not (isinstance(d.nr, int) and d.nr >= 8):
            raise ConfigError("nr must be an integer >= 8")
        if d.radial not in ("chebyshev", "fd2"):
            raise ConfigError(f"unknown radial discretization {d.radial!r}")
        if not 0 < d.bound_fraction < 1:
            raise ConfigError("bound_fraction must lie in (0, 1)")
        if t.t_end < 0 or t.dt <= 0:
            raise ConfigError("need t_end >= 0 and dt > 0")
        if not (isinstance(t.output_every, int) and t.output_every >= 1):
            raise ConfigError("output_every must be a positive integer")
        for s in self.seeds:
            if s.interface not in (1, 2):
                raise ConfigError(f"seed interface must be 1 or 2, got {s.interface}")
            if not 0 <= s.mode <= d.modes:
                raise ConfigError(f"seed mode {s.mode} outside 0..{d.modes}")
        if self.sweep.parameter not in ("psi0", "r2"):
            raise ConfigError("sweep parameter must be psi0 or r2")
        if self.sweep.num < 1 or self.sweep.workers < 1:
            raise ConfigError("sweep num and workers must be positive")
        if not (isinstance(self.m_max, int) and self.m_max >= 1):
            raise ConfigError("m_max must be a positive integer")

    def geometry_params(self) -> GeometryParams:
        return GeometryParams(float(self.geometry.r1), float(self.geometry.r2))

    def amplitude_bound(self) -> float:
        return self.discretization.bound_fraction * self.geometry_params().max_amplitude


def _section(cls, data):
    if isinstance(data, cls):
        return data
    if not isinstance(data, dict):
        raise ConfigError(f"section {cls.__name__} must be an object")
    allowed = {f.name for f in fields(cls)}
    unknown = set(data) - allowed
    if unknown:
        raise ConfigError(f"unknown keys in {cls.__name__}: {sorted(unknown)}")
    return cls(**data)

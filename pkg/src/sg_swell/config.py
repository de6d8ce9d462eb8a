"""Flat ``key = value`` run configuration with ``#`` comments.

Only ``scenario`` is required; every other key falls back to the scenario's
registered default.  Unknown keys, duplicate keys and malformed values raise
:class:`~sg_swell.errors.ConfigError` naming the line.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path

from .errors import ConfigError
from .scenarios import SCENARIOS, Scenario

__all__ = ["RunConfig", "parse_config", "load_config", "resolve_threads", "THREADS_ENV"]

THREADS_ENV = "SG_SWELL_THREADS"


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _ints(text: str) -> tuple:
    return tuple(int(p) for p in text.replace(",", " ").split())


def _words(text: str) -> tuple:
    return tuple(p for p in text.replace(",", " ").split())


@dataclass(frozen=True)
class RunConfig:
    scenario: str
    K: int | None = None
    N: int | None = None
    elements: int | None = None
    g: float | None = None
    dt: float | None = None
    t_final: float | None = None
    family: str | None = None
    mode: str | None = None
    bc: tuple | None = None
    c: float | None = None
    quad_points: int | None = None
    mms_method: str | None = None
    offset: float | None = None
    compiled: bool | None = None
    output: str = "out"
    entropy_period: int = 1
    resolutions: tuple = ()
    threads: int = 0
    plots: bool = True
    probabilities: tuple = (0.05, 0.5, 0.95)

    def scenario_spec(self) -> Scenario:
        """Registered scenario with every explicitly configured key applied."""
        base = SCENARIOS[self.scenario]
        overrides = {
            f.name: getattr(self, f.name)
            for f in fields(Scenario)
            if f.name != "name" and hasattr(self, f.name) and getattr(self, f.name) is not None
        }
        sc = base.with_(**overrides)
        if len(sc.bc) != sc.ndim:
            if len(sc.bc) == 1:
                sc = sc.with_(bc=sc.bc * sc.ndim)
            else:
                raise ConfigError(f"bc needs {sc.ndim} entries for scenario {sc.name!r}, got {sc.bc}")
        return sc


_CONVERTERS = {
    "scenario": str,
    "K": int,
    "N": int,
    "elements": int,
    "g": float,
    "dt": float,
    "t_final": float,
    "family": str,
    "mode": lambda t: t.strip().upper(),
    "bc": _words,
    "c": float,
    "quad_points": int,
    "mms_method": str,
    "offset": float,
    "compiled": _bool,
    "output": str,
    "entropy_period": int,
    "resolutions": _ints,
    "threads": int,
    "plots": _bool,
    "probabilities": lambda t: tuple(float(p) for p in t.replace(",", " ").split()),
}


def parse_config(text: str, source: str = "<config>") -> RunConfig:
    values: dict = {}
    seen: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in _CONVERTERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in seen:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r} (first set on line {seen[key]})")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
        seen[key] = lineno
    if "scenario" not in values:
        raise ConfigError(f"{source}: missing required key 'scenario'")
    if values["scenario"] not in SCENARIOS:
        raise ConfigError(
            f"{source}:{seen['scenario']}: unknown scenario {values['scenario']!r}; choose from {sorted(SCENARIOS)}"
        )
    cfg = RunConfig(**values)
    _validate(cfg, source, seen)
    return cfg


def _validate(cfg: RunConfig, source: str, seen: dict) -> None:
    def fail(key, msg):
        where = f"{source}:{seen[key]}" if key in seen else source
        raise ConfigError(f"{where}: {msg}")

    if cfg.K is not None and (cfg.K < 1 or cfg.K & (cfg.K - 1) or cfg.K > 64):
        fail("K", f"K must be a power of two between 1 and 64, got {cfg.K}")
    if cfg.N is not None and cfg.N < 1:
        fail("N", f"N must be >= 1, got {cfg.N}")
    if cfg.elements is not None and cfg.elements < 1:
        fail("elements", f"elements must be >= 1, got {cfg.elements}")
    for key in ("dt", "g"):
        v = getattr(cfg, key)
        if v is not None and not v > 0:
            fail(key, f"{key} must be positive, got {v}")
    if cfg.t_final is not None and cfg.t_final < 0:
        fail("t_final", f"t_final must be non-negative, got {cfg.t_final}")
    if cfg.mode is not None and cfg.mode not in ("EC", "ES"):
        fail("mode", f"mode must be EC or ES, got {cfg.mode!r}")
    if cfg.entropy_period < 1:
        fail("entropy_period", f"entropy_period must be >= 1, got {cfg.entropy_period}")
    if cfg.threads < 0:
        fail("threads", f"threads must be >= 0 (0 = automatic), got {cfg.threads}")
    if cfg.mms_method is not None and cfg.mms_method not in ("fd", "exact"):
        fail("mms_method", f"mms_method must be fd or exact, got {cfg.mms_method!r}")
    if any(not 0 <= p <= 1 for p in cfg.probabilities):
        fail("probabilities", f"probabilities must lie in [0, 1], got {cfg.probabilities}")
    from .dg import BOUNDARY_KINDS
    from .fluxes import FAMILIES

    if cfg.bc is not None and any(b not in BOUNDARY_KINDS for b in cfg.bc):
        fail("bc", f"boundary kinds must be among {BOUNDARY_KINDS}, got {cfg.bc}")
    if cfg.family is not None and cfg.family not in FAMILIES:
        fail("family", f"unknown flux family {cfg.family!r}; choose from {sorted(FAMILIES)}")


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text, str(path))


def resolve_threads(cfg_threads: int = 0) -> int:
    """Thread count: the environment variable wins over the config; 0 means automatic."""
    env = os.environ.get(THREADS_ENV)
    if env is not None and env.strip():
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        if n < 0:
            raise ConfigError(f"{THREADS_ENV} must be >= 0, got {n}")
        return n
    return cfg_threads

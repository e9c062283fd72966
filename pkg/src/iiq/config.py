"""Domain types, calibration tables and the flat ``key = value`` config format."""

from __future__ import annotations

import dataclasses
import hashlib
import math
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path

import numpy as np

__all__ = [
    "ConfigError",
    "TaskRepresentation",
    "InteractionEvent",
    "LeverageTable",
    "ComplexityTable",
    "EngineConfig",
    "UserState",
    "PeriodResult",
    "load_config",
    "render_config",
    "config_hash",
    "leverage_multiplier",
    "complexity_multiplier",
    "EDIT_CHAR_CAP",
]

# Characters of normalized text kept per representation; edit distance never sees more.
EDIT_CHAR_CAP = 2000

VALID_PERIOD_HOURS = (1, 2, 3, 4, 6, 8, 12, 24)

_WS = re.compile(r"\s+")
_NON_ALNUM = re.compile(r"[\W_]+")


class ConfigError(ValueError):
    """Raised for malformed or out-of-range configuration."""


@dataclass(frozen=True)
class TaskRepresentation:
    normalized_text: str
    keyword_set: frozenset[str] = frozenset()

    @classmethod
    def from_text(cls, text: str) -> TaskRepresentation:
        norm = _WS.sub(" ", text.lower()).strip()
        keywords = frozenset(t for t in _NON_ALNUM.split(norm) if len(t) >= 3)
        return cls(norm[:EDIT_CHAR_CAP], keywords)

    @cached_property
    def codes(self) -> np.ndarray:
        """Code points of the normalized text as a uint32 array (kernel input)."""
        return np.frombuffer(self.normalized_text.encode("utf-32-le"), dtype=np.uint32)


@dataclass(frozen=True)
class InteractionEvent:
    user_id: str
    timestamp: int  # epoch seconds, UTC
    task_repr: TaskRepresentation
    token_count: int
    complexity_tier: int
    agent_turns: int = 0
    active_run_hours: float = 0.0
    department: str | None = None

    def __post_init__(self):
        if self.token_count < 0:
            raise ValueError("token_count must be >= 0")
        if self.complexity_tier not in (1, 2, 3, 4):
            raise ValueError(f"complexity_tier must be in 1..4, got {self.complexity_tier}")
        if self.agent_turns < 0:
            raise ValueError("agent_turns must be >= 0")
        if not self.active_run_hours >= 0:
            raise ValueError("active_run_hours must be >= 0")

    @classmethod
    def from_prompt(cls, user_id: str, when: datetime | int, prompt: str, tokens: int,
                    tier: int, agent_turns: int = 0, run_hours: float = 0.0,
                    department: str | None = None) -> InteractionEvent:
        ts = when if isinstance(when, int) else int(when.astimezone(timezone.utc).timestamp())
        return cls(user_id, ts, TaskRepresentation.from_text(prompt), tokens, tier,
                   agent_turns, run_hours, department)


@dataclass(frozen=True)
class LeverageTable:
    multipliers: tuple[float, ...] = (1.0, 1.5, 2.5, 4.0, 7.0, 14.0, 25.0, 50.0)

    def __post_init__(self):
        m = self.multipliers
        if not m or any(not (x > 0 and math.isfinite(x)) for x in m):
            raise ConfigError("leverage out of range: multipliers must be positive")
        if any(b <= a for a, b in zip(m, m[1:])):
            raise ConfigError("leverage out of range: multipliers must be strictly increasing")

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(enumerate(self.multipliers, start=1))


@dataclass(frozen=True)
class ComplexityTable:
    multipliers: tuple[float, ...] = (1.0, 2.0, 3.5, 5.0)

    def __post_init__(self):
        if len(self.multipliers) != 4:
            raise ConfigError("complexity out of range: exactly 4 tier multipliers required")
        if any(not (x > 0 and math.isfinite(x)) for x in self.multipliers):
            raise ConfigError("complexity out of range: multipliers must be positive")

    @property
    def entries(self) -> list[tuple[int, float]]:
        return list(enumerate(self.multipliers, start=1))


def leverage_multiplier(table: LeverageTable, level: int) -> float:
    if not 1 <= level <= len(table.multipliers):
        raise ValueError(f"unknown leverage level {level}")
    return table.multipliers[level - 1]


def complexity_multiplier(table: ComplexityTable, tier: int) -> float:
    if not 1 <= tier <= 4:
        raise ValueError(f"unknown complexity tier {tier}")
    return table.multipliers[tier - 1]


@dataclass(frozen=True)
class EngineConfig:
    """Every tunable of the engine. Defaults are the illustrative calibration."""

    alpha_T_daily: float = 0.05
    alpha_F_daily: float = 0.05
    grace_periods: int = 3
    lambda_daily: float = 0.30
    complexity_window: int = 14
    omega_turns: float = 0.18
    omega_hours: float = 1.6
    gamma: float = 0.18
    leverage: LeverageTable = field(default_factory=LeverageTable)
    complexity: ComplexityTable = field(default_factory=ComplexityTable)
    max_expected: float = 5.0e7
    k_hours_per_1k: float = 0.1
    rho: float = 0.75
    wage_usd: float = 40.0
    work_hours_per_day: float = 8.0
    work_days_per_week: float = 5.0
    period_hours: int = 24
    history_capacity: int = 50
    similarity_method: str = "hybrid"

    def __post_init__(self):
        _validate(self)

    @property
    def periods_per_day(self) -> int:
        return 24 // self.period_hours

    @property
    def period_seconds(self) -> int:
        return self.period_hours * 3600

    def replace(self, **changes) -> EngineConfig:
        return dataclasses.replace(self, **changes)


def _validate(c: EngineConfig) -> None:
    def bad(key: str, why: str = "") -> ConfigError:
        return ConfigError(f"{key} out of range" + (f": {why}" if why else ""))

    for key in ("alpha_T_daily", "alpha_F_daily"):
        if not 0.0 < getattr(c, key) < 1.0:
            raise bad(key, "must be in (0,1)")
    if not 0.0 < c.rho <= 1.0:
        raise bad("rho", "must be in (0,1]")
    for key in ("grace_periods",):
        if not isinstance(getattr(c, key), int) or getattr(c, key) < 0:
            raise bad(key, "must be a nonnegative integer")
    for key in ("complexity_window", "history_capacity"):
        if not isinstance(getattr(c, key), int) or getattr(c, key) < 1:
            raise bad(key, "must be a positive integer")
    for key in ("lambda_daily",):
        if not getattr(c, key) > 0:
            raise bad(key, "must be positive")
    if not c.max_expected > 1:
        raise bad("max_expected", "must exceed 1")
    for key in ("omega_turns", "omega_hours", "gamma", "k_hours_per_1k", "wage_usd",
                "work_hours_per_day", "work_days_per_week"):
        v = getattr(c, key)
        if not (v >= 0 and math.isfinite(v)):
            raise bad(key, "must be nonnegative")
    if c.period_hours not in VALID_PERIOD_HOURS:
        raise bad("period_hours", f"must be one of {VALID_PERIOD_HOURS}")
    from .novelty import known_methods  # registry lives with the scorers

    if c.similarity_method not in known_methods():
        raise bad("similarity_method", f"must be one of {sorted(known_methods())}")


_INT_KEYS = {"grace_periods", "complexity_window", "period_hours", "history_capacity"}
_TABLE_KEYS = {"leverage": LeverageTable, "complexity": ComplexityTable}
_FIELDS = [f.name for f in dataclasses.fields(EngineConfig)]


def _parse_value(key: str, raw: str):
    try:
        if key in _TABLE_KEYS:
            return _TABLE_KEYS[key](tuple(float(x) for x in raw.split(",")))
        if key == "similarity_method":
            return raw
        if key in _INT_KEYS:
            num = float(raw)
            if not num.is_integer():
                raise ConfigError(f"{key} out of range: must be an integer")
            return int(num)
        return float(raw)
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"malformed value for {key}: {raw!r}") from None


def load_config(source: str | Path | None = None, *, text: str | None = None) -> EngineConfig:
    """Parse a ``key = value`` document (path or ``text=``) into a validated config."""
    if text is None:
        text = "" if source is None else Path(source).read_text(encoding="utf-8")
    values = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, raw = line.partition("=")
        key, raw = key.strip(), raw.strip()
        if not sep or not key or not raw:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in _FIELDS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw)
    return EngineConfig(**values)


def render_config(config: EngineConfig) -> str:
    lines = []
    for name in _FIELDS:
        v = getattr(config, name)
        if isinstance(v, (LeverageTable, ComplexityTable)):
            v = ", ".join(repr(float(x)) for x in v.multipliers)
        elif isinstance(v, float):
            v = repr(v)
        lines.append(f"{name} = {v}")
    return "\n".join(lines) + "\n"


def config_hash(config: EngineConfig) -> str:
    return hashlib.sha256(render_config(config).encode("utf-8")).hexdigest()


@dataclass(frozen=True)
class UserState:
    """Recurrent per-user state; replaced, never mutated, by the engine."""

    leverage_level: int
    token_stock: float = 0.0
    freq_raw: float = 0.0
    inactive_streak: int = 0
    # (sum nu*c, sum nu) per period, oldest first
    complexity_window_entries: tuple[tuple[float, float], ...] = ()
    # most recent last
    history: tuple[TaskRepresentation, ...] = ()
    previous_index: float | None = None
    previous_delta: float | None = None
    last_period_index: int | None = None


@dataclass(frozen=True)
class PeriodResult:
    user_id: str
    period_index: int
    T: float
    F: float
    R: float
    V: float
    C: float
    A: float
    G: float
    D: float
    U: float
    iai: float
    iiq_index: float
    delta_iiq: float | None
    hours_saved: float
    usd_impact: float

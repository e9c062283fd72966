"""Bounded views of the raw index: 0-1000 IIQ index, estimated hours and USD.

Hours and USD are model-based estimates, not observations; reports label them so.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .config import EngineConfig

__all__ = [
    "InterpretationInputs",
    "iiq_index",
    "hours_saved",
    "usd_impact",
    "work_hours_per_period",
    "weekly_hours_cap",
]


@dataclass(frozen=True)
class InterpretationInputs:
    G: float
    C: float
    A: float
    V: float
    work_hours_available: float
    k: float = 0.1
    rho: float = 0.75
    wage_usd: float = 40.0

    @classmethod
    def for_period(cls, G: float, C: float, A: float, V: float,
                   config: EngineConfig) -> InterpretationInputs:
        return cls(G, C, A, V, work_hours_per_period(config), config.k_hours_per_1k,
                   config.rho, config.wage_usd)


def iiq_index(iai: float, max_expected: float = 5.0e7) -> float:
    """Log-scaled index, clamped to [0, 1000]."""
    raw = math.log10(iai + 1.0) / math.log10(max_expected) * 1000.0
    return min(1000.0, max(0.0, raw))


def hours_saved(inputs: InterpretationInputs) -> float:
    cap = inputs.rho * inputs.work_hours_available
    return min(cap, inputs.G / 1000.0 * inputs.k * inputs.C * inputs.A)


def usd_impact(hours: float, wage: float, V: float) -> float:
    return hours * (wage * V)


def work_hours_per_period(config: EngineConfig) -> float:
    # weekends are not modelled: every period gets its pro-rata share of a work day
    return config.work_hours_per_day * config.period_hours / 24.0


def weekly_hours_cap(config: EngineConfig) -> float:
    """Most hours one user may be credited within a calendar week."""
    return config.rho * config.work_hours_per_day * config.work_days_per_week

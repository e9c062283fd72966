"""Per-period masses and the factor recurrences (T, F, R, C, A)."""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass

from .config import EngineConfig, InteractionEvent, complexity_multiplier

__all__ = [
    "PeriodMasses",
    "period_masses",
    "update_token_stock",
    "update_frequency",
    "recency_gate",
    "update_complexity_window",
    "autonomy_mass",
    "autonomy_multiplier",
]


@dataclass(frozen=True)
class PeriodMasses:
    G: float = 0.0  # effective tokens
    D: float = 0.0  # distinct-task mass
    U: float = 0.0  # autonomy mass
    weighted_tier_sum: float = 0.0
    event_count: int = 0


def autonomy_mass(event: InteractionEvent, omega_turns: float, omega_hours: float) -> float:
    return omega_turns * event.agent_turns + omega_hours * event.active_run_hours


def period_masses(weighted: Iterable[tuple[InteractionEvent, float]],
                  config: EngineConfig) -> PeriodMasses:
    """Novelty-weighted sums over one period's ``(event, nu)`` pairs."""
    G = D = U = W = 0.0
    n = 0
    for event, nu in weighted:
        G += nu * event.token_count
        D += nu
        U += nu * autonomy_mass(event, config.omega_turns, config.omega_hours)
        W += nu * complexity_multiplier(config.complexity, event.complexity_tier)
        n += 1
    return PeriodMasses(G, D, U, W, n)


def update_token_stock(T_prev: float, G: float, alpha_T_periodic: float) -> float:
    return T_prev * (1.0 - alpha_T_periodic) + G


def update_frequency(F_raw_prev: float, D: float, alpha_F_periodic: float) -> tuple[float, float]:
    """Return ``(F_raw, F)`` with ``F = 1 + ln(1 + F_raw)``."""
    F_raw = F_raw_prev * (1.0 - alpha_F_periodic) + D
    return F_raw, 1.0 + math.log1p(F_raw)


def recency_gate(inactive_periods: int, grace: int, lambda_periodic: float) -> float:
    if inactive_periods <= grace:
        return 1.0
    return math.exp(-lambda_periodic * (inactive_periods - grace))


def update_complexity_window(window: tuple[tuple[float, float], ...],
                             new_entry: tuple[float, float],
                             W: int) -> tuple[tuple[tuple[float, float], ...], float]:
    """Append a ``(sum nu*c, sum nu)`` period entry, keeping the last ``W``.

    Returns ``(window, C)`` where C falls back to 1.0 when no novelty mass is in view.
    """
    window = (window + (new_entry,))[-W:]
    num = sum(e[0] for e in window)
    den = sum(e[1] for e in window)
    return window, (num / den if den > 0.0 else 1.0)


def autonomy_multiplier(U: float, gamma: float) -> float:
    return 1.0 + gamma * math.log1p(U)

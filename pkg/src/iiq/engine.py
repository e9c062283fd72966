"""Streaming per-user engine.

Events are bucketed into fixed periods of ``config.period_hours``. Each period,
in order, gets novelty weights, updated stocks and the six-factor index. Gaps
between active periods are materialised as empty periods so decay and the
inactivity streak advance uniformly.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import replace
from itertools import groupby

from . import accumulators as acc
from .config import (
    EngineConfig,
    InteractionEvent,
    PeriodResult,
    UserState,
    complexity_multiplier,
    leverage_multiplier,
)
from .interpretation import InterpretationInputs, hours_saved, iiq_index, usd_impact
from .novelty import novelty_weight, push_history

__all__ = [
    "PeriodOrderError",
    "convert_decay",
    "convert_lambda",
    "period_of",
    "period_start",
    "init_state",
    "process_period",
    "micro_iai",
    "delta_iiq",
    "run_user",
]


class PeriodOrderError(ValueError):
    """A period was fed out of sequence or an event lies outside its period."""


def convert_decay(alpha_daily: float, period_hours: float) -> float:
    """Per-period decay rate equivalent to ``alpha_daily`` compounded over a day."""
    return 1.0 - (1.0 - alpha_daily) ** (period_hours / 24.0)


def convert_lambda(lambda_daily: float, period_hours: float) -> float:
    return lambda_daily * (period_hours / 24.0)


def period_of(timestamp: int, config: EngineConfig) -> int:
    return timestamp // config.period_seconds


def period_start(index: int, config: EngineConfig) -> int:
    return index * config.period_seconds


def init_state(leverage_level: int, config: EngineConfig | None = None) -> UserState:
    config = config or EngineConfig()
    leverage_multiplier(config.leverage, leverage_level)  # raises on unknown level
    return UserState(leverage_level=leverage_level)


def delta_iiq(current_index: float, previous_index: float | None) -> float | None:
    if previous_index is None:
        return None
    return current_index - previous_index


def process_period(state: UserState, events: Sequence[InteractionEvent], config: EngineConfig,
                   *, period_index: int | None = None,
                   user_id: str | None = None) -> tuple[UserState, PeriodResult]:
    """Advance ``state`` by exactly one period containing ``events``.

    ``period_index`` defaults to the period after ``state.last_period_index``, or to
    the events' period for a fresh state.
    """
    events = sorted(events, key=lambda e: e.timestamp)
    if period_index is None:
        if state.last_period_index is not None:
            period_index = state.last_period_index + 1
        elif events:
            period_index = period_of(events[0].timestamp, config)
        else:
            raise PeriodOrderError("period_index is required for an empty first period")
    if state.last_period_index is not None and period_index != state.last_period_index + 1:
        raise PeriodOrderError(
            f"out-of-order period {period_index}; expected {state.last_period_index + 1}")
    for e in events:
        if period_of(e.timestamp, config) != period_index:
            raise PeriodOrderError(
                f"event at {e.timestamp} lies outside period {period_index}")
    if user_id is None:
        user_id = events[0].user_id if events else ""

    history = state.history
    weighted = []
    for e in events:
        nu = novelty_weight(e.task_repr, history, config.similarity_method)
        weighted.append((e, nu))
        history = push_history(history, e.task_repr, config.history_capacity)
    masses = acc.period_masses(weighted, config)

    P = config.period_hours
    T = acc.update_token_stock(state.token_stock, masses.G, convert_decay(config.alpha_T_daily, P))
    F_raw, F = acc.update_frequency(state.freq_raw, masses.D,
                                    convert_decay(config.alpha_F_daily, P))
    window, C = acc.update_complexity_window(state.complexity_window_entries,
                                             (masses.weighted_tier_sum, masses.D),
                                             config.complexity_window)
    streak = 0 if events else state.inactive_streak + 1
    R = acc.recency_gate(streak, config.grace_periods, convert_lambda(config.lambda_daily, P))
    V = leverage_multiplier(config.leverage, state.leverage_level)
    A = acc.autonomy_multiplier(masses.U, config.gamma)

    iai = T * F * R * V * C * A
    index = iiq_index(iai, config.max_expected)
    delta = delta_iiq(index, state.previous_index)
    hours = hours_saved(InterpretationInputs.for_period(masses.G, C, A, V, config))
    result = PeriodResult(
        user_id=user_id, period_index=period_index,
        T=T, F=F, R=R, V=V, C=C, A=A, G=masses.G, D=masses.D, U=masses.U,
        iai=iai, iiq_index=index, delta_iiq=delta,
        hours_saved=hours, usd_impact=usd_impact(hours, config.wage_usd, V),
    )
    new_state = replace(
        state, token_stock=T, freq_raw=F_raw, inactive_streak=streak,
        complexity_window_entries=window, history=history,
        previous_index=index, previous_delta=delta, last_period_index=period_index,
    )
    return new_state, result


def micro_iai(event: InteractionEvent, nu: float, config: EngineConfig,
              leverage_level: int) -> float:
    """Stateless single-interaction score: nu * t * V * c * (1 + gamma ln(1 + u))."""
    u = acc.autonomy_mass(event, config.omega_turns, config.omega_hours)
    return (nu * event.token_count
            * leverage_multiplier(config.leverage, leverage_level)
            * complexity_multiplier(config.complexity, event.complexity_tier)
            * acc.autonomy_multiplier(u, config.gamma))


def run_user(events: Iterable[InteractionEvent], config: EngineConfig, *,
             leverage_level: int | None = None, state: UserState | None = None,
             start_period: int | None = None, end_period: int | None = None,
             user_id: str | None = None) -> tuple[UserState, list[PeriodResult]]:
    """Drive one user's time-ordered events through every period they span.

    Periods run from the state's frontier (else ``start_period``, else the first
    event's period) through ``end_period`` (default: the last event's period),
    empty ones included.
    """
    if state is None:
        if leverage_level is None:
            raise ValueError("leverage_level is required for a fresh state")
        state = init_state(leverage_level, config)
    events = list(events)
    if any(b.timestamp < a.timestamp for a, b in zip(events, events[1:])):
        raise PeriodOrderError("events must be sorted by timestamp")
    buckets = {p: list(g) for p, g in groupby(events, key=lambda e: period_of(e.timestamp, config))}
    if user_id is None and events:
        user_id = events[0].user_id

    if state.last_period_index is not None:
        start = state.last_period_index + 1
        if buckets and min(buckets) < start:
            raise PeriodOrderError(
                f"timestamp earlier than frontier (period {min(buckets)} <= "
                f"{state.last_period_index})")
    elif start_period is not None:
        start = start_period
        if buckets and min(buckets) < start:
            raise PeriodOrderError(f"event period {min(buckets)} precedes start_period {start}")
    elif buckets:
        start = min(buckets)
    else:
        return state, []
    stop = max(buckets) if buckets else start - 1
    if end_period is not None:
        if end_period < stop:
            raise PeriodOrderError(f"end_period {end_period} precedes last event period {stop}")
        stop = end_period

    results = []
    for p in range(start, stop + 1):
        state, res = process_period(state, buckets.get(p, ()), config, period_index=p,
                                    user_id=user_id)
        results.append(res)
    return state, results


def factor_product(result: PeriodResult) -> float:
    return math.prod((result.T, result.F, result.R, result.V, result.C, result.A))

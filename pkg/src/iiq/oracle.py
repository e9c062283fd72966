"""Brute-force reference for the streaming engine.

Nothing here reuses the engine's accumulators. Every period is recomputed from
the full event list: stocks as explicit geometric sums, complexity as the
double sum over raw events inside the window, novelty by scanning the raw
predecessor list with the pairwise scorers. Slow by design; traces are capped
at 10,000 events.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

from .config import EngineConfig, InteractionEvent, PeriodResult
from .novelty import get_similarity

MAX_EVENTS = 10_000


def _novelties(events: Sequence[InteractionEvent], config: EngineConfig) -> list[float]:
    sim = get_similarity(config.similarity_method)
    out = []
    for k, e in enumerate(events):
        prior = events[max(0, k - config.history_capacity):k]
        if not prior:
            out.append(1.0)
            continue
        best = max(sim(e.task_repr, h.task_repr) for h in prior)
        out.append(max(0.0, 1.0 - best))
    return out


def oracle_evaluate(events: Sequence[InteractionEvent], config: EngineConfig,
                    leverage_level: int, *, start_period: int | None = None,
                    end_period: int | None = None,
                    user_id: str | None = None) -> list[PeriodResult]:
    """Recompute every per-period result of one user's sorted trace from scratch."""
    if len(events) > MAX_EVENTS:
        raise ValueError(f"oracle is capped at {MAX_EVENTS} events")
    events = list(events)
    if not events and start_period is None:
        return []
    secs = config.period_hours * 3600
    per = [e.timestamp // secs for e in events]
    nus = _novelties(events, config)
    first = start_period if start_period is not None else per[0]
    last = end_period if end_period is not None else (per[-1] if per else first)
    if user_id is None:
        user_id = events[0].user_id if events else ""

    frac = config.period_hours / 24.0
    keep_T = (1.0 - config.alpha_T_daily) ** frac
    keep_F = (1.0 - config.alpha_F_daily) ** frac
    lam = config.lambda_daily * frac
    V = config.leverage.multipliers[leverage_level - 1]
    cmult = config.complexity.multipliers
    log_max = math.log10(config.max_expected)
    work_hours = config.work_hours_per_day * config.period_hours / 24.0

    def in_period(q):
        return [i for i, pq in enumerate(per) if pq == q]

    results = []
    prev_index = None
    for p in range(first, last + 1):
        T = 0.0
        F_raw = 0.0
        for q in range(first, p + 1):
            idx = in_period(q)
            Gq = sum(nus[i] * events[i].token_count for i in idx)
            Dq = sum(nus[i] for i in idx)
            T += Gq * keep_T ** (p - q)
            F_raw += Dq * keep_F ** (p - q)
        F = 1.0 + math.log(1.0 + F_raw)

        now = in_period(p)
        G = sum(nus[i] * events[i].token_count for i in now)
        D = sum(nus[i] for i in now)
        U = sum(nus[i] * (config.omega_turns * events[i].agent_turns
                          + config.omega_hours * events[i].active_run_hours) for i in now)
        A = 1.0 + config.gamma * math.log(1.0 + U)

        inactive = 0
        q = p
        while q >= first and not in_period(q):
            inactive += 1
            q -= 1
        R = 1.0 if inactive <= config.grace_periods else math.exp(
            -lam * (inactive - config.grace_periods))

        lo = max(first, p - config.complexity_window + 1)
        window = [i for i, pq in enumerate(per) if lo <= pq <= p]
        num = sum(nus[i] * cmult[events[i].complexity_tier - 1] for i in window)
        den = sum(nus[i] for i in window)
        C = num / den if den > 0 else 1.0

        iai = T * F * R * V * C * A
        index = min(1000.0, max(0.0, math.log10(1.0 + iai) / log_max * 1000.0))
        hours = min(config.rho * work_hours, G / 1000.0 * config.k_hours_per_1k * C * A)
        results.append(PeriodResult(
            user_id=user_id, period_index=p, T=T, F=F, R=R, V=V, C=C, A=A, G=G, D=D, U=U,
            iai=iai, iiq_index=index,
            delta_iiq=None if prev_index is None else index - prev_index,
            hours_saved=hours, usd_impact=hours * config.wage_usd * V,
        ))
        prev_index = index
    return results

"""Organisation-level views over one period of per-user results.

A mean alone lets one power user mask a mostly idle team, so the summary
always carries median, breadth (active-user share) and concentration
(top-decile share, Gini) next to it.
"""

from __future__ import annotations

import math
import statistics
import warnings
from collections import defaultdict
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .config import EngineConfig, PeriodResult, UserState
from .interpretation import weekly_hours_cap

__all__ = ["OrgSummary", "DepartmentStats", "gini", "summarize", "weekly_rollup", "week_of"]


@dataclass(frozen=True)
class DepartmentStats:
    mean_index: float
    median_index: float
    user_count: int


@dataclass(frozen=True)
class OrgSummary:
    period_index: int | None
    user_count: int = 0
    mean_index: float = 0.0
    median_index: float = 0.0
    active_user_share: float = 0.0
    top_decile_share: float = 0.0
    gini: float = 0.0
    per_department: dict[str, DepartmentStats] = field(default_factory=dict)
    total_hours_saved: float = 0.0
    total_usd: float = 0.0

    @property
    def is_empty(self) -> bool:
        return self.user_count == 0


def gini(values: Sequence[float]) -> float:
    """Gini coefficient of nonnegative values; 0 for all-equal or all-zero input."""
    x = np.asarray(values, dtype=np.float64)
    if x.size == 0:
        raise ValueError("gini of an empty list is undefined")
    if np.any(x < 0):
        raise ValueError("gini requires nonnegative values")
    return float(_kernels.gini_kernel(x))


def _top_decile_share(results: Sequence[PeriodResult]) -> float:
    total = math.fsum(r.iiq_index for r in results)
    if total <= 0.0:
        return 0.0
    ranked = sorted(results, key=lambda r: (-r.iiq_index, r.user_id))
    top = ranked[:math.ceil(len(ranked) / 10)]
    return math.fsum(r.iiq_index for r in top) / total


def summarize(results: Sequence[PeriodResult], states: Mapping[str, UserState],
              config: EngineConfig, *,
              departments: Mapping[str, str | None] | None = None,
              workflow_weights: Mapping[str, float] | None = None) -> OrgSummary:
    """Summarise one period. ``states`` maps user id to the state after that period."""
    if workflow_weights:
        warnings.warn("workflow weights are accepted but not used: no weighting scheme is "
                      "defined for workflow-weighted IIQ", UserWarning, stacklevel=2)
    if not results:
        return OrgSummary(period_index=None)
    periods = {r.period_index for r in results}
    if len(periods) != 1:
        raise ValueError(f"results span several periods: {sorted(periods)}")
    missing = [r.user_id for r in results if r.user_id not in states]
    if missing:
        raise ValueError(f"no state for users {missing}")

    idx = [r.iiq_index for r in results]
    active = sum(states[r.user_id].inactive_streak <= config.grace_periods for r in results)

    groups = defaultdict(list)
    for r in results:
        dept = (departments or {}).get(r.user_id)
        if dept is not None:
            groups[dept].append(r.iiq_index)
    per_dept = {d: DepartmentStats(statistics.fmean(v), statistics.median(v), len(v))
                for d, v in sorted(groups.items())}

    cap = weekly_hours_cap(config)
    hours = 0.0
    usd = 0.0
    for r in results:
        h = min(r.hours_saved, cap)
        hours += h
        usd += h * config.wage_usd * r.V
    return OrgSummary(
        period_index=periods.pop(),
        user_count=len(results),
        mean_index=statistics.fmean(idx),
        median_index=statistics.median(idx),
        active_user_share=active / len(results),
        top_decile_share=_top_decile_share(results),
        gini=gini(idx),
        per_department=per_dept,
        total_hours_saved=hours,
        total_usd=usd,
    )


def week_of(period_index: int, config: EngineConfig) -> int:
    """Monday-anchored calendar week number of a period."""
    # the Unix epoch fell on a Thursday
    return (period_index * config.period_seconds + 3 * 86400) // (7 * 86400)


def weekly_rollup(results: Sequence[PeriodResult], config: EngineConfig) -> list[dict]:
    """Per-user weekly hours and USD with the weekly displacement cap re-applied."""
    cap = weekly_hours_cap(config)
    acc: dict[tuple[str, int], list] = {}
    for r in results:
        key = (r.user_id, week_of(r.period_index, config))
        slot = acc.setdefault(key, [0.0, r.V, 0])
        slot[0] += r.hours_saved
        slot[2] += 1
    rows = []
    for (user, week), (raw, V, n) in sorted(acc.items()):
        h = min(raw, cap)
        rows.append({"user_id": user, "week": week, "periods": n,
                     "est_hours_uncapped": raw, "est_hours_saved": h,
                     "est_usd": h * config.wage_usd * V})
    return rows

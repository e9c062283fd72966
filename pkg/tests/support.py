"""Shared helpers for the test modules."""

import numpy as np

from iiq import EngineConfig, InteractionEvent

RESULT_FIELDS = ("T", "F", "R", "V", "C", "A", "G", "D", "U", "iai", "iiq_index", "delta_iiq",
                 "hours_saved", "usd_impact")

VOCAB = ("alpha beta gamma delta report draft summary code review policy plan budget model "
         "data query chart email memo").split()

DAY = 86400
BASE = 20000 * DAY  # 2024-10-04, arbitrary fixed origin


def random_trace(rng: np.random.Generator, config: EngineConfig, *, user="u",
                 max_events=200, max_periods=60):
    """Mixed-regime trace: verbatim repeats, vocabulary overlap, all tiers, random autonomy."""
    n = int(rng.integers(1, max_events + 1))
    span = int(rng.integers(1, max_periods + 1))
    ts = np.sort(rng.integers(BASE, BASE + span * config.period_seconds, size=n))
    dup_rate = float(rng.choice([0.0, 0.3, 0.8]))
    prompts, events = [], []
    for t in ts:
        if prompts and rng.random() < dup_rate:
            p = prompts[int(rng.integers(len(prompts)))]
        else:
            p = " ".join(rng.choice(VOCAB, size=int(rng.integers(1, 5))))
        prompts.append(p)
        turns = int(rng.integers(0, 20)) if rng.random() < 0.5 else 0
        hours = float(rng.random() * 3) if rng.random() < 0.5 else 0.0
        events.append(InteractionEvent.from_prompt(
            user, int(t), p, int(rng.integers(0, 3000)), int(rng.integers(1, 5)), turns, hours))
    return events


def random_config(rng: np.random.Generator) -> EngineConfig:
    return EngineConfig(
        period_hours=int(rng.choice([6, 24])),
        history_capacity=int(rng.integers(1, 51)),
        similarity_method=str(rng.choice(["edit", "keyword", "hybrid"])),
        grace_periods=int(rng.integers(0, 5)),
        complexity_window=int(rng.integers(1, 20)),
    )


def worst_mismatch(a, b):
    """(field, rel_err) of the largest relative disagreement between two result lists."""
    assert len(a) == len(b)
    worst = (None, 0.0)
    for x, y in zip(a, b):
        assert x.period_index == y.period_index
        for f in RESULT_FIELDS:
            u, v = getattr(x, f), getattr(y, f)
            if u is None or v is None:
                assert u is None and v is None, f
                continue
            if u == v:
                continue
            rel = abs(u - v) / max(abs(u), abs(v))
            if rel > worst[1]:
                worst = (f, rel)
    return worst


def results_close(a, b, rel=1e-9):
    f, err = worst_mismatch(a, b)
    return err <= rel


def ev(ts, prompt="task", tokens=1000, tier=1, turns=0, hours=0.0, user="u"):
    return InteractionEvent.from_prompt(user, ts, prompt, tokens, tier, turns, hours)

"""Deterministic synthetic traces, the four scenario profiles and figure series.

Prompt text is synthetic and built so similarity is controlled exactly:

* a *fresh* interaction gets four 3-character words from a private block of
  CJK ideographs, joined by a private separator symbol, so it shares no
  character and no keyword with any recent text (every scorer returns 0);
* a *duplicate* reuses a recently emitted representation verbatim (every
  scorer returns 1);
* a *partial* keeps two words of a recent representation and adds two fresh
  ones (keyword overlap 1/3).

Blocks cycle after ~1,300 fresh allocations, far beyond any history capacity.
"""

from __future__ import annotations

import configparser
import math
import unicodedata
from dataclasses import dataclass, replace
from importlib import resources

from .config import EngineConfig, InteractionEvent, PeriodResult, TaskRepresentation
from .engine import run_user
from .rng import Lcg64

__all__ = [
    "ProfileSpec",
    "EPOCH_START",
    "generate_trace",
    "load_scenarios",
    "run_scenario",
    "figure_traces",
    "SCENARIO_NAMES",
    "FIGURE_FAMILIES",
]

# 2025-01-06 00:00:00 UTC, a Monday, so weekday patterns line up with day indices.
EPOCH_START = 1736121600
DAY = 86400
RECENT = 8  # duplicates and partials draw their source from this many latest texts
WORD_LEN = 3
WORDS = 4

SCENARIO_NAMES = ("A", "B", "C", "D")
FIGURE_FAMILIES = ("anti_gaming", "temporal_response")


def _symbol_pool() -> list[str]:
    blocks = [(0x2190, 0x2200), (0x2200, 0x2300), (0x2300, 0x2400), (0x2500, 0x2580),
              (0x25A0, 0x2600), (0x2600, 0x2700), (0x2800, 0x2900)]
    out = []
    for lo, hi in blocks:
        for cp in range(lo, hi):
            c = chr(cp)
            if (unicodedata.category(c)[0] in "SP" and not c.isalnum() and not c.isspace()
                    and c.lower() == c and c != "_"):
                out.append(c)
    return out


def _letter_pool() -> list[str]:
    return [chr(cp) for cp in range(0x4E00, 0xA000)
            if chr(cp).isalnum() and unicodedata.category(chr(cp)) == "Lo"]


_SEPARATORS = _symbol_pool()
_LETTERS = _letter_pool()
_BLOCK = WORD_LEN * WORDS
_N_BLOCKS = len(_LETTERS) // _BLOCK


@dataclass(frozen=True)
class ProfileSpec:
    name: str
    days: int
    interactions_per_active_day: tuple[int, int]
    active_day_pattern: str  # daily | weekdays | weekly | burst:<d>,<d>,...
    token_lognormal: tuple[float, float]
    duplicate_prob: float
    partial_sim_prob: float
    complexity_mix: tuple[float, float, float, float]
    agent_turns_range: tuple[int, int] = (0, 0)
    run_hours_range: tuple[float, float] = (0.0, 0.0)
    leverage_level: int = 1
    seed: int = 0
    label: str = ""

    def __post_init__(self):
        for p in (self.duplicate_prob, self.partial_sim_prob):
            if not 0.0 <= p <= 1.0:
                raise ValueError("probabilities must lie in [0, 1]")
        if self.duplicate_prob + self.partial_sim_prob > 1.0 + 1e-12:
            raise ValueError("duplicate_prob + partial_sim_prob must not exceed 1")
        if len(self.complexity_mix) != 4 or any(p < 0 for p in self.complexity_mix):
            raise ValueError("complexity_mix needs four nonnegative probabilities")
        if abs(sum(self.complexity_mix) - 1.0) > 1e-9:
            raise ValueError("complexity_mix must sum to 1")
        if self.days < 1:
            raise ValueError("days must be positive")
        lo, hi = self.interactions_per_active_day
        if not 0 <= lo <= hi:
            raise ValueError("bad interactions_per_active_day range")
        if not 1 <= self.leverage_level <= 8:
            raise ValueError("leverage_level must be in 1..8")
        self.active_days()  # validates the pattern

    def active_days(self) -> list[int]:
        pat = self.active_day_pattern.strip()
        if pat == "daily":
            return list(range(self.days))
        if pat == "weekdays":
            return [d for d in range(self.days) if d % 7 < 5]
        if pat == "weekly":
            return list(range(0, self.days, 7))
        if pat.startswith("burst:"):
            days = sorted({int(x) for x in pat[6:].split(",") if x.strip()})
            if any(not 0 <= d < self.days for d in days):
                raise ValueError("burst day outside the simulated range")
            return days
        raise ValueError(f"unknown active_day_pattern {pat!r}")

    @property
    def user_id(self) -> str:
        return f"user-{self.name}"


class _TextSource:
    def __init__(self):
        self.fresh = 0

    def _block(self) -> tuple[list[str], str]:
        b = self.fresh
        self.fresh += 1
        start = (b % _N_BLOCKS) * _BLOCK
        letters = _LETTERS[start:start + _BLOCK]
        words = ["".join(letters[i * WORD_LEN:(i + 1) * WORD_LEN]) for i in range(WORDS)]
        return words, _SEPARATORS[b % len(_SEPARATORS)]

    def fresh_text(self) -> tuple[str, list[str]]:
        words, sep = self._block()
        return sep.join(words), words

    def partial_text(self, source_words: list[str]) -> tuple[str, list[str]]:
        new, sep = self._block()
        words = source_words[:WORDS // 2] + new[:WORDS - WORDS // 2]
        return sep.join(words), words


def generate_trace(spec: ProfileSpec) -> list[InteractionEvent]:
    """Seeded event list for one synthetic user.

    Every interaction consumes the same six draws whatever its branch, so two
    specs differing only in similarity probabilities share token counts.
    """
    rng = Lcg64(spec.seed)
    texts = _TextSource()
    emitted: list[tuple[TaskRepresentation, list[str]]] = []
    lo, hi = spec.interactions_per_active_day
    mu, sigma = spec.token_lognormal
    events = []
    for day in spec.active_days():
        n = rng.integer(lo, hi)
        slot = 10 * 3600 // max(n, 1)
        for k in range(n):
            ts = EPOCH_START + day * DAY + 8 * 3600 + k * slot + rng.integer(0, max(slot - 1, 0))
            u_kind = rng.random()
            u_pick = rng.random()
            tokens = max(1, int(round(rng.lognormal(mu, sigma))))
            tier = rng.categorical(spec.complexity_mix) + 1
            turns = rng.integer(*spec.agent_turns_range)
            hours = round(rng.uniform(*spec.run_hours_range), 6)

            recent = emitted[-RECENT:]
            source = recent[min(int(u_pick * len(recent)), len(recent) - 1)] if recent else None
            if source is not None and u_kind < spec.duplicate_prob:
                rep, words = source
            elif source is not None and u_kind < spec.duplicate_prob + spec.partial_sim_prob:
                text, words = texts.partial_text(source[1])
                rep = TaskRepresentation.from_text(text)
            else:
                text, words = texts.fresh_text()
                rep = TaskRepresentation.from_text(text)
            emitted.append((rep, words))
            events.append(InteractionEvent(spec.user_id, ts, rep, tokens, tier, turns, hours))
    return events


def _parse_pair(raw: str, cast):
    parts = [cast(x.strip()) for x in raw.split(",")]
    return tuple(parts)


def load_scenarios(path=None) -> dict[str, ProfileSpec]:
    """Read profile specs from the bundled (or a given) INI file."""
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    if path is None:
        text = resources.files("iiq").joinpath("data/scenarios.ini").read_text(encoding="utf-8")
        parser.read_string(text)
    else:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    specs = {}
    for name in parser.sections():
        if name == "meta":
            continue
        s = parser[name]
        specs[name] = ProfileSpec(
            name=name,
            label=s.get("label", ""),
            days=s.getint("days"),
            interactions_per_active_day=_parse_pair(s["interactions_per_active_day"], int),
            active_day_pattern=s["active_day_pattern"],
            token_lognormal=_parse_pair(s["token_lognormal"], float),
            duplicate_prob=s.getfloat("duplicate_prob"),
            partial_sim_prob=s.getfloat("partial_sim_prob"),
            complexity_mix=_parse_pair(s["complexity_mix"], float),
            agent_turns_range=_parse_pair(s["agent_turns_range"], int),
            run_hours_range=_parse_pair(s["run_hours_range"], float),
            leverage_level=s.getint("leverage_level"),
            seed=s.getint("seed"),
        )
    return specs


def _simulate(spec: ProfileSpec, config: EngineConfig,
              trace: list[InteractionEvent] | None = None):
    if trace is None:
        trace = generate_trace(spec)
    first = EPOCH_START // config.period_seconds
    last = (EPOCH_START + spec.days * DAY) // config.period_seconds - 1
    _, results = run_user(trace, config, leverage_level=spec.leverage_level,
                          start_period=first, end_period=last, user_id=spec.user_id)
    return trace, results


def run_scenario(name: str, config: EngineConfig | None = None, *,
                 seed: int | None = None) -> tuple[list[InteractionEvent], list[PeriodResult]]:
    """Simulate one of the built-in profiles A-D over its full horizon."""
    specs = load_scenarios()
    if name not in SCENARIO_NAMES or name not in specs:
        raise ValueError(f"unknown scenario {name!r}; expected one of {SCENARIO_NAMES}")
    spec = specs[name]
    if seed is not None:
        spec = replace(spec, seed=seed)
    return _simulate(spec, config or EngineConfig())


def _anti_gaming(config: EngineConfig, seed: int) -> list[dict]:
    regimes = {"high_duplicate": (1.0, 0.0), "medium_duplicate": (0.4, 0.3),
               "zero_duplicate": (0.0, 0.0)}
    rows = []
    for regime, (dup, part) in regimes.items():
        spec = ProfileSpec(name=regime, days=20, interactions_per_active_day=(1, 1),
                           active_day_pattern="daily", token_lognormal=(7.0, 0.4),
                           duplicate_prob=dup, partial_sim_prob=part,
                           complexity_mix=(0.0, 1.0, 0.0, 0.0), seed=seed)
        trace, results = _simulate(spec, config)
        by_period = {r.period_index: r for r in results}
        raw = eff = mass = 0.0
        for step, e in enumerate(trace, start=1):
            r = by_period[e.timestamp // config.period_seconds]
            raw += e.token_count
            eff += r.G
            mass += r.D
            rows.append({"regime": regime, "step": step, "tokens": e.token_count,
                         "raw_tokens_cum": raw, "effective_tokens_cum": eff,
                         "distinct_mass_cum": mass, "novel_ceiling": float(step),
                         "token_stock": r.T})
    return rows


TEMPORAL_DAYS = 45
_GAPS = {"short_interruption": range(20, 22), "long_interruption": range(20, 32)}


def _temporal_response(config: EngineConfig, seed: int) -> list[dict]:
    all_days = range(TEMPORAL_DAYS)
    patterns = {
        "recurring": "daily",
        "short_interruption": "burst:" + ",".join(
            str(d) for d in all_days if d not in _GAPS["short_interruption"]),
        "long_interruption": "burst:" + ",".join(
            str(d) for d in all_days if d not in _GAPS["long_interruption"]),
        "weekly_episodic": "weekly",
    }
    runs = []
    for name, pattern in patterns.items():
        spec = ProfileSpec(name=name, days=TEMPORAL_DAYS, interactions_per_active_day=(3, 6),
                           active_day_pattern=pattern, token_lognormal=(6.8, 0.5),
                           duplicate_prob=0.1, partial_sim_prob=0.2,
                           complexity_mix=(0.4, 0.4, 0.2, 0.0), agent_turns_range=(0, 3),
                           run_hours_range=(0.0, 0.2), seed=seed)
        trace, results = _simulate(spec, config)
        runs.append((name, results))
        if name == "long_interruption":
            no_grace = config.replace(grace_periods=0)
            _, cf = _simulate(spec, no_grace, trace)
            runs.append(("long_interruption_no_grace", cf))
    rows = []
    per_day = config.periods_per_day
    for name, results in runs:
        first = results[0].period_index
        for r in results:
            rows.append({"pattern": name, "day": (r.period_index - first) // per_day,
                         "period_index": r.period_index, "iiq_index": r.iiq_index,
                         "iai": r.iai, "T": r.T, "F": r.F, "R": r.R})
    return rows


def figure_traces(family: str, config: EngineConfig | None = None, *,
                  seed: int = 7) -> list[dict]:
    """Per-period (or per-interaction) series behind the illustrative figures.

    ``anti_gaming``: three 20-interaction regimes with identical raw tokens.
    ``temporal_response``: 45-day index paths for four usage patterns, plus the
    long-interruption path recomputed without a grace period.
    """
    config = config or EngineConfig()
    if family == "anti_gaming":
        return _anti_gaming(config, seed)
    if family == "temporal_response":
        return _temporal_response(config, seed)
    raise ValueError(f"unknown figure family {family!r}; expected one of {FIGURE_FAMILIES}")


def gap_days(pattern: str) -> range:
    """Inactive days of an interruption pattern in the temporal family."""
    return _GAPS[pattern]


def mean_daily_mass(results: list[PeriodResult], days: int) -> float:
    return math.fsum(r.D for r in results) / days

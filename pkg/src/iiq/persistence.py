"""Event-log ingestion, results/summary CSV and state snapshots.

Event log (UTF-8, one JSON object per line)::

    {"user_id": "u1", "ts": "2025-01-06T09:00:00Z", "prompt": "...", "tokens": 812,
     "tier": 2, "agent_turns": 0, "run_hours": 0.0, "level": 3, "department": "ops"}

``level`` is required on a user's first record. ``weight`` is accepted and
ignored (reserved for workflow weighting). Any other key is an error.

Snapshot: a JSON document, keys sorted, with ``format``, ``version``,
``config_hash``, ``users`` (id -> state) and ``departments`` (id -> latest
department). Written to a temp file then renamed into place.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from .config import (
    EngineConfig,
    InteractionEvent,
    PeriodResult,
    TaskRepresentation,
    UserState,
    config_hash,
)
from .engine import PeriodOrderError, init_state, period_of, run_user

__all__ = [
    "IngestError",
    "SnapshotError",
    "Snapshot",
    "RESULT_COLUMNS",
    "parse_event_log",
    "ingest",
    "load_snapshot",
    "save_snapshot",
    "dump_snapshot",
    "write_results_csv",
    "read_results_csv",
    "format_ts",
    "event_to_record",
]

SNAPSHOT_FORMAT = "iiq-snapshot"
SNAPSHOT_VERSION = 1

RESULT_COLUMNS = ["user_id", "period_index", "period_start_utc", "T", "F", "R", "V", "C", "A",
                  "G", "D", "U", "iai", "iiq_index", "delta_iiq", "est_hours_saved", "est_usd"]

_REQUIRED = {"user_id", "ts", "prompt", "tokens", "tier"}
_OPTIONAL = {"agent_turns", "run_hours", "level", "department", "weight"}


class IngestError(ValueError):
    """Bad event record or an event the state cannot accept."""


class SnapshotError(ValueError):
    pass


@dataclass
class ParsedRecord:
    line: int
    event: InteractionEvent
    level: int | None
    weight: float | None = None


@dataclass
class Snapshot:
    config_hash: str
    users: dict[str, UserState] = field(default_factory=dict)
    departments: dict[str, str] = field(default_factory=dict)
    version: int = SNAPSHOT_VERSION


def format_ts(epoch: int) -> str:
    return datetime.fromtimestamp(epoch, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def _parse_ts(raw) -> int:
    if not isinstance(raw, str):
        raise ValueError("expected an ISO-8601 string")
    text = raw.strip()
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return math.floor(dt.timestamp())


def _int_field(rec: dict, key: str, default=None) -> int:
    v = rec.get(key, default)
    if isinstance(v, bool) or not isinstance(v, int):
        if isinstance(v, float) and v.is_integer():
            return int(v)
        raise ValueError("expected an integer")
    return v


def _parse_line(lineno: int, text: str) -> ParsedRecord:
    def fail(key: str | None, why: str) -> IngestError:
        where = f"line {lineno}" + (f", field {key!r}" if key else "")
        return IngestError(f"{where}: {why}")

    try:
        rec = json.loads(text)
    except json.JSONDecodeError as exc:
        raise fail(None, f"not valid JSON ({exc.msg})") from None
    if not isinstance(rec, dict):
        raise fail(None, "expected a JSON object")
    unknown = sorted(set(rec) - _REQUIRED - _OPTIONAL)
    if unknown:
        raise fail(unknown[0], "unknown field")
    for key in sorted(_REQUIRED - set(rec)):
        raise fail(key, "missing required field")

    key = None
    try:
        key = "user_id"
        uid = rec["user_id"]
        if not isinstance(uid, str) or not uid:
            raise ValueError("expected a non-empty string")
        key = "ts"
        ts = _parse_ts(rec["ts"])
        key = "prompt"
        if not isinstance(rec["prompt"], str):
            raise ValueError("expected a string")
        key = "tokens"
        tokens = _int_field(rec, "tokens")
        if tokens < 0:
            raise ValueError("expected a nonnegative integer")
        key = "tier"
        tier = _int_field(rec, "tier")
        if not 1 <= tier <= 4:
            raise ValueError("expected an integer in 1..4")
        key = "agent_turns"
        turns = _int_field(rec, "agent_turns", 0)
        if turns < 0:
            raise ValueError("expected a nonnegative integer")
        key = "run_hours"
        hours = rec.get("run_hours", 0.0)
        if isinstance(hours, bool) or not isinstance(hours, (int, float)) or not math.isfinite(hours):
            raise ValueError("expected a number")
        if hours < 0:
            raise ValueError("expected a nonnegative number")
        key = "level"
        level = _int_field(rec, "level") if rec.get("level") is not None else None
        if level is not None and not 1 <= level <= 8:
            raise ValueError("expected an integer in 1..8")
        key = "department"
        dept = rec.get("department")
        if dept is not None and not isinstance(dept, str):
            raise ValueError("expected a string")
        key = "weight"
        weight = rec.get("weight")
        if weight is not None and (isinstance(weight, bool) or not isinstance(weight, (int, float))):
            raise ValueError("expected a number")
        key = None
        event = InteractionEvent(uid, ts, TaskRepresentation.from_text(rec["prompt"]), tokens,
                                 tier, turns, float(hours), dept)
    except ValueError as exc:
        raise fail(key, str(exc)) from None
    return ParsedRecord(lineno, event, level, weight)


def parse_event_log(lines: Iterable[str]) -> list[ParsedRecord]:
    out = []
    for lineno, line in enumerate(lines, start=1):
        if line.strip():
            out.append(_parse_line(lineno, line))
    return out


def event_to_record(event: InteractionEvent, level: int | None = None) -> dict:
    """Wire form of an event (prompt carries the normalised text)."""
    rec = {"user_id": event.user_id, "ts": format_ts(event.timestamp),
           "prompt": event.task_repr.normalized_text, "tokens": event.token_count,
           "tier": event.complexity_tier, "agent_turns": event.agent_turns,
           "run_hours": event.active_run_hours}
    if level is not None:
        rec["level"] = level
    if event.department is not None:
        rec["department"] = event.department
    return rec


def write_event_log(path: str | Path, events: Sequence[InteractionEvent], level: int) -> None:
    seen = set()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in events:
            rec = event_to_record(e, None if e.user_id in seen else level)
            seen.add(e.user_id)
            fh.write(json.dumps(rec, ensure_ascii=False) + "\n")


def ingest(lines: Iterable[str], config: EngineConfig,
           snapshot: Snapshot | None = None) -> tuple[Snapshot, list[PeriodResult]]:
    """Run a parsed event log through the engine on top of ``snapshot``.

    Every user known to the snapshot or the log is advanced to the log's last
    period. Results are ordered by (period_index, user_id), so ingesting a log in
    period-aligned pieces concatenates to the one-shot output.
    """
    h = config_hash(config)
    if snapshot is None:
        snapshot = Snapshot(config_hash=h)
    elif snapshot.config_hash != h:
        raise SnapshotError("snapshot was written under a different config (hash mismatch)")

    records = parse_event_log(lines)
    by_user: dict[str, list[ParsedRecord]] = {}
    for r in records:
        by_user.setdefault(r.event.user_id, []).append(r)
    if any(r.weight is not None for r in records):
        warnings.warn("event field 'weight' is reserved for workflow weighting and is ignored",
                      UserWarning, stacklevel=2)

    users = dict(snapshot.users)
    departments = dict(snapshot.departments)
    for uid, recs in by_user.items():
        for a, b in zip(recs, recs[1:]):
            if b.event.timestamp < a.event.timestamp:
                raise IngestError(f"line {b.line}: events for user {uid!r} are not in time order")
        state = users.get(uid)
        if state is None:
            if recs[0].level is None:
                raise IngestError(f"line {recs[0].line}: unknown user {uid!r} without level")
            users[uid] = init_state(recs[0].level, config)
        elif state.last_period_index is not None:
            first = recs[0]
            if period_of(first.event.timestamp, config) <= state.last_period_index:
                raise IngestError(
                    f"line {first.line}: timestamp earlier than frontier for user {uid!r}")
        for r in recs:
            if r.level is not None and r.level != users[uid].leverage_level:
                raise IngestError(f"line {r.line}: leverage level change for user {uid!r} "
                                  f"({users[uid].leverage_level} -> {r.level}) is not supported")
            if r.event.department is not None:
                departments[uid] = r.event.department

    if not records:
        return Snapshot(h, users, departments), []
    end = max(period_of(r.event.timestamp, config) for r in records)

    results: list[PeriodResult] = []
    for uid in sorted(users):
        state = users[uid]
        events = [r.event for r in by_user.get(uid, ())]
        if not events and (state.last_period_index is None or state.last_period_index >= end):
            continue
        try:
            users[uid], res = run_user(events, config, state=state, end_period=end, user_id=uid)
        except PeriodOrderError as exc:
            raise IngestError(f"user {uid!r}: {exc}") from None
        results.extend(res)
    results.sort(key=lambda r: (r.period_index, r.user_id))
    return Snapshot(h, users, departments), results


# --- snapshot -----------------------------------------------------------------

def _state_to_json(s: UserState) -> dict:
    return {
        "leverage_level": s.leverage_level,
        "token_stock": s.token_stock,
        "freq_raw": s.freq_raw,
        "inactive_streak": s.inactive_streak,
        "complexity_window": [list(e) for e in s.complexity_window_entries],
        "history": [{"text": h.normalized_text, "keywords": sorted(h.keyword_set)}
                    for h in s.history],
        "previous_index": s.previous_index,
        "previous_delta": s.previous_delta,
        "last_period_index": s.last_period_index,
    }


def _state_from_json(d: dict) -> UserState:
    return UserState(
        leverage_level=int(d["leverage_level"]),
        token_stock=float(d["token_stock"]),
        freq_raw=float(d["freq_raw"]),
        inactive_streak=int(d["inactive_streak"]),
        complexity_window_entries=tuple((float(a), float(b)) for a, b in d["complexity_window"]),
        history=tuple(TaskRepresentation(h["text"], frozenset(h["keywords"]))
                      for h in d["history"]),
        previous_index=None if d["previous_index"] is None else float(d["previous_index"]),
        previous_delta=None if d["previous_delta"] is None else float(d["previous_delta"]),
        last_period_index=None if d["last_period_index"] is None else int(d["last_period_index"]),
    )


def dump_snapshot(snap: Snapshot) -> str:
    doc = {
        "format": SNAPSHOT_FORMAT,
        "version": snap.version,
        "config_hash": snap.config_hash,
        "users": {uid: _state_to_json(s) for uid, s in sorted(snap.users.items())},
        "departments": dict(sorted(snap.departments.items())),
    }
    return json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=1) + "\n"


def parse_snapshot(text: str) -> Snapshot:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SnapshotError(f"snapshot is not valid JSON ({exc.msg})") from None
    if not isinstance(doc, dict) or doc.get("format") != SNAPSHOT_FORMAT:
        raise SnapshotError("not an iiq snapshot")
    if doc.get("version") != SNAPSHOT_VERSION:
        raise SnapshotError(f"unsupported snapshot version {doc.get('version')!r}")
    try:
        users = {uid: _state_from_json(s) for uid, s in doc["users"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise SnapshotError(f"corrupt snapshot state: {exc}") from None
    return Snapshot(doc["config_hash"], users, dict(doc.get("departments", {})), doc["version"])


def save_snapshot(path: str | Path, snap: Snapshot) -> None:
    path = Path(path)
    data = dump_snapshot(snap).encode("utf-8")
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=path.name + ".", suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_snapshot(path: str | Path) -> Snapshot:
    return parse_snapshot(Path(path).read_text(encoding="utf-8"))


# --- CSV ----------------------------------------------------------------------

def fmt(x: float | None) -> str:
    """9 significant digits; empty for missing values."""
    if x is None:
        return ""
    return format(x, ".9g")


def _result_row(r: PeriodResult, config: EngineConfig) -> list[str]:
    return [r.user_id, str(r.period_index), format_ts(r.period_index * config.period_seconds),
            *(fmt(v) for v in (r.T, r.F, r.R, r.V, r.C, r.A, r.G, r.D, r.U, r.iai,
                               r.iiq_index, r.delta_iiq, r.hours_saved, r.usd_impact))]


def results_csv(results: Sequence[PeriodResult], config: EngineConfig) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RESULT_COLUMNS)
    for r in results:
        w.writerow(_result_row(r, config))
    return buf.getvalue()


def write_results_csv(path: str | Path, results: Sequence[PeriodResult],
                      config: EngineConfig) -> None:
    Path(path).write_text(results_csv(results, config), encoding="utf-8", newline="")


def read_results_csv(path: str | Path) -> list[PeriodResult]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULT_COLUMNS:
            raise ValueError(f"{path}: unexpected results columns {reader.fieldnames}")
        out = []
        for row in reader:
            f = {k: float(row[k]) for k in ("T", "F", "R", "V", "C", "A", "G", "D", "U",
                                            "iai", "iiq_index")}
            out.append(PeriodResult(
                user_id=row["user_id"], period_index=int(row["period_index"]), **f,
                delta_iiq=float(row["delta_iiq"]) if row["delta_iiq"] else None,
                hours_saved=float(row["est_hours_saved"]), usd_impact=float(row["est_usd"])))
    return out


def write_rows_csv(path: str | Path, rows: Sequence[dict], columns: Sequence[str]) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(v) if isinstance(v, float) else ("" if v is None else v)
                        for v in (row.get(c) for c in columns)])

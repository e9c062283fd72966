"""Command-line entry point: ``iiq <command> ...``."""

from __future__ import annotations

import argparse
import sys
import warnings
from collections import defaultdict
from pathlib import Path

from .aggregation import summarize, weekly_rollup
from .config import ConfigError, EngineConfig, config_hash, load_config
from .engine import PeriodOrderError, convert_decay, convert_lambda
from .persistence import (
    IngestError,
    SnapshotError,
    format_ts,
    ingest,
    load_snapshot,
    parse_event_log,
    read_results_csv,
    results_csv,
    save_snapshot,
    write_event_log,
    write_results_csv,
    write_rows_csv,
)
from .simulator import FIGURE_FAMILIES, SCENARIO_NAMES, figure_traces, load_scenarios, run_scenario

SUMMARY_COLUMNS = ["period_index", "period_start_utc", "department", "user_count", "mean_index",
                   "median_index", "active_user_share", "top_decile_share", "gini",
                   "est_total_hours_saved", "est_total_usd"]
WEEKLY_COLUMNS = ["user_id", "week", "periods", "est_hours_uncapped", "est_hours_saved",
                  "est_usd"]
ANTI_GAMING_COLUMNS = ["regime", "step", "tokens", "raw_tokens_cum", "effective_tokens_cum",
                       "distinct_mass_cum", "novel_ceiling", "token_stock"]
TEMPORAL_COLUMNS = ["pattern", "day", "period_index", "iiq_index", "iai", "T", "F", "R"]


class CliError(Exception):
    pass


def _config(path: str | None) -> EngineConfig:
    if path is None:
        return EngineConfig()
    if not Path(path).is_file():
        raise CliError(f"config file not found: {path}")
    return load_config(path)


def _read_lines(path: str) -> list[str]:
    p = Path(path)
    if not p.is_file():
        raise CliError(f"file not found: {path}")
    return p.read_text(encoding="utf-8").splitlines()


def cmd_ingest(args) -> None:
    config = _config(args.config)
    snap = None
    if args.state and Path(args.state).exists():
        snap = load_snapshot(args.state)
    new_snap, results = ingest(_read_lines(args.events), config, snap)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_results_csv(out / "results.csv", results, config)
    save_snapshot(Path(args.state) if args.state else out / "state.json", new_snap)


def cmd_score(args) -> None:
    if not Path(args.state).is_file():
        raise CliError(f"state file not found: {args.state}")
    snap = load_snapshot(args.state)
    for uid, s in sorted(snap.users.items()):
        if s.previous_index is None:
            continue
        delta = "" if s.previous_delta is None else format(s.previous_delta, ".9g")
        print(f"{uid},{s.previous_index:.9g},{delta}")


def cmd_aggregate(args) -> None:
    config = _config(args.config)
    if not Path(args.results).is_file():
        raise CliError(f"results file not found: {args.results}")
    if not Path(args.states).is_file():
        raise CliError(f"state file not found: {args.states}")
    results = read_results_csv(args.results)
    snap = load_snapshot(args.states)
    if snap.config_hash != config_hash(config):
        raise CliError("snapshot was written under a different config (pass --config)")
    # streaks are only known at each user's frontier, so summarise those periods
    frontier = {(uid, s.last_period_index) for uid, s in snap.users.items()}
    by_period = defaultdict(list)
    for r in results:
        if (r.user_id, r.period_index) in frontier:
            by_period[r.period_index].append(r)
    rows = []
    for p in sorted(by_period):
        summ = summarize(by_period[p], snap.users, config, departments=snap.departments)
        start = format_ts(p * config.period_seconds)
        rows.append({"period_index": p, "period_start_utc": start, "department": "",
                     "user_count": summ.user_count, "mean_index": summ.mean_index,
                     "median_index": summ.median_index,
                     "active_user_share": summ.active_user_share,
                     "top_decile_share": summ.top_decile_share, "gini": summ.gini,
                     "est_total_hours_saved": summ.total_hours_saved,
                     "est_total_usd": summ.total_usd})
        for dept, d in summ.per_department.items():
            rows.append({"period_index": p, "period_start_utc": start, "department": dept,
                         "user_count": d.user_count, "mean_index": d.mean_index,
                         "median_index": d.median_index})
    write_rows_csv(args.out, rows, SUMMARY_COLUMNS)
    if args.weekly:
        write_rows_csv(args.weekly, weekly_rollup(results, config), WEEKLY_COLUMNS)


def _svg_chart(series: dict[str, list[tuple[float, float]]], title: str) -> str:
    w, h, pad = 640, 360, 40
    xs = [x for pts in series.values() for x, _ in pts]
    ys = [y for pts in series.values() for _, y in pts]
    x0, x1 = min(xs), max(xs) or 1
    y0, y1 = 0.0, max(ys) or 1
    colors = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#7f7f7f", "#9467bd"]

    def sx(x):
        return pad + (x - x0) / ((x1 - x0) or 1) * (w - 2 * pad)

    def sy(y):
        return h - pad - (y - y0) / ((y1 - y0) or 1) * (h - 2 * pad)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}">',
             f'<text x="{pad}" y="20" font-size="14">{title}</text>']
    for i, (name, pts) in enumerate(series.items()):
        c = colors[i % len(colors)]
        dash = ' stroke-dasharray="6,4"' if "no_grace" in name or "ceiling" in name else ""
        path = " ".join(f"{sx(x):.1f},{sy(y):.1f}" for x, y in pts)
        parts.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.5"{dash} '
                     f'points="{path}"/>')
        parts.append(f'<text x="{w - pad - 200}" y="{40 + 14 * i}" font-size="11" '
                     f'fill="{c}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_simulate(args) -> None:
    config = _config(args.config)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = args.scenario
    if name in SCENARIO_NAMES:
        trace, results = run_scenario(name, config, seed=args.seed)
        level = load_scenarios()[name].leverage_level
        write_event_log(out / f"scenario_{name}_events.jsonl", trace, level)
        write_results_csv(out / f"scenario_{name}_results.csv", results, config)
        series = {"iiq_index": [(r.period_index - results[0].period_index, r.iiq_index)
                                for r in results]}
    else:
        kwargs = {} if args.seed is None else {"seed": args.seed}
        rows = figure_traces(name, config, **kwargs)
        if name == "anti_gaming":
            write_rows_csv(out / "anti_gaming.csv", rows, ANTI_GAMING_COLUMNS)
            series = defaultdict(list)
            for r in rows:
                series[r["regime"]].append((r["step"], r["distinct_mass_cum"]))
            series["novel_ceiling"] = [(r["step"], r["novel_ceiling"]) for r in rows
                                       if r["regime"] == "zero_duplicate"]
        else:
            write_rows_csv(out / "temporal_response.csv", rows, TEMPORAL_COLUMNS)
            series = defaultdict(list)
            for r in rows:
                series[r["pattern"]].append((r["period_index"], r["iiq_index"]))
    if args.svg:
        (out / f"{name}.svg").write_text(_svg_chart(dict(series), name), encoding="utf-8")


def cmd_convert(args) -> None:
    if not 0 < args.alpha < 1:
        raise CliError("--alpha must lie in (0, 1)")
    if args.period_hours <= 0 or args.period_hours > 24:
        raise CliError("--period-hours must lie in (0, 24]")
    print(f"alpha_periodic = {convert_decay(args.alpha, args.period_hours)!r}")
    if args.lambda_daily is not None:
        print(f"lambda_periodic = {convert_lambda(args.lambda_daily, args.period_hours)!r}")


def cmd_oracle(args) -> None:
    from .oracle import oracle_evaluate

    config = _config(args.config)
    records = parse_event_log(_read_lines(args.events))
    by_user = defaultdict(list)
    levels = {}
    for r in records:
        by_user[r.event.user_id].append(r.event)
        if r.level is not None:
            levels.setdefault(r.event.user_id, r.level)
    results = []
    for uid in sorted(by_user):
        if uid not in levels:
            raise CliError(f"unknown user {uid!r} without level")
        results.extend(oracle_evaluate(by_user[uid], config, levels[uid], user_id=uid))
    results.sort(key=lambda r: (r.period_index, r.user_id))
    sys.stdout.write(results_csv(results, config))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iiq", description="AI adoption index engine")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="{ingest,score,aggregate,simulate,convert}")

    p = sub.add_parser("ingest", help="score an event log and update the state snapshot")
    p.add_argument("--events", required=True)
    p.add_argument("--config")
    p.add_argument("--state", help="snapshot to resume from and overwrite")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("score", help="print each user's latest index and delta")
    p.add_argument("--state", required=True)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("aggregate", help="organisation summary at the snapshot frontier")
    p.add_argument("--results", required=True)
    p.add_argument("--states", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--config")
    p.add_argument("--weekly", help="also write per-user weekly hours/USD here")
    p.set_defaults(func=cmd_aggregate)

    p = sub.add_parser("simulate", help="synthetic scenario or figure series")
    p.add_argument("--scenario", required=True, choices=SCENARIO_NAMES + FIGURE_FAMILIES)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--config")
    p.add_argument("--svg", action="store_true", help="also draw a simple line chart")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("convert", help="daily rates to per-period rates")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--period-hours", type=float, required=True)
    p.add_argument("--lambda", dest="lambda_daily", type=float)
    p.set_defaults(func=cmd_convert)

    # debugging aid, deliberately left out of the help listing
    p = sub.add_parser("oracle")
    p.add_argument("--events", required=True)
    p.add_argument("--config")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("always")
            args.func(args)
    except (CliError, ConfigError, IngestError, SnapshotError, PeriodOrderError,
            OSError, ValueError) as exc:
        print(f"iiq: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

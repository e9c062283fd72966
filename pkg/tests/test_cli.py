import csv
import subprocess
import sys

import pytest

from iiq.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_convert(capsys):
    code, out, _ = run(capsys, "convert", "--alpha", "0.05", "--period-hours", "6")
    assert code == 0
    assert out.startswith("alpha_periodic = 0.012741")
    code, out, _ = run(capsys, "convert", "--alpha", "0.05", "--period-hours", "6",
                       "--lambda", "0.3")
    assert "lambda_periodic = 0.075" in out
    code, _, err = run(capsys, "convert", "--alpha", "1.5", "--period-hours", "6")
    assert code == 1 and err.startswith("iiq: error:") and err.count("\n") == 1


def test_simulate_ingest_score_aggregate(capsys, tmp_path):
    sim = tmp_path / "sim"
    code, _, _ = run(capsys, "simulate", "--scenario", "A", "--out-dir", str(sim), "--svg")
    assert code == 0
    with open(sim / "scenario_A_results.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 30
    assert (sim / "A.svg").read_text().startswith("<svg")

    out = tmp_path / "out"
    code, _, err = run(capsys, "ingest", "--events", str(sim / "scenario_A_events.jsonl"),
                       "--out-dir", str(out))
    assert code == 0, err
    # ingesting the simulator's own log reproduces its results exactly
    assert (out / "results.csv").read_bytes() == (sim / "scenario_A_results.csv").read_bytes()

    code, _, err = run(capsys, "ingest", "--events", str(sim / "scenario_A_events.jsonl"),
                       "--state", str(out / "state.json"), "--out-dir", str(out))
    assert code == 1 and "timestamp earlier than frontier" in err

    code, printed, _ = run(capsys, "score", "--state", str(out / "state.json"))
    uid, index, delta = printed.strip().split(",")
    assert code == 0 and uid == "user-A"
    assert float(index) == pytest.approx(float(rows[-1]["iiq_index"]), rel=1e-8)

    summary = tmp_path / "summary.csv"
    weekly = tmp_path / "weekly.csv"
    code, _, err = run(capsys, "aggregate", "--results", str(out / "results.csv"),
                       "--states", str(out / "state.json"), "--out", str(summary),
                       "--weekly", str(weekly))
    assert code == 0, err
    with open(summary, newline="") as fh:
        srows = list(csv.DictReader(fh))
    assert len(srows) == 1 and srows[0]["user_count"] == "1"
    with open(weekly, newline="") as fh:
        assert all(float(r["est_hours_saved"]) <= 30 for r in csv.DictReader(fh))


def test_simulate_figures(capsys, tmp_path):
    for fam, name in (("anti_gaming", "anti_gaming.csv"),
                      ("temporal_response", "temporal_response.csv")):
        code, _, _ = run(capsys, "simulate", "--scenario", fam, "--out-dir", str(tmp_path))
        assert code == 0 and (tmp_path / name).stat().st_size > 0


def test_simulate_same_seed_same_bytes(capsys, tmp_path):
    for d in ("a", "b"):
        assert run(capsys, "simulate", "--scenario", "D", "--seed", "11",
                   "--out-dir", str(tmp_path / d))[0] == 0
    for f in ("scenario_D_events.jsonl", "scenario_D_results.csv"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_score_empty_state(capsys, tmp_path):
    events = tmp_path / "empty.jsonl"
    events.write_text("")
    assert run(capsys, "ingest", "--events", str(events), "--out-dir", str(tmp_path))[0] == 0
    code, out, _ = run(capsys, "score", "--state", str(tmp_path / "state.json"))
    assert code == 0 and out == ""


def test_errors(capsys, tmp_path):
    code, _, err = run(capsys, "score", "--state", str(tmp_path / "nope.json"))
    assert code == 1 and "not found" in err
    code, _, err = run(capsys, "ingest", "--events", str(tmp_path / "nope"),
                       "--out-dir", str(tmp_path))
    assert code == 1 and "not found" in err
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit) as exc:
        main(["convert", "--alpha", "0.05", "--period-hours", "6", "--bogus"])
    assert exc.value.code != 0


def test_bad_event_line(capsys, tmp_path):
    events = tmp_path / "bad.jsonl"
    events.write_text('{"user_id": "u", "ts": "2025-01-01T00:00:00Z", "prompt": "x", '
                      '"tokens": 1, "tier": 9, "level": 1}\n')
    code, _, err = run(capsys, "ingest", "--events", str(events), "--out-dir", str(tmp_path))
    assert code == 1 and "line 1, field 'tier'" in err


def test_oracle_subcommand(capsys, tmp_path):
    sim = tmp_path / "sim"
    run(capsys, "simulate", "--scenario", "B", "--out-dir", str(sim))
    code, out, _ = run(capsys, "oracle", "--events", str(sim / "scenario_B_events.jsonl"))
    assert code == 0
    engine = (sim / "scenario_B_results.csv").read_text().splitlines()
    oracle = out.splitlines()
    assert oracle[0] == engine[0] and len(oracle) == len(engine)
    # hidden from the command listing
    code = subprocess.run([sys.executable, "-m", "iiq", "--help"], capture_output=True,
                          text=True)
    assert "oracle" not in code.stdout


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "iiq.conf"
    cfg.write_text("period_hours = 6\n")
    sim = tmp_path / "sim"
    assert run(capsys, "simulate", "--scenario", "A", "--out-dir", str(sim),
               "--config", str(cfg))[0] == 0
    with open(sim / "scenario_A_results.csv", newline="") as fh:
        assert len(list(csv.DictReader(fh))) == 120
    code, _, err = run(capsys, "ingest", "--events", str(sim / "scenario_A_events.jsonl"),
                       "--config", str(tmp_path / "missing.conf"), "--out-dir", str(tmp_path))
    assert code == 1 and "config file not found" in err

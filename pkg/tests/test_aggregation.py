import itertools
import warnings

import pytest
from hypothesis import given
from hypothesis import strategies as st
from support import BASE, DAY, ev

from iiq import EngineConfig, PeriodResult, UserState, run_user
from iiq.aggregation import gini, summarize, week_of, weekly_rollup

P = BASE // DAY


def res(uid, index, hours=0.0, V=1.0, period=P):
    return PeriodResult(uid, period, 1, 1, 1, V, 1, 1, 0, 0, 0, 0, index, None, hours, 0)


def states(uids, streak=0):
    return {u: UserState(leverage_level=1, inactive_streak=streak, last_period_index=P)
            for u in uids}


def pairwise_gini(xs):
    n = len(xs)
    total = sum(xs)
    if total == 0:
        return 0.0
    return sum(abs(a - b) for a, b in itertools.product(xs, xs)) / (2 * n * n * (total / n))


def test_gini_examples():
    assert gini([5, 5, 5]) == 0
    assert gini([0, 0, 0]) == 0
    assert gini([0, 100]) == pytest.approx(0.5, abs=1e-12)
    assert pairwise_gini([0, 100]) == 0.5
    assert gini([0] * 9 + [100]) == pytest.approx(0.9, abs=1e-12)
    with pytest.raises(ValueError, match="empty"):
        gini([])
    with pytest.raises(ValueError, match="nonnegative"):
        gini([1, -1])


@given(st.lists(st.floats(0, 1000), min_size=1, max_size=40))
def test_gini_matches_pairwise(xs):
    assert gini(xs) == pytest.approx(pairwise_gini(xs), abs=1e-9)
    assert 0 <= gini(xs) <= 1


@given(st.lists(st.floats(0, 1000), min_size=1, max_size=40), st.floats(1e-3, 1e3))
def test_gini_scale_invariant(xs, c):
    assert gini([c * x for x in xs]) == pytest.approx(gini(xs), abs=1e-9)


def test_summary_single_user(config):
    s = summarize([res("a", 500)], states(["a"]), config)
    assert (s.mean_index, s.median_index, s.top_decile_share, s.gini) == (500, 500, 1.0, 0)
    assert s.user_count == 1 and s.active_user_share == 1.0 and s.period_index == P


def test_summary_equal_users(config):
    uids = [f"u{i}" for i in range(7)]
    s = summarize([res(u, 321) for u in uids], states(uids), config)
    assert s.gini == 0 and s.active_user_share == 1.0 and s.median_index == 321


def test_summary_concentrated(config):
    uids = [f"u{i}" for i in range(10)]
    rs = [res(u, 100 if u == "u3" else 0) for u in uids]
    s = summarize(rs, states(uids), config)
    assert s.gini == pytest.approx(0.9, abs=1e-12)
    assert s.top_decile_share == 1.0
    assert summarize([res(u, 0) for u in uids], states(uids), config).top_decile_share == 0


def test_top_decile_ties_by_user_id(config):
    uids = [f"u{i:02d}" for i in range(11)]  # ceil(11/10) = 2 users in the top decile
    rs = [res(u, 10) for u in uids]
    assert summarize(rs, states(uids), config).top_decile_share == pytest.approx(2 / 11)


def test_summary_empty(config):
    s = summarize([], {}, config)
    assert s.is_empty and s.period_index is None


def test_summary_errors(config):
    with pytest.raises(ValueError, match="several periods"):
        summarize([res("a", 1), res("b", 1, period=P + 1)], states("ab"), config)
    with pytest.raises(ValueError, match="no state"):
        summarize([res("a", 1)], {}, config)


def test_median_within_bounds(config):
    uids = list("abcdef")
    vals = [0, 3, 900, 17, 17, 400]
    s = summarize([res(u, v) for u, v in zip(uids, vals)], states(uids), config)
    assert min(vals) <= s.median_index <= max(vals)


def test_power_user_masking(config):
    end = P + 29
    power = [ev(BASE + d * DAY, f"task {d} x{d * 7}", tokens=3000, tier=3, user="power")
             for d in range(30)]
    results, sts = [], {}
    s, rs = run_user(power, config, leverage_level=6)
    results.append(rs[-1])
    sts["power"] = s
    for i in range(9):
        uid = f"idle{i}"
        s, rs = run_user([ev(BASE, "hello", tokens=500, user=uid)], config, leverage_level=1,
                         end_period=end)
        results.append(rs[-1])
        sts[uid] = s
    summ = summarize(results, sts, config)
    assert summ.active_user_share == pytest.approx(0.1)
    assert summ.mean_index > 10 * summ.median_index
    assert summ.top_decile_share > 0.5


def test_departments(config):
    uids = ["a", "b", "c", "d"]
    rs = [res("a", 100), res("b", 300), res("c", 50), res("d", 0)]
    depts = {"a": "eng", "b": "eng", "c": "ops", "d": None}
    s = summarize(rs, states(uids), config, departments=depts)
    assert set(s.per_department) == {"eng", "ops"}
    assert s.per_department["eng"].mean_index == 200
    assert s.per_department["eng"].user_count == 2
    assert s.per_department["ops"].median_index == 50


def test_activity_threshold(config):
    g = config.grace_periods
    at = summarize([res("a", 1)], states("a", streak=g), config)
    past = summarize([res("a", 1)], states("a", streak=g + 1), config)
    assert at.active_user_share == 1 and past.active_user_share == 0


def test_hours_capped_in_summary(config):
    s = summarize([res("a", 1, hours=100.0, V=2.0), res("b", 1, hours=5.0)], states("ab"),
                  config)
    assert s.total_hours_saved == 35
    assert s.total_usd == pytest.approx(30 * 40 * 2 + 5 * 40)


def test_workflow_weights_warn(config):
    with pytest.warns(UserWarning, match="workflow weights"):
        summarize([res("a", 1)], states("a"), config, workflow_weights={"a": 2.0})
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        summarize([res("a", 1)], states("a"), config)


def test_weekly_rollup_cap():
    config = EngineConfig()
    monday = 1736121600 // DAY  # 2025-01-06
    assert week_of(monday - 1, config) + 1 == week_of(monday, config) == week_of(monday + 6, config)
    # a Monday-to-Sunday week of daily results, each claiming 6 hours
    rs = [res("a", 1, hours=6.0, V=2.5, period=monday + d) for d in range(7)]
    rows = weekly_rollup(rs, config)
    assert len(rows) == 1
    row = rows[0]
    assert row["periods"] == 7 and row["est_hours_uncapped"] == 42
    assert row["est_hours_saved"] == 30
    assert row["est_usd"] == pytest.approx(30 * 40 * 2.5)
    # the next Monday starts a new week
    rows = weekly_rollup(rs + [res("a", 1, hours=1.0, V=2.5, period=monday + 7)], config)
    assert [r["est_hours_saved"] for r in rows] == [30, 1]


@given(st.lists(st.floats(0, 1e4), min_size=1, max_size=60))
def test_weekly_cap_never_exceeded(hours):
    config = EngineConfig()
    rs = [res("a", 1, hours=h, period=P + i) for i, h in enumerate(hours)]
    for row in weekly_rollup(rs, config):
        assert row["est_hours_saved"] <= 30

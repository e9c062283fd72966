import pytest
from hypothesis import given
from hypothesis import strategies as st

from iiq.interpretation import InterpretationInputs, hours_saved, iiq_index, usd_impact


def test_index_examples():
    assert iiq_index(0) == 0
    assert iiq_index(5e7) == 1000
    assert iiq_index(1e12) == 1000
    # 4 / log10(5e7) * 1000, mpmath
    assert iiq_index(9999) == pytest.approx(519.5500174370366, rel=1e-12)


def test_hours_examples():
    assert hours_saved(InterpretationInputs(0, 1, 1, 1, 40)) == 0
    # unbounded term 100 hours against a 40-hour week at rho 0.75
    assert hours_saved(InterpretationInputs(1_000_000, 1, 1, 1, 40, k=0.1, rho=0.75)) == 30
    assert hours_saved(InterpretationInputs(10_000, 2, 1.2, 1, 40, k=0.1)) == pytest.approx(2.4)


def test_usd_examples():
    assert usd_impact(0, 40, 1) == 0
    assert usd_impact(30, 40, 1) == 1200
    assert usd_impact(2.4, 40, 2.5) == pytest.approx(240)


@given(st.floats(0, 1e12), st.floats(0, 1e12))
def test_index_monotone_bounded(a, b):
    lo, hi = sorted((a, b))
    assert 0 <= iiq_index(lo) <= iiq_index(hi) <= 1000
    if lo < hi and iiq_index(hi) < 1000 and hi - lo > 1e-6 * (1 + hi):
        assert iiq_index(lo) < iiq_index(hi)


@given(st.floats(0, 1e9), st.floats(1, 5), st.floats(1, 3), st.floats(0, 200),
       st.floats(0.01, 1))
def test_hours_cap(G, C, A, work, rho):
    h = hours_saved(InterpretationInputs(G, C, A, 1, work, k=0.1, rho=rho))
    assert 0 <= h <= rho * work + 1e-12


@given(st.floats(0, 1e6), st.floats(0, 1e6))
def test_hours_monotone_in_G(g1, g2):
    lo, hi = sorted((g1, g2))
    mk = lambda g: hours_saved(InterpretationInputs(g, 2, 1.1, 1, 1e9))
    assert mk(lo) <= mk(hi)


@given(st.floats(0, 1e3), st.floats(0, 1e3), st.floats(0, 50), st.floats(0.1, 10))
def test_usd_linear(h, w, v, c):
    assert usd_impact(c * h, w, v) == pytest.approx(c * usd_impact(h, w, v), rel=1e-12, abs=1e-9)
    assert usd_impact(h, c * w, v) == pytest.approx(c * usd_impact(h, w, v), rel=1e-12, abs=1e-9)
    assert usd_impact(h, w, c * v) == pytest.approx(c * usd_impact(h, w, v), rel=1e-12, abs=1e-9)

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ic_feedback.ldic_capacity import symmetric_sumrate, theorem3_region
from ic_feedback.ldic_model import LdicParams
from ic_feedback.ldic_sim import (MOTIVATING_PARAMS, SchemeMismatchError,
                                  UnsupportedRegimeError, build_scheme,
                                  run_motivating_example, simulate,
                                  trace_from_text, trace_to_text)
from ic_feedback.region_core import contains


def supported():
    for n in range(0, 9):
        for m in range(0, n + 1):
            if 3 * m <= 2 * n:
                for c in range(0, n + 1):
                    yield n, m, c


SUPPORTED = list(supported())


@pytest.mark.parametrize("B", [3, 10, 100])
def test_motivating_rates(B):
    res = run_motivating_example(B)
    assert res.decode_ok
    assert res.achieved == (Fraction(4 * (B - 2), B), Fraction(B - 2, B))


def test_motivating_trace_feedback_is_top_bit_xor_fresh_bit():
    for seed in range(20):
        tr = run_motivating_example(10, seed).trace
        a1 = tr[0].x[0].level(1)
        b1 = tr[0].x[1].level(3)
        # feedback delivered at the start of block 2 describes block 1
        fb = tr[1].feedback[1]
        assert fb.level(3) == a1 ^ b1
        assert fb.weight() == fb.level(3)
        assert tr[1].feedback[0].weight() == 0


def test_motivating_relay_repeats_top_bit_two_blocks_later():
    tr = run_motivating_example(12, seed=5).trace
    for b in range(3, 13):
        assert tr[b - 1].x[1].level(2) == tr[b - 3].x[0].level(1)
    assert tr[0].x[1].level(2) == 0 and tr[1].x[1].level(2) == 0


def test_last_two_blocks_carry_no_fresh_bits():
    tr = run_motivating_example(6, seed=3).trace
    for rec in tr[-2:]:
        assert rec.x[0].value == 0        # TX1 has nothing to relay
        assert rec.x[1].value & 0b0010 == 0


def test_scheme_examples():
    s = build_scheme(LdicParams.symmetric(4, 2, 1))
    assert s.sum_rate == 6
    s = build_scheme(LdicParams(4, 4, 0, 0, 1, 1))
    assert s.rate_pair == (4, 4)
    assert s.feedback_rows == ((), ())
    s = build_scheme(LdicParams.symmetric(6, 3, 0))
    assert s.rate_pair == (3, 3)
    assert s.rates == (0, 0, 3, 0, 0, 3)


def test_odd_cooperative_budget_is_split_unevenly():
    s = build_scheme(LdicParams.symmetric(6, 3, 2))
    assert s.rate_pair == (5, 4)
    swapped = s.swapped()
    assert swapped.rate_pair == (4, 5)
    res = simulate(LdicParams.symmetric(6, 3, 2), swapped, 20, 1)
    assert res.decode_ok


def test_unsupported_regimes():
    with pytest.raises(UnsupportedRegimeError):
        build_scheme(LdicParams.symmetric(6, 5, 1))
    with pytest.raises(UnsupportedRegimeError):
        build_scheme(LdicParams(4, 3, 2, 2, 1, 1))
    with pytest.raises(UnsupportedRegimeError):
        build_scheme(LdicParams.symmetric(4, 2, Fraction(1, 2)))
    with pytest.raises(UnsupportedRegimeError):
        build_scheme(LdicParams.symmetric(4, 2, 2), variant="motivating")


def test_mismatch_and_short_runs():
    s = build_scheme(LdicParams.symmetric(4, 2, 1))
    with pytest.raises(SchemeMismatchError):
        simulate(LdicParams.symmetric(4, 2, 2), s, 5, 0)
    with pytest.raises(ValueError):
        simulate(LdicParams.symmetric(4, 2, 1), s, 2, 0)


def test_zero_messages():
    for g, s in [(MOTIVATING_PARAMS, build_scheme(MOTIVATING_PARAMS, "motivating")),
                 (LdicParams.symmetric(7, 4, 2), build_scheme(LdicParams.symmetric(7, 4, 2)))]:
        res = simulate(g, s, 8, 0, zero_messages=True)
        assert res.decode_ok
        assert all(r.y[0].value == 0 and r.y[1].value == 0 for r in res.trace)


def test_degenerate_channel():
    g = LdicParams.symmetric(0, 0, 0)
    res = simulate(g, build_scheme(g), 5, 0)
    assert res.decode_ok and res.achieved == (0, 0)


@pytest.mark.parametrize("n,m,c", SUPPORTED)
def test_scheme_invariants(n, m, c):
    g = LdicParams.symmetric(n, m, c)
    s = build_scheme(g)
    s.validate()
    assert s.sum_rate == symmetric_sumrate(n, m, c)
    assert contains(theorem3_region(g), s.rate_pair)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SUPPORTED), st.integers(0, 2 ** 32), st.integers(3, 20))
def test_zero_error_and_exact_rate(nmc, seed, B):
    n, m, c = nmc
    g = LdicParams.symmetric(n, m, c)
    res = simulate(g, build_scheme(g), B, seed, gf2_check=True)
    assert res.decode_ok
    assert sum(res.achieved) == Fraction(B - 2, B) * symmetric_sumrate(n, m, c)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SUPPORTED), st.integers(0, 2 ** 32))
def test_feedback_budget_and_relay(nmc, seed):
    n, m, c = nmc
    g = LdicParams.symmetric(n, m, c)
    s = build_scheme(g)
    tr = simulate(g, s, 8, seed).trace
    window = (1 << m) - 1          # bottom m rows
    for rec in tr:
        for fb in rec.feedback:
            assert fb.weight() <= min(m, c)
            assert fb.value & ~window == 0
    for u in (0, 1):
        other = s.tx[1 - u]
        for b in range(3, 9):
            for i, lvl in enumerate(s.tx[u].relay):
                assert tr[b - 1].x[u].level(lvl) == tr[b - 3].x[1 - u].level(other.coop[i])


def test_trace_round_trip():
    res = run_motivating_example(5, seed=9)
    text = trace_to_text(res.trace)
    assert text.startswith("block 1\n  x1 ")
    back = trace_from_text(text)
    assert [r.block for r in back] == [1, 2, 3, 4, 5]
    for a, b in zip(res.trace, back):
        assert a.x == b.x and a.y == b.y and a.feedback == b.feedback
        assert a.decoded == b.decoded

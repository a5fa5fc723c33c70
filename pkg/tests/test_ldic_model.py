import pytest
from hypothesis import given
from hypothesis import strategies as st

from ic_feedback.ldic_model import (BitVec, InvalidGainError, LdicParams,
                                    channel_output, feedback_rows, lsb_feedback,
                                    shift_down)


def test_bitvec_layout():
    v = BitVec.from_str("1011")
    assert v.q == 4
    assert v.bits == (1, 0, 1, 1)
    assert v.level(1) == 1 and v.level(2) == 0
    assert str(v) == "1011"
    assert str(v.with_level(2, 1)) == "1111"
    assert v.weight() == 3
    assert str(v ^ BitVec.from_str("0110")) == "1101"
    with pytest.raises(ValueError):
        BitVec(2, 4)
    with pytest.raises(IndexError):
        v.level(5)


def test_shift_down():
    x = BitVec.from_str("1101")
    assert str(shift_down(x, 4)) == "1101"
    assert str(shift_down(x, 2)) == "0011"
    assert str(shift_down(x, 0)) == "0000"
    with pytest.raises(InvalidGainError):
        shift_down(x, 5)


def test_channel_output_motivating_gains():
    g = LdicParams(4, 4, 2, 2, 1, 1)
    x1 = BitVec.from_str("1000")
    x2 = BitVec.from_str("0010")
    y1, y2 = channel_output(x1, x2, g)
    # TX2's third level falls off the bottom of receiver 1
    assert str(y1) == "1000"
    # TX1's top bit lands on row 3 of receiver 2, on top of TX2's third level
    assert str(y2) == "0000"
    y1, y2 = channel_output(x1, BitVec.from_str("0000"), g)
    assert str(y2) == "0010"


def test_feedback_maps():
    y = BitVec.from_str("10111")
    assert str(lsb_feedback(y, 3, 2)) == "00011"
    assert str(lsb_feedback(y, 1, 5)) == "00001"
    assert str(lsb_feedback(y, 3, 0)) == "00000"
    assert str(feedback_rows(y, [1, 4])) == "10010"


def test_params_validation():
    with pytest.raises(InvalidGainError):
        LdicParams(-1, 2, 1, 1)
    with pytest.raises(InvalidGainError):
        LdicParams(1.5, 2, 1, 1)
    with pytest.raises(ValueError):
        LdicParams(2, 2, 1, 1, -1, 0)
    g = LdicParams(3, 2, 1, 4, 0.5, 2.0)
    assert g.q == 4
    assert g.cfb2 == 2 and isinstance(g.cfb2, int)
    assert not g.integer_feedback
    assert LdicParams.symmetric(5, 2, 1).as_tuple() == (5, 5, 2, 2, 1, 1)


bits = st.integers(min_value=1, max_value=10).flatmap(
    lambda q: st.tuples(st.just(q), st.integers(0, 2 ** q - 1), st.integers(0, 2 ** q - 1)))


@given(bits)
def test_xor_is_self_inverse(t):
    q, a, b = t
    x, y = BitVec(q, a), BitVec(q, b)
    assert (x ^ y) ^ y == x


@given(bits, st.integers(0, 10), st.integers(0, 10))
def test_channel_is_linear(t, n_direct, n_cross):
    q, a, b = t
    n_direct, n_cross = min(n_direct, q), min(n_cross, q)
    g = LdicParams(q, n_direct, n_cross, 0)
    x1, x2 = BitVec(q, a), BitVec(q, b)
    z = BitVec.zeros(q)
    y_sum = channel_output(x1, x2, g)
    y_a = channel_output(x1, z, g)
    y_b = channel_output(z, x2, g)
    assert y_sum[0] == y_a[0] ^ y_b[0]
    assert y_sum[1] == y_a[1] ^ y_b[1]


@given(bits, st.integers(0, 10), st.integers(0, 10))
def test_lsb_feedback_weight_bounded(t, cross, cfb):
    q, a, _ = t
    cross = min(cross, q)
    fb = lsb_feedback(BitVec(q, a), cross, cfb)
    assert fb.weight() <= min(cross, cfb)
    assert fb.value >> min(cross, cfb) == 0


def _shift_matrix_apply(bits, q, n):
    # explicit q x q down-shift matrix raised to q - n, applied over GF(2)
    s = [[1 if r == c + 1 else 0 for c in range(q)] for r in range(q)]
    m = [[int(r == c) for c in range(q)] for r in range(q)]
    for _ in range(q - n):
        m = [[sum(m[r][k] * s[k][c] for k in range(q)) % 2 for c in range(q)] for r in range(q)]
    return tuple(sum(m[r][c] * bits[c] for c in range(q)) % 2 for r in range(q))


def test_shift_down_matches_matrix_power():
    for q in range(1, 6):
        for n in range(q + 1):
            for v in range(2 ** q):
                x = BitVec(q, v)
                assert shift_down(x, n).bits == _shift_matrix_apply(x.bits, q, n)


@given(bits, st.integers(0, 10), st.integers(0, 10))
def test_lsb_feedback_is_linear(t, cross, cfb):
    q, a, b = t
    cross = min(cross, q)
    x, y = BitVec(q, a), BitVec(q, b)
    assert lsb_feedback(x, cross, cfb) ^ lsb_feedback(y, cross, cfb) == lsb_feedback(x ^ y, cross, cfb)

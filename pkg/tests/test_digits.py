import random

import pytest
from hypothesis import given, strategies as st

from revorder.digits import (
    ZERO,
    DigitString,
    LiteralError,
    ReversedLiteral,
    add_with_carries,
    from_reversed_literal,
    mul_1d,
    sub_with_borrows,
    to_reversed_literal,
)

from oracles import column_add, column_mul1d, column_sub

D = DigitString.of
ints = st.integers(min_value=-10 ** 20, max_value=10 ** 20)


def test_canonical_form():
    assert D(120).mags == (0, 2, 1)
    assert D("-0") == ZERO and not D("-0").negative
    assert DigitString.from_digits([3, 0, 0]) == D(3)
    with pytest.raises(ValueError):
        DigitString((1, 0))
    with pytest.raises(ValueError):
        DigitString((0,), negative=True)
    with pytest.raises(ValueError):
        DigitString((12,))
    with pytest.raises(ValueError):
        D("12a")


@given(ints)
def test_int_round_trip(x):
    d = D(x)
    assert int(d) == x
    assert str(d) == str(x)
    assert d.mags[-1] != 0 or d.mags == (0,)


def test_add_reference_example():
    total, carries = add_with_carries(D(123), D(179))
    assert int(total) == 302
    assert carries.bits == (1, 1, 0)


def test_add_zero():
    total, carries = add_with_carries(ZERO, ZERO)
    assert total == ZERO
    assert carries.bits == (0,)


def test_add_16_digit_frozen():
    # oracle: column_add(4829301758204617, 9182736450192837)
    total, carries = add_with_carries(D(4829301758204617), D(9182736450192837))
    assert int(total) == 14012038208397454
    assert carries.bits == (1, 0, 1, 0, 0, 0, 0, 1, 1, 0, 0, 1, 1, 1, 1, 1)


def test_sub_reference_examples():
    assert int(sub_with_borrows(D(948), D(840))[0]) == 108
    diff, borrows = sub_with_borrows(D(948), D(960))
    assert int(diff) == -12 and diff.negative
    assert borrows.bits == (1, 0, 0)
    assert borrows.kind == "borrow"


@given(ints)
def test_self_cancellation(x):
    diff, _ = sub_with_borrows(D(x), D(x))
    assert diff == ZERO


def test_mixed_sign_addition_is_subtraction():
    total, trace = add_with_carries(D(5), D(-12))
    assert int(total) == -7
    assert trace.kind == "borrow"
    assert list(trace.bits) == column_sub(12, 5)[1]


def test_mul_1d_reference_examples():
    assert int(mul_1d(D(12), 7)[0]) == 84
    assert int(mul_1d(D(12), 9)[0]) == 108


@given(st.integers(min_value=0, max_value=10 ** 30))
def test_mul_by_zero(x):
    assert mul_1d(D(x), 0)[0] == ZERO


def test_mul_1d_rejects_non_digit():
    with pytest.raises(ValueError):
        mul_1d(D(3), 10)


def test_oracle_equivalence_sweep():
    rng = random.Random(1234)
    for _ in range(100_000):
        x = rng.randint(0, 10 ** rng.randint(1, 16) - 1)
        y = rng.randint(0, 10 ** rng.randint(1, 16) - 1)
        total, carries = add_with_carries(D(x), D(y))
        want_total, want_carries = column_add(x, y)
        assert int(total) == want_total and list(carries.bits) == want_carries
        diff, borrows = sub_with_borrows(D(x), D(y))
        want_diff, want_borrows = column_sub(x, y)
        assert int(diff) == want_diff and list(borrows.bits) == want_borrows
        d = rng.randint(0, 9)
        prod, mc = mul_1d(D(x), d)
        want_prod, want_mc = column_mul1d(x, d)
        assert int(prod) == want_prod and list(mc.bits) == want_mc


@given(st.integers(min_value=0, max_value=10 ** 40), st.integers(min_value=0, max_value=10 ** 40))
def test_carry_soundness(x, y):
    _, carries = add_with_carries(D(x), D(y))
    assert list(carries.bits) == column_add(x, y)[1]
    assert len(carries.bits) == max(len(str(x)), len(str(y)))


@given(ints, ints)
def test_signed_arithmetic(x, y):
    assert int(add_with_carries(D(x), D(y))[0]) == x + y
    assert int(sub_with_borrows(D(x), D(y))[0]) == x - y


def test_reversed_literal_reference_examples():
    assert to_reversed_literal(D(48000), 5).digits == "00084"
    assert to_reversed_literal(ZERO, 1).digits == "0"
    lit = to_reversed_literal(D(-12))
    assert lit.digits == "21-"
    assert lit.render() == "-r|21"
    assert int(from_reversed_literal("40845")) == 54804
    assert int(from_reversed_literal("0")) == 0
    assert int(from_reversed_literal("169")) == 961


def test_reversed_literal_errors():
    with pytest.raises(LiteralError):
        to_reversed_literal(D(48000), 4)
    with pytest.raises(LiteralError):
        from_reversed_literal("12a")
    with pytest.raises(LiteralError):
        from_reversed_literal("")
    with pytest.raises(LiteralError):
        ReversedLiteral("00-")
    with pytest.raises(LiteralError):
        ReversedLiteral.parse_rendered("123")


def test_rendered_round_trip():
    for text in ("r|048", "-r|21", "r|0"):
        assert ReversedLiteral.parse_rendered(text).render() == text


@given(ints, st.integers(min_value=0, max_value=8))
def test_reversed_round_trip(x, extra):
    d = D(x)
    pad = len(d) + extra
    lit = to_reversed_literal(d, pad)
    assert lit.pad_len == pad
    assert from_reversed_literal(lit) == d
    assert to_reversed_literal(from_reversed_literal(lit), pad) == lit


def test_shift():
    assert int(D(12).shift(3)) == 12000
    assert D(0).shift(4) == ZERO

import random

import pytest
from hypothesis import given, strategies as st

from revorder.csid import FormatPolicy, classify_carry_chain, csid_add_sub, csid_worstcase
from revorder.digits import DigitString, add_with_carries

from oracles import column_add, column_sub, longest_run, random_digits

PLAIN, REV = FormatPolicy.PLAIN, FormatPolicy.REVORDER
nonneg = st.integers(min_value=0, max_value=10 ** 30)


def test_reference_example():
    assert csid_add_sub(123, 179, PLAIN).max_csid == 2
    assert csid_add_sub(123, 179, REV).max_csid == 1


def test_no_carry():
    assert csid_add_sub(1, 1, PLAIN).max_csid == 0
    assert csid_add_sub(1, 1, REV).max_csid == 0


def test_per_step_order():
    plain = csid_add_sub(123, 179, PLAIN)
    assert plain.per_step == ((2, 2), (1, 1), (0, 0))
    rev = csid_add_sub(123, 179, REV)
    assert rev.per_step == ((0, 0), (1, 1), (2, 1))


def test_suppressed_leading_zeros_count():
    # 1000 - 999 = 1: the emitted '1' waits on a three-long borrow chain
    assert csid_add_sub(1000, 999, PLAIN, "-").max_csid == 3
    assert csid_add_sub(1000, 999, REV, "-").max_csid <= 1


def test_final_carry_digit():
    report = csid_add_sub(999, 1, PLAIN)
    assert report.per_step[0] == (3, 3)


@given(st.integers(min_value=-10 ** 30, max_value=10 ** 30),
       st.integers(min_value=-10 ** 30, max_value=10 ** 30),
       st.sampled_from(["+", "-"]))
def test_revorder_bound_and_dominance(a, b, op):
    plain = csid_add_sub(a, b, PLAIN, op)
    rev = csid_add_sub(a, b, REV, op)
    assert rev.max_csid <= 1
    assert plain.max_csid >= rev.max_csid
    assert plain.max_csid == max(c for _, c in plain.per_step)


@given(nonneg, nonneg)
def test_plain_is_longest_chain(a, b):
    assert csid_add_sub(a, b, PLAIN).max_csid == longest_run(column_add(a, b)[1])
    assert csid_add_sub(a, b, PLAIN, "-").max_csid == longest_run(column_sub(a, b)[1])


def test_classify_examples():
    assert classify_carry_chain(123, 179) == 2
    assert classify_carry_chain(111, 111) == 0
    with pytest.raises(ValueError):
        classify_carry_chain(5, -3)


def test_classify_15d_buckets_frozen():
    # histogram of longest carry chains over 2000 seeded 15D+15D pairs,
    # computed with the column-addition oracle
    frozen = [0, 84, 458, 588, 384, 240, 129, 53, 30, 14, 8, 6, 2, 2, 2, 0]
    rng = random.Random(0)
    hist = [0] * 16
    for _ in range(2000):
        a, b = random_digits(rng, 15), random_digits(rng, 15)
        hist[classify_carry_chain(a, b)] += 1
    assert hist == frozen


@given(nonneg, nonneg)
def test_classify_matches_carry_trace(a, b):
    _, carries = add_with_carries(DigitString.of(a), DigitString.of(b))
    assert classify_carry_chain(a, b) == carries.longest_run()


def test_worstcase_examples():
    assert csid_worstcase("mul_direct", 3) == 57
    assert csid_worstcase("div_direct", 4, 2) == 24
    assert csid_worstcase("div_direct", 5, 5) == 0
    assert csid_worstcase("mul_decomposed", 7) == "O(n)"
    assert csid_worstcase("div_decomposed", 7, 3) == "O(n)"


def test_worstcase_closed_forms():
    for n in range(1, 21):
        assert csid_worstcase("mul_direct", n) == 6 * n * n + n
        for m in range(1, n + 1):
            assert csid_worstcase("div_direct", n, m) == 2 * n * n - 2 * m * m


def test_worstcase_add_monotone():
    values = [csid_worstcase("add", n) for n in range(1, 40)]
    assert values == sorted(values)


def test_worstcase_errors():
    with pytest.raises(ValueError):
        csid_worstcase("div_direct", 2, 3)
    with pytest.raises(ValueError):
        csid_worstcase("pow", 2)
    with pytest.raises(ValueError):
        csid_worstcase("add", 0)

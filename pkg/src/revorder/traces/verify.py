"""Step-by-step checking of traces with plain Python integer arithmetic.

The checker is deliberately independent of the digit-string engine used
by the generators, so a generated trace that verifies has been computed
twice by unrelated code paths.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..digits import ReversedLiteral
from .model import (
    ADD,
    DIV,
    MUL,
    SUB,
    Decompose,
    DivIteration,
    Final,
    PairwiseCombine,
    PartialProducts,
    Trace,
)


@dataclass(frozen=True)
class VerifyResult:
    valid: bool
    step: Optional[int] = None
    expected: Optional[str] = None
    found: Optional[str] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.valid

    def __str__(self) -> str:
        if self.valid:
            return "VALID"
        where = f" step={self.step}" if self.step is not None else ""
        return f"INVALID{where} expected={self.expected} found={self.found} ({self.reason})"


VALID = VerifyResult(True)


class _Fail(Exception):
    def __init__(self, step, expected, found, reason):
        super().__init__(reason)
        self.result = VerifyResult(False, step, None if expected is None else str(expected),
                                   None if found is None else str(found), reason)


def _num(x) -> int:
    return int(x.value()) if isinstance(x, ReversedLiteral) else int(x)


def _expect(cond, step, expected, found, reason):
    if not cond:
        raise _Fail(step, expected, found, reason)


def _check_final(t: Trace, index: int, want: int, reversed_form: bool, remainder: int = None):
    step = t.steps[index]
    _expect(isinstance(step, Final), index, "final", type(step).__name__, "trace must end with a final result")
    _expect(step.reversed == reversed_form, index, "reversed" if reversed_form else "forward",
            "reversed" if step.reversed else "forward", "final result in the wrong order")
    _expect(int(step.value) == want, index, want, step.value, "wrong final result")
    _expect(int(t.final) == want, index, want, t.final, "trace result disagrees with final step")
    if remainder is not None:
        got = step.remainder
        _expect(got is not None and int(got) == remainder, index, remainder, got, "wrong final remainder")
        _expect(t.remainder is not None and int(t.remainder) == remainder, index, remainder,
                t.remainder, "trace remainder disagrees with final step")


def _check_add_sub(t: Trace):
    a, b = int(t.equation.a), int(t.equation.b)
    _expect(len(t.steps) == 1, 0, 1, len(t.steps), "addition/subtraction has a single step")
    _check_final(t, 0, a + b if t.op == ADD else a - b, reversed_form=True)


def _check_mul(t: Trace):
    a, b = int(t.equation.a), int(t.equation.b)
    _expect(a >= 0 and b >= 0, None, ">=0", f"{a},{b}", "negative multiplication operands")
    if b < 10:
        _expect(len(t.steps) == 1, 0, 1, len(t.steps), "one-digit multiplier has a single step")
        _check_final(t, 0, a * b, reversed_form=True)
        return
    steps = t.steps
    _expect(len(steps) >= 4, None, ">=4 steps", len(steps), "multiplication trace too short")

    dec = steps[0]
    _expect(isinstance(dec, Decompose), 0, "Decompose", type(dec).__name__, "missing decomposition")
    b_digits = str(b)
    want_terms = [(a, int(d), len(b_digits) - 1 - i) for i, d in enumerate(b_digits)]
    got_terms = [(int(x.multiplicand), x.digit, x.place) for x in dec.terms]
    _expect(got_terms == want_terms, 0, want_terms, got_terms, "decomposition does not match the multiplier")

    parts = steps[1]
    _expect(isinstance(parts, PartialProducts), 1, "PartialProducts", type(parts).__name__,
            "missing partial products")
    _expect(len(parts.literals) == len(want_terms), 1, len(want_terms), len(parts.literals),
            "one partial product per place")
    for (x, d, k), lit in zip(want_terms, parts.literals):
        _expect(_num(lit) == x * d * 10 ** k, 1, x * d * 10 ** k, _num(lit), "wrong partial product")

    current = list(parts.literals)
    for index in range(2, len(steps) - 1):
        step = steps[index]
        _expect(isinstance(step, PairwiseCombine), index, "PairwiseCombine", type(step).__name__,
                "expected a combination round")
        _expect(len(current) > 1, index, "final", "extra round", "combination after a single result")
        groups = [tuple(current[i:i + 2]) for i in range(0, len(current), 2)]
        _expect(list(step.pairs) == groups, index, groups, step.pairs, "operands are not adjacent pairs")
        _expect(len(step.sums) == len(groups), index, len(groups), len(step.sums), "one sum per pair")
        for group, s in zip(groups, step.sums):
            want = sum(_num(x) for x in group)
            _expect(_num(s) == want, index, want, _num(s), "wrong pairwise sum")
        current = list(step.sums)
    _expect(len(current) == 1, len(steps) - 1, 1, len(current), "combination stopped early")
    _expect(_num(current[0]) == a * b, len(steps) - 1, a * b, _num(current[0]), "combined product is wrong")
    _check_final(t, len(steps) - 1, a * b, reversed_form=False)


def _check_div(t: Trace):
    a, b = int(t.equation.a), int(t.equation.b)
    _expect(0 < b <= a, None, "0 < divisor <= dividend", f"{a}÷{b}", "unsupported division operands")
    place = len(str(a)) - len(str(b))
    if b * 10 ** place > a:
        place -= 1
    remainder, digits = a, []
    steps = t.steps
    last = len(steps) - 1
    for index, step in enumerate(steps[:-1]):
        _expect(isinstance(step, DivIteration), index, "DivIteration", type(step).__name__,
                "expected a division iteration")
        q = step.quotient_digit
        _expect(step.place == place, index, place, step.place, "iteration at the wrong place")
        _expect(0 <= q <= 9, index, "0..9", q, "quotient digit out of range")
        if step.minuend is not None:
            _expect(int(step.minuend) == remainder, index, remainder, step.minuend, "wrong running remainder")
        if step.quotient_prefix is not None:
            want = "".join(map(str, digits)) + str(q)
            _expect(step.quotient_prefix == want, index, want, step.quotient_prefix, "wrong quotient prefix")
        unit = b * 10 ** place
        _expect(_num(step.product) == q * unit, index, q * unit, _num(step.product), "wrong product")
        rem = _num(step.remainder)
        _expect(rem == remainder - q * unit, index, remainder - q * unit, rem, "wrong remainder")
        in_range = 0 <= rem < unit
        if step.rolled_back:
            _expect(not in_range, index, "invalid remainder", rem, "rollback of a correct estimate")
            nxt = steps[index + 1]
            _expect(isinstance(nxt, DivIteration) and nxt.place == step.place and nxt.quotient_digit != q,
                    index + 1, f"re-estimate at place {step.place}", nxt, "rollback not followed by a re-estimate")
            continue
        _expect(in_range, index, remainder // unit, q, "quotient misestimated without rollback")
        remainder = rem
        digits.append(q)
        place -= 1
    _expect(place == -1, last, "iteration at place 0", f"stopped above place {place + 1}", "missing iterations")
    _expect(int("".join(map(str, digits))) == a // b, last, a // b, digits, "quotient digits are wrong")
    _check_final(t, last, a // b, reversed_form=False, remainder=a % b)


_CHECKS = {ADD: _check_add_sub, SUB: _check_add_sub, MUL: _check_mul, DIV: _check_div}


def verify(t: Trace) -> VerifyResult:
    """Return VALID, or the first failing step with expected and found values."""
    try:
        check = _CHECKS[t.op]
    except KeyError:
        return VerifyResult(False, None, "+ - × ÷", t.op, "unknown operator")
    if not t.steps:
        return VerifyResult(False, None, "steps", "none", "empty trace")
    try:
        check(t)
    except _Fail as fail:
        return fail.result
    except (TypeError, ValueError, AttributeError, IndexError) as exc:
        return VerifyResult(False, None, None, None, f"malformed trace: {exc}")
    return VALID

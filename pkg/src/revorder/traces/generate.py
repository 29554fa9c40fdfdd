"""Trace generators for the four operations.

All arithmetic here goes through the digit-string engine; nothing is
delegated to Python integers.
"""

from __future__ import annotations

from ..digits import (
    ZERO,
    DigitString,
    add_with_carries,
    compare,
    compare_mags,
    mul_1d,
    sub_with_borrows,
    to_reversed_literal,
)
from .model import (
    ADD,
    DIV,
    MUL,
    NO_ROLLBACK,
    OP_ALIASES,
    SUB,
    Decompose,
    DivIteration,
    Equation,
    Final,
    PairwiseCombine,
    PartialProducts,
    RollbackPlan,
    Term,
    Trace,
)


def gen_add_trace(a, b) -> Trace:
    a, b = DigitString.of(a), DigitString.of(b)
    total, _ = add_with_carries(a, b)
    return Trace(Equation(ADD, a, b), (Final(total, reversed=True),), total)


def gen_sub_trace(a, b) -> Trace:
    a, b = DigitString.of(a), DigitString.of(b)
    diff, _ = sub_with_borrows(a, b)
    return Trace(Equation(SUB, a, b), (Final(diff, reversed=True),), diff)


def _require_nonnegative(*xs):
    for x in xs:
        if x.negative:
            raise ValueError(f"operands must be non-negative, got {x}")


def _scaled_product(x: DigitString, digit: int, place: int):
    """x * digit * 10**place and the padded literal that carries it."""
    p, _ = mul_1d(x, digit)
    return p.shift(place), to_reversed_literal(p.shift(place), len(p) + place)


def pair_up(items):
    """Group a list into adjacent pairs; an odd last element stays alone."""
    return tuple(tuple(items[i:i + 2]) for i in range(0, len(items), 2))


def gen_mul_trace(a, b) -> Trace:
    """Decompose b by decimal places, emit reversed partial products and
    combine them pairwise until one literal remains."""
    a, b = DigitString.of(a), DigitString.of(b)
    _require_nonnegative(a, b)
    eq = Equation(MUL, a, b)
    if len(b) == 1:
        product, _ = mul_1d(a, b.mags[0])
        return Trace(eq, (Final(product, reversed=True),), product)

    places = range(len(b) - 1, -1, -1)
    terms = tuple(Term(a, b.mags[k], k) for k in places)
    partials = [_scaled_product(a, t.digit, t.place) for t in terms]
    steps = [Decompose(terms), PartialProducts(tuple(lit for _, lit in partials))]

    current = partials
    while len(current) > 1:
        groups = pair_up(current)
        merged = []
        for group in groups:
            if len(group) == 1:
                merged.append(group[0])
                continue
            (x, _), (y, _) = group
            s, _ = add_with_carries(x, y)
            merged.append((s, to_reversed_literal(s)))
        steps.append(PairwiseCombine(
            tuple(tuple(lit for _, lit in g) for g in groups),
            tuple(lit for _, lit in merged),
        ))
        current = merged

    product = current[0][0]
    steps.append(Final(product, reversed=False))
    return Trace(eq, tuple(steps), product)


def _remainder_literal(r: DigitString):
    return ZERO if r.is_zero else to_reversed_literal(r)


def estimate_quotient_digit(remainder: DigitString, divisor: DigitString, place: int) -> int:
    """Largest q in 0..9 with q * divisor * 10**place <= remainder."""
    high = remainder.mags[place:] if len(remainder) > place else ()
    if len(high) < len(divisor):
        return 0
    top = high[-1]
    if len(high) > len(divisor):
        top = top * 10 + high[-2]
    q = min(9, top // divisor.mags[-1])
    while q > 0 and compare(mul_1d(divisor, q)[0].shift(place), remainder) > 0:
        q -= 1
    return q


def gen_div_trace(a, b, plan: RollbackPlan = NO_ROLLBACK) -> Trace:
    """Long division emitting one iteration per quotient digit.

    Where ``plan`` injects a misestimate the wrong digit is tried first,
    its out-of-range remainder is flagged as rolled back, and the correct
    iteration at the same place follows.
    """
    a, b = DigitString.of(a), DigitString.of(b)
    _require_nonnegative(a, b)
    if b.is_zero:
        raise ZeroDivisionError("division by zero")
    if compare_mags(b, a) > 0:
        raise ValueError(f"divisor {b} exceeds dividend {a}")

    top = len(a) - len(b)
    if compare_mags(b.shift(top), a) > 0:
        top -= 1

    remainder = a
    steps, digits = [], []
    for place in range(top, -1, -1):
        q = estimate_quotient_digit(remainder, b, place)
        delta = plan.delta_at(len(digits))
        if delta:
            wrong = q + delta
            if not 0 <= wrong <= 9:
                raise ValueError(f"rollback {delta:+d} on digit {q} leaves 0..9")
            prod, lit = _scaled_product(b, wrong, place)
            bad, _ = sub_with_borrows(remainder, prod)
            steps.append(DivIteration(wrong, place, lit, _remainder_literal(bad), rolled_back=True))
        prod, lit = _scaled_product(b, q, place)
        remainder, _ = sub_with_borrows(remainder, prod)
        steps.append(DivIteration(q, place, lit, _remainder_literal(remainder)))
        digits.append(q)

    unused = [i for i, _ in plan.deltas if i >= len(digits)]
    if unused:
        raise ValueError(f"rollback plan targets iteration {unused[0]} of {len(digits)}")
    quotient = DigitString.from_digits(reversed(digits))
    steps.append(Final(quotient, reversed=False, remainder=remainder))
    return Trace(Equation(DIV, a, b), tuple(steps), quotient, remainder)


_GENERATORS = {ADD: gen_add_trace, SUB: gen_sub_trace, MUL: gen_mul_trace}


def gen_trace(op: str, a, b, plan: RollbackPlan = NO_ROLLBACK) -> Trace:
    """Dispatch on the operator symbol (aliases such as '*' and '/' accepted)."""
    try:
        op = OP_ALIASES[op]
    except KeyError:
        raise ValueError(f"unsupported operator {op!r}") from None
    if op == DIV:
        return gen_div_trace(a, b, plan)
    return _GENERATORS[op](a, b)

"""Count of Sequential Intermediate Digits (CSID) for single binary operations.

A sequential intermediate digit is one the next output digit depends on but
which has not been written yet. For plain (most-significant-first) output of
a sum, the digit at a column needs every unresolved carry in the contiguous
chain below it; under RevOrder output each digit needs at most the one carry
entering its column.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Tuple, Union

from .digits import DigitString, add_with_carries, sub_with_borrows


class FormatPolicy(enum.Enum):
    PLAIN = "plain"
    REVORDER = "revorder"


@dataclass(frozen=True)
class CsidReport:
    # (little-endian column of the emitted digit, sid count), in emission order
    per_step: Tuple[Tuple[int, int], ...]
    max_csid: int


def _chain_below(bits, column: int) -> int:
    run = 0
    for j in range(column - 1, -1, -1):
        if j >= len(bits) or not bits[j]:
            break
        run += 1
    return run


def csid_add_sub(a, b, policy: FormatPolicy = FormatPolicy.PLAIN, op: str = "+") -> CsidReport:
    """Per-digit SID counts for ``a op b`` written under ``policy``.

    Plain output emits the most significant digit first. Columns whose
    result digit is a suppressed leading zero still have to be resolved
    before that first digit can be written, so the first emitted digit
    absorbs their chains.
    """
    a, b = DigitString.of(a), DigitString.of(b)
    if op == "+":
        result, trace = add_with_carries(a, b)
    elif op in ("-", "−"):
        result, trace = sub_with_borrows(a, b)
    else:
        raise ValueError(f"csid_add_sub handles + and -, not {op!r}")
    bits = trace.bits
    t = len(result.mags)
    if policy is FormatPolicy.REVORDER:
        steps = tuple((i, 1 if i > 0 and i - 1 < len(bits) and bits[i - 1] else 0) for i in range(t))
    else:
        columns = max(t, len(bits) + 1)
        lead = max(_chain_below(bits, c) for c in range(t - 1, columns))
        steps = ((t - 1, lead),) + tuple((i, _chain_below(bits, i)) for i in range(t - 2, -1, -1))
    return CsidReport(steps, max(count for _, count in steps))


def classify_carry_chain(a, b) -> int:
    """Longest run of consecutive carries when adding two same-sign numbers."""
    a, b = DigitString.of(a), DigitString.of(b)
    if a.negative != b.negative and not (a.is_zero or b.is_zero):
        raise ValueError("carry-chain classification needs same-sign operands")
    return add_with_carries(a, b)[1].longest_run()


WORSTCASE_OPS = ("add", "sub", "mul_direct", "mul_decomposed", "div_direct", "div_decomposed")
LINEAR = "O(n)"


def csid_worstcase(op: str, n: int, m: int = None) -> Union[int, str]:
    """Worst-case CSID of an nD-by-mD operation without RevOrder.

    Direct multiplication: n^2 SIDs for the sub-multiplications, n(n+1) to
    hold their results, and 4n per aggregating addition over n additions,
    giving 6n^2 + n. Direct division: n - m iterations of 2m (multiply) plus
    2n (subtract) SIDs. Decomposed variants have no closed form and are
    reported as linear growth.
    """
    if m is None:
        m = n
    if n < 1 or m < 1:
        raise ValueError("digit counts must be >= 1")
    if m > n:
        raise ValueError(f"need n >= m, got n={n}, m={m}")
    if op in ("add", "sub"):
        return n
    if op == "mul_direct":
        return n * n + n * (n + 1) + 4 * n * n
    if op == "div_direct":
        return (2 * m + 2 * n) * (n - m)
    if op in ("mul_decomposed", "div_decomposed"):
        return LINEAR
    raise ValueError(f"unknown operation {op!r}; expected one of {WORSTCASE_OPS}")

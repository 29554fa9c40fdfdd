"""Structured RevOrder traces."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..digits import DigitString, ReversedLiteral

ADD, SUB, MUL, DIV = "+", "-", "×", "÷"
OPS = (ADD, SUB, MUL, DIV)
OP_ALIASES = {"+": ADD, "-": SUB, "−": SUB, "×": MUL, "*": MUL, "÷": DIV, "/": DIV}


class Form(enum.Enum):
    VERBOSE = "verbose"
    COMPACT = "compact"


@dataclass(frozen=True)
class Equation:
    op: str
    a: DigitString
    b: DigitString

    def __str__(self) -> str:
        return f"{self.a}{self.op}{self.b}"


@dataclass(frozen=True)
class Term:
    """One sub-product ``multiplicand × (digit · 10**place)``."""

    multiplicand: DigitString
    digit: int
    place: int

    def value(self) -> int:
        return int(self.multiplicand) * self.digit * 10 ** self.place


@dataclass(frozen=True)
class Decompose:
    terms: Tuple[Term, ...]


@dataclass(frozen=True)
class PartialProducts:
    literals: Tuple[ReversedLiteral, ...]


@dataclass(frozen=True)
class PairwiseCombine:
    """One combination round: adjacent operands of the previous list summed in pairs.

    A lone trailing operand is carried through as a one-element group.
    """

    pairs: Tuple[Tuple[ReversedLiteral, ...], ...]
    sums: Tuple[ReversedLiteral, ...]


@dataclass(frozen=True)
class DivIteration:
    quotient_digit: int
    place: int
    product: ReversedLiteral
    remainder: Union[ReversedLiteral, DigitString]
    rolled_back: bool = False
    # Only present when parsed from verbose text; not part of structural identity.
    minuend: Optional[DigitString] = field(default=None, compare=False)
    quotient_prefix: Optional[str] = field(default=None, compare=False)

    def remainder_value(self) -> DigitString:
        r = self.remainder
        return r.value() if isinstance(r, ReversedLiteral) else r


@dataclass(frozen=True)
class Final:
    value: DigitString
    reversed: bool
    remainder: Optional[DigitString] = None


Step = Union[Decompose, PartialProducts, PairwiseCombine, DivIteration, Final]


@dataclass(frozen=True)
class Trace:
    equation: Equation
    steps: Tuple[Step, ...]
    final: DigitString
    remainder: Optional[DigitString] = None

    @property
    def op(self) -> str:
        return self.equation.op


@dataclass(frozen=True)
class RollbackPlan:
    """Per-iteration quotient misestimate, keyed by iteration index."""

    deltas: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        for idx, delta in self.deltas:
            if delta not in (1, -1):
                raise ValueError(f"rollback delta must be +1 or -1, got {delta}")
            if idx < 0:
                raise ValueError("iteration index must be >= 0")

    @classmethod
    def single(cls, iteration: int, delta: int) -> "RollbackPlan":
        return cls(((iteration, delta),))

    def delta_at(self, iteration: int) -> int:
        return dict(self.deltas).get(iteration, 0)


NO_ROLLBACK = RollbackPlan()

"""Signed base-10 digit strings with explicit carry and borrow tracking.

Numbers are stored little-endian (index 0 is the units digit) so that the
reversed output order used by RevOrder traces is a straight scan.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

BASE = 10
REV_MARK = "r|"


class LiteralError(ValueError):
    """A reversed literal is malformed or cannot hold the requested value."""


@dataclass(frozen=True)
class DigitString:
    """Exact signed integer as a little-endian tuple of decimal digits."""

    mags: Tuple[int, ...]
    negative: bool = False

    def __post_init__(self):
        if not self.mags:
            raise ValueError("DigitString needs at least one digit")
        if any(not 0 <= d < BASE for d in self.mags):
            raise ValueError(f"digits out of range: {self.mags!r}")
        if len(self.mags) > 1 and self.mags[-1] == 0:
            raise ValueError(f"non-canonical digits (leading zero): {self.mags!r}")
        if self.negative and self.mags == (0,):
            raise ValueError("zero cannot be negative")

    @classmethod
    def from_digits(cls, mags, negative: bool = False) -> "DigitString":
        """Build from little-endian digits, trimming high zeros."""
        mags = list(mags)
        while len(mags) > 1 and mags[-1] == 0:
            mags.pop()
        if not mags:
            mags = [0]
        if mags == [0]:
            negative = False
        return cls(tuple(mags), negative)

    @classmethod
    def of(cls, value: Union[int, str, "DigitString"]) -> "DigitString":
        if isinstance(value, DigitString):
            return value
        if isinstance(value, int):
            text = str(value)
        else:
            text = value.strip()
        negative = text.startswith("-")
        body = text[1:] if negative else text
        if not body or not body.isdigit() or not body.isascii():
            raise ValueError(f"not an integer literal: {value!r}")
        return cls.from_digits((int(c) for c in reversed(body)), negative)

    @property
    def is_zero(self) -> bool:
        return self.mags == (0,)

    def __len__(self) -> int:
        return len(self.mags)

    def __int__(self) -> int:
        v = int("".join(str(d) for d in reversed(self.mags)))
        return -v if self.negative else v

    def __str__(self) -> str:
        body = "".join(str(d) for d in reversed(self.mags))
        return "-" + body if self.negative else body

    def __repr__(self) -> str:
        return f"DigitString({self})"

    def __neg__(self) -> "DigitString":
        if self.is_zero:
            return self
        return DigitString(self.mags, not self.negative)

    def abs(self) -> "DigitString":
        return DigitString(self.mags) if self.negative else self

    def shift(self, places: int) -> "DigitString":
        """Multiply by 10**places."""
        if places < 0:
            raise ValueError("places must be >= 0")
        if self.is_zero or places == 0:
            return self
        return DigitString((0,) * places + self.mags, self.negative)


ZERO = DigitString((0,))


@dataclass(frozen=True)
class CarryTrace:
    """Per-column carry (or borrow) out of each little-endian position.

    For addition and subtraction every entry is 0 or 1. For single-digit
    multiplication an entry is the carried digit, 0..8.
    """

    bits: Tuple[int, ...]
    kind: str = "carry"

    def longest_run(self) -> int:
        """Length of the longest run of consecutive nonzero entries."""
        best = run = 0
        for bit in self.bits:
            run = run + 1 if bit else 0
            best = max(best, run)
        return best


BorrowTrace = CarryTrace


def compare_mags(a: DigitString, b: DigitString) -> int:
    """Three-way comparison of |a| and |b|."""
    if len(a.mags) != len(b.mags):
        return -1 if len(a.mags) < len(b.mags) else 1
    for x, y in zip(reversed(a.mags), reversed(b.mags)):
        if x != y:
            return -1 if x < y else 1
    return 0


def compare(a: DigitString, b: DigitString) -> int:
    """Three-way signed comparison."""
    if a.negative != b.negative:
        return -1 if a.negative else 1
    c = compare_mags(a, b)
    return -c if a.negative else c


def _add_mags(x, y):
    width = max(len(x), len(y))
    out, bits, carry = [], [], 0
    for i in range(width):
        s = (x[i] if i < len(x) else 0) + (y[i] if i < len(y) else 0) + carry
        carry = 1 if s >= BASE else 0
        out.append(s - BASE * carry)
        bits.append(carry)
    if carry:
        out.append(carry)
    return out, bits


def _sub_mags(x, y):
    # requires |x| >= |y|
    out, bits, borrow = [], [], 0
    for i in range(len(x)):
        d = x[i] - (y[i] if i < len(y) else 0) - borrow
        borrow = 1 if d < 0 else 0
        out.append(d + BASE * borrow)
        bits.append(borrow)
    return out, bits


def _signed_sum(a: DigitString, b: DigitString):
    if a.negative == b.negative:
        mags, bits = _add_mags(a.mags, b.mags)
        return DigitString.from_digits(mags, a.negative), CarryTrace(tuple(bits))
    if compare_mags(a, b) >= 0:
        big, small = a, b
    else:
        big, small = b, a
    mags, bits = _sub_mags(big.mags, small.mags)
    return DigitString.from_digits(mags, big.negative), CarryTrace(tuple(bits), "borrow")


def add_with_carries(a: DigitString, b: DigitString) -> Tuple[DigitString, CarryTrace]:
    """Exact a + b with the schoolbook column carries.

    Mixed signs are reduced to a magnitude subtraction, in which case the
    returned trace holds borrows.
    """
    return _signed_sum(a, b)


def sub_with_borrows(a: DigitString, b: DigitString) -> Tuple[DigitString, CarryTrace]:
    """Exact a - b with borrows of larger-minus-smaller magnitude.

    When the signs differ the operation is a magnitude addition and the
    trace holds carries.
    """
    return _signed_sum(a, -b)


def mul_1d(a: DigitString, d: int) -> Tuple[DigitString, CarryTrace]:
    """Exact a * d for a single digit d, with per-column carried digits."""
    if not isinstance(d, int) or not 0 <= d < BASE:
        raise ValueError(f"multiplier must be a digit 0..9, got {d!r}")
    out, bits, carry = [], [], 0
    for x in a.mags:
        p = x * d + carry
        carry, digit = divmod(p, BASE)
        out.append(digit)
        bits.append(carry)
    if carry:
        out.append(carry)
    return DigitString.from_digits(out, a.negative), CarryTrace(tuple(bits))


@dataclass(frozen=True)
class ReversedLiteral:
    """Digits least-significant-first, zero padded, with a trailing '-' when negative."""

    digits: str

    def __post_init__(self):
        body = self.digits[:-1] if self.digits.endswith("-") else self.digits
        if not body or not body.isascii() or not body.isdigit():
            raise LiteralError(f"bad reversed literal {self.digits!r}")
        if body != self.digits and not body.strip("0"):
            raise LiteralError(f"negative zero literal {self.digits!r}")

    @property
    def negative(self) -> bool:
        return self.digits.endswith("-")

    @property
    def body(self) -> str:
        return self.digits[:-1] if self.negative else self.digits

    @property
    def pad_len(self) -> int:
        return len(self.body)

    def render(self) -> str:
        """Trace surface form, e.g. 'r|048' or '-r|21'."""
        return ("-" if self.negative else "") + REV_MARK + self.body

    @classmethod
    def parse_rendered(cls, text: str) -> "ReversedLiteral":
        negative = text.startswith("-")
        rest = text[1:] if negative else text
        if not rest.startswith(REV_MARK):
            raise LiteralError(f"missing {REV_MARK!r} marker in {text!r}")
        return cls(rest[len(REV_MARK):] + ("-" if negative else ""))

    def value(self) -> DigitString:
        return from_reversed_literal(self)


def to_reversed_literal(x: DigitString, pad_len: int = None) -> ReversedLiteral:
    """Emit x least-significant-first, zero padded up to pad_len digits."""
    width = len(x.mags)
    if pad_len is None:
        pad_len = width
    if pad_len < width:
        raise LiteralError(f"pad_len {pad_len} < {width} significant digits of {x}")
    body = "".join(str(d) for d in x.mags) + "0" * (pad_len - width)
    return ReversedLiteral(body + ("-" if x.negative else ""))


def from_reversed_literal(s: Union[ReversedLiteral, str]) -> DigitString:
    """Decode a reversed literal; accepts the object or its raw digit text."""
    if isinstance(s, str):
        s = ReversedLiteral(s)
    return DigitString.from_digits((int(c) for c in s.body), s.negative)

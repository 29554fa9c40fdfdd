"""Canonical text form of traces: serializer and whitespace-tolerant parser.

See docs/grammar.md for the grammar.
"""

from __future__ import annotations

import re

from ..digits import ZERO, DigitString, LiteralError, ReversedLiteral, to_reversed_literal
from .generate import pair_up
from .model import (
    ADD,
    DIV,
    MUL,
    OP_ALIASES,
    SUB,
    Decompose,
    DivIteration,
    Equation,
    Final,
    Form,
    PairwiseCombine,
    PartialProducts,
    Term,
    Trace,
)

ROLLBACK_MARK = "W"
NEXT_ESTIMATE = "#"


class ParseError(ValueError):
    """Unparseable trace text; ``offset`` is the UTF-8 byte offset of the failure."""

    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.message = message
        self.pos = pos
        self.offset = len(text[:pos].encode("utf-8"))
        super().__init__(f"{message} at byte offset {self.offset}")


def _render_value(x) -> str:
    if isinstance(x, ReversedLiteral):
        return x.render()
    return str(x)


def _scaled_term(multiplicand, digit: int, place: int) -> str:
    return f"{multiplicand}×{digit}{'0' * place}"


def _render_final(step: Final) -> str:
    if step.reversed:
        return to_reversed_literal(step.value).render()
    if step.remainder is not None and not step.remainder.is_zero:
        return f"{step.value}R{step.remainder}"
    return str(step.value)


def _mul_body(t: Trace, form: Form) -> list:
    parts = []
    for step in t.steps:
        if isinstance(step, Decompose):
            parts.append("+".join(_scaled_term(x.multiplicand, x.digit, x.place) for x in step.terms))
        elif isinstance(step, PartialProducts):
            parts.append("+".join(lit.render() for lit in step.literals))
        elif isinstance(step, PairwiseCombine):
            if form is Form.VERBOSE and len(step.pairs) > 1:
                parts.append("+".join(
                    "(" + "+".join(lit.render() for lit in g) + ")" if len(g) > 1 else g[0].render()
                    for g in step.pairs
                ))
            parts.append("+".join(lit.render() for lit in step.sums))
        elif isinstance(step, Final):
            parts.append(_render_final(step))
        else:
            raise TypeError(f"unexpected step in multiplication trace: {step!r}")
    return parts


def _div_body(t: Trace, form: Form) -> str:
    b = t.equation.b
    iterations, final = [], None
    prefix, minuend = "", str(t.equation.a)
    for step in t.steps:
        if isinstance(step, Final):
            final = _render_final(step)
            continue
        if not isinstance(step, DivIteration):
            raise TypeError(f"unexpected step in division trace: {step!r}")
        q, term = step.quotient_digit, _scaled_term(b, step.quotient_digit, step.place)
        prod, rem = step.product.render(), _render_value(step.remainder)
        mark = ROLLBACK_MARK if step.rolled_back else ""
        if form is Form.COMPACT:
            iterations.append(f"{q}R-({term})({prod})({rem}){mark}")
            continue
        qs = prefix + str(q)
        iterations.append(f"{qs}R({minuend}-{term})={qs}R({minuend}-{prod})={qs}R({rem}){mark}")
        if not step.rolled_back:
            prefix, minuend = qs, rem
    sep = NEXT_ESTIMATE if form is Form.COMPACT else "="
    body = sep.join(iterations)
    return body + "=" + final if final is not None else body


def serialize(t: Trace, form: Form = Form.VERBOSE) -> str:
    """Canonical text of a trace: no interior whitespace."""
    form = Form(form)
    head = f"{t.equation}="
    if t.op in (ADD, SUB):
        return head + "=".join(_render_final(s) for s in t.steps)
    if t.op == MUL:
        return head + "=".join(_mul_body(t, form))
    if t.op == DIV:
        return head + _div_body(t, form)
    raise ValueError(f"unknown operator {t.op!r}")


_INT = re.compile(r"-?[0-9]+")
_UINT = re.compile(r"[0-9]+")
_WORD = re.compile(r"[0-9A-Za-z]*")
_OPS = tuple(OP_ALIASES)


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message: str, pos: int = None):
        raise ParseError(message, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, *options) -> bool:
        self.skip()
        return any(self.text.startswith(o, self.pos) for o in options)

    def accept(self, *options):
        self.skip()
        for o in options:
            if self.text.startswith(o, self.pos):
                self.pos += len(o)
                return o
        return None

    def expect(self, *options, what: str = None) -> str:
        got = self.accept(*options)
        if got is None:
            self.error(f"expected {what or ' or '.join(repr(o) for o in options)}")
        return got

    def integer(self, signed: bool = False) -> str:
        self.skip()
        m = (_INT if signed else _UINT).match(self.text, self.pos)
        if not m:
            self.error("expected integer")
        self.pos = m.end()
        return m.group()

    def literal(self) -> ReversedLiteral:
        self.skip()
        start = self.pos
        negative = self.accept("-") is not None
        if self.accept("r|") is None:
            self.error("expected reversed literal 'r|…'", start)
        m = _WORD.match(self.text, self.pos)
        body = m.group()
        if not body or not (body.isascii() and body.isdigit()):
            self.error("literal with non-digit characters", self.pos)
        self.pos = m.end()
        try:
            return ReversedLiteral(body + ("-" if negative else ""))
        except LiteralError as exc:
            self.error(str(exc), start)

    def value(self):
        """A reversed literal or a bare forward integer."""
        if self.peek("r|", "-r|"):
            return self.literal()
        return DigitString.of(self.integer(signed=True))

    def minus(self):
        self.expect("-", "−", what="'-'")

    def remainder_marker(self):
        self.expect("Rem", "R", what="'R'")


def _literal_list(sc: _Scanner):
    items = [sc.literal()]
    while sc.accept("+"):
        items.append(sc.literal())
    return tuple(items)


def _scaled(sc: _Scanner):
    """'<multiplicand>×<digit><zeros>' -> (multiplicand text, digit, place)."""
    left = sc.integer()
    sc.expect(*[o for o in _OPS if OP_ALIASES[o] == MUL], what="'×'")
    start = sc.pos
    right = sc.integer()
    if right[1:].strip("0"):
        sc.error("scaled factor must be one digit followed by zeros", start)
    return left, int(right[0]), len(right) - 1


def _parse_mul(sc: _Scanner, eq: Equation):
    if len(eq.b) == 1:
        lit = sc.literal()
        return (Final(lit.value(), reversed=True),)
    terms = []
    while True:
        left, digit, place = _scaled(sc)
        terms.append(Term(DigitString.of(left), digit, place))
        if not sc.accept("+"):
            break
    steps = [Decompose(tuple(terms))]
    sc.expect("=")
    current = _literal_list(sc)
    steps.append(PartialProducts(current))
    while True:
        sc.expect("=")
        if sc.peek("("):
            groups = []
            while True:
                if sc.accept("("):
                    group = (sc.literal(), )
                    sc.expect("+")
                    group += (sc.literal(), )
                    sc.expect(")")
                else:
                    group = (sc.literal(), )
                groups.append(group)
                if not sc.accept("+"):
                    break
            sc.expect("=")
            sums = _literal_list(sc)
            steps.append(PairwiseCombine(tuple(groups), sums))
            current = sums
        elif sc.peek("r|", "-r|"):
            sums = _literal_list(sc)
            steps.append(PairwiseCombine(pair_up(current), sums))
            current = sums
        else:
            steps.append(Final(DigitString.of(sc.integer(signed=True)), reversed=False))
            return tuple(steps)


def _same_prefix(sc: _Scanner, q_text: str):
    start = sc.pos
    if sc.integer() != q_text:
        sc.error("quotient prefix changes within one iteration", start)
    sc.remainder_marker()


def _div_final(sc: _Scanner, quotient: str):
    remainder = ZERO
    if sc.accept("Rem", "R"):
        remainder = DigitString.of(sc.integer())
    return Final(DigitString.of(quotient), reversed=False, remainder=remainder)


def _parse_div(sc: _Scanner, eq: Equation):
    steps = []
    compact = None
    pending_w = None
    while True:
        start = sc.pos
        q_text = sc.integer()
        if sc.at_end() or not sc.peek("Rem", "R"):
            if pending_w is not None:
                sc.error("dangling 'W' with no successor iteration", pending_w)
            steps.append(Final(DigitString.of(q_text), reversed=False, remainder=ZERO))
            return tuple(steps)
        sc.remainder_marker()
        if sc.peek("-"):
            is_compact = True
        elif sc.peek("("):
            is_compact = False
        else:
            if pending_w is not None:
                sc.error("dangling 'W' with no successor iteration", pending_w)
            remainder = DigitString.of(sc.integer())
            steps.append(Final(DigitString.of(q_text), reversed=False, remainder=remainder))
            return tuple(steps)
        if compact is None:
            compact = is_compact
        elif compact != is_compact:
            sc.error("mixed verbose and compact iterations", start)

        if compact:
            if len(q_text) != 1:
                sc.error("compact iteration needs a single quotient digit", start)
            sc.minus()
            sc.expect("(")
            divisor, digit, place = _scaled(sc)
            sc.expect(")")
            sc.expect("(")
            product = sc.literal()
            sc.expect(")")
            sc.expect("(")
            rem = sc.value()
            sc.expect(")")
            minuend = prefix = None
        else:
            sc.expect("(")
            minuend = sc.value()
            sc.minus()
            divisor, digit, place = _scaled(sc)
            sc.expect(")")
            sc.expect("=")
            _same_prefix(sc, q_text)
            sc.expect("(")
            again = sc.pos
            if sc.value() != minuend:
                sc.error("minuend changes within one iteration", again)
            sc.minus()
            product = sc.literal()
            sc.expect(")")
            sc.expect("=")
            _same_prefix(sc, q_text)
            sc.expect("(")
            rem = sc.value()
            sc.expect(")")
            prefix = q_text
            if isinstance(minuend, ReversedLiteral):
                minuend = minuend.value()
        if DigitString.of(divisor) != eq.b:
            sc.error("iteration divisor differs from the equation divisor", start)
        if str(digit) != q_text[-1]:
            sc.error("multiplier digit differs from the quotient digit", start)

        w_at = sc.pos
        rolled_back = sc.accept(ROLLBACK_MARK) is not None
        steps.append(DivIteration(digit, place, product, rem, rolled_back,
                                  minuend=minuend, quotient_prefix=prefix))
        pending_w = w_at if rolled_back else None
        if compact:
            if sc.accept(NEXT_ESTIMATE):
                continue
            if pending_w is not None:
                sc.error("dangling 'W' with no successor iteration", pending_w)
            sc.expect("=")
            steps.append(_div_final(sc, sc.integer()))
            return tuple(steps)
        if sc.at_end():
            sc.error("division trace ends without a final result")
        sc.expect("=")


def parse(text: str) -> Trace:
    """Parse verbose or compact trace text (the form is detected)."""
    sc = _Scanner(text)
    if sc.at_end():
        sc.error("empty trace", 0)
    a = DigitString.of(sc.integer(signed=True))
    op_start = sc.pos
    op = sc.accept(*_OPS)
    if op is None:
        sc.error("expected operator", op_start)
    op = OP_ALIASES[op]
    b = DigitString.of(sc.integer(signed=True))
    eq = Equation(op, a, b)
    sc.expect("=")
    if op in (ADD, SUB):
        steps = (Final(sc.literal().value(), reversed=True),)
    elif op == MUL:
        steps = _parse_mul(sc, eq)
    else:
        steps = _parse_div(sc, eq)
    if not sc.at_end():
        sc.error("unexpected trailing input")
    final = steps[-1]
    return Trace(eq, steps, final.value, final.remainder if op == DIV else None)


def parse_equation(text: str) -> Equation:
    """Parse a bare ``a op b`` (an optional trailing '=' is allowed)."""
    sc = _Scanner(text)
    if sc.at_end():
        sc.error("empty equation", 0)
    a = DigitString.of(sc.integer(signed=True))
    op_start = sc.pos
    op = sc.accept(*_OPS)
    if op is None:
        sc.error("expected operator", op_start)
    b = DigitString.of(sc.integer(signed=True))
    sc.accept("=")
    if not sc.at_end():
        sc.error("unexpected trailing input")
    return Equation(OP_ALIASES[op], a, b)

"""RevOrder reasoning traces: generation, text form, and verification."""

from .generate import (
    estimate_quotient_digit,
    gen_add_trace,
    gen_div_trace,
    gen_mul_trace,
    gen_sub_trace,
    gen_trace,
    pair_up,
)
from .model import (
    ADD,
    DIV,
    MUL,
    NO_ROLLBACK,
    OP_ALIASES,
    OPS,
    SUB,
    Decompose,
    DivIteration,
    Equation,
    Final,
    Form,
    PairwiseCombine,
    PartialProducts,
    RollbackPlan,
    Step,
    Term,
    Trace,
)
from .text import ParseError, parse, parse_equation, serialize
from .verify import VALID, VerifyResult, verify

__all__ = [
    "ADD", "SUB", "MUL", "DIV", "OPS", "OP_ALIASES", "NO_ROLLBACK",
    "Decompose", "DivIteration", "Equation", "Final", "Form", "PairwiseCombine",
    "PartialProducts", "RollbackPlan", "Step", "Term", "Trace",
    "ParseError", "VALID", "VerifyResult",
    "estimate_quotient_digit", "gen_add_trace", "gen_sub_trace", "gen_mul_trace",
    "gen_div_trace", "gen_trace", "pair_up", "parse", "parse_equation", "serialize", "verify",
]

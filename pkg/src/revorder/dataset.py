"""RevOrder training-set synthesis, equation-chain rewriting and token costs."""

from __future__ import annotations

import bisect
import hashlib
import json
import random
from collections import Counter
from dataclasses import asdict, dataclass, field, replace
from multiprocessing import get_context
from pathlib import Path
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from .csid import classify_carry_chain
from .digits import DigitString, sub_with_borrows, to_reversed_literal
from .traces import (
    ADD,
    DIV,
    MUL,
    OP_ALIASES,
    SUB,
    DivIteration,
    Form,
    RollbackPlan,
    Trace,
    gen_div_trace,
    gen_trace,
    parse_equation,
    serialize,
)

PAPER_TOTAL = 1_700_000
PAPER_SHARES = {ADD: 0.15, SUB: 0.15, MUL: 0.25, DIV: 0.45}
MAX_EXCLUSION_RETRIES = 1000


class SpecError(ValueError):
    """The dataset spec cannot be satisfied."""


@dataclass(frozen=True)
class Bucket:
    op: str
    a_digits: int
    b_digits: int
    count: int


@dataclass(frozen=True)
class DatasetSpec:
    buckets: Tuple[Bucket, ...] = ()
    rollback_probability: float = 0.5
    # probability that an injected misestimate is +1 rather than -1
    rollback_plus_probability: float = 0.5
    form: Form = Form.COMPACT
    seed: int = 0
    exact_division: bool = False
    preset: Optional[str] = None

    @property
    def total(self) -> int:
        return sum(b.count for b in self.buckets)

    def validate(self) -> "DatasetSpec":
        if not 0.0 <= self.rollback_probability <= 1.0:
            raise SpecError(f"rollback_probability {self.rollback_probability} outside [0, 1]")
        if not 0.0 <= self.rollback_plus_probability <= 1.0:
            raise SpecError("rollback_plus_probability outside [0, 1]")
        if not 0 <= self.seed < 2 ** 64:
            raise SpecError("seed must be an unsigned 64-bit value")
        for b in self.buckets:
            if b.op not in (ADD, SUB, MUL, DIV):
                raise SpecError(f"unknown operation {b.op!r}")
            if b.count < 0:
                raise SpecError(f"negative count in {b}")
            if b.a_digits < 1 or b.b_digits < 1:
                raise SpecError(f"digit counts must be >= 1 in {b}")
            if b.op == DIV and b.b_digits > b.a_digits:
                raise SpecError(f"divisor wider than dividend in {b}")
            if self.preset == "paper" and not within_paper_caps(b):
                raise SpecError(f"{b} exceeds the preset digit caps")
        return self

    def to_dict(self) -> dict:
        d = asdict(self)
        d["form"] = self.form.value
        d["buckets"] = [asdict(b) for b in self.buckets]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "DatasetSpec":
        d = dict(d)
        d["buckets"] = tuple(
            Bucket(OP_ALIASES.get(b["op"], b["op"]), int(b["a_digits"]), int(b["b_digits"]), int(b["count"]))
            for b in d.get("buckets", ())
        )
        if "form" in d:
            d["form"] = Form(d["form"])
        return cls(**d)


def within_paper_caps(b: Bucket) -> bool:
    """Digit caps of the published training set."""
    if b.op in (ADD, SUB):
        return b.a_digits <= 16 and b.b_digits <= 16
    if b.op == MUL:
        return (b.a_digits <= 8 and b.b_digits <= 8) or (b.a_digits <= 16 and b.b_digits == 1)
    return b.a_digits <= 16 and b.b_digits <= b.a_digits


def _spread(total: int, keys: Sequence) -> List[int]:
    base, extra = divmod(total, len(keys))
    return [base + (1 if i < extra else 0) for i in range(len(keys))]


def paper_preset(total: int = PAPER_TOTAL, seed: int = 0, shares: Dict[str, float] = None,
                 **overrides) -> DatasetSpec:
    """A spec honouring the published caps and size with division as the largest class.

    Per-bucket proportions were not published; counts are spread evenly
    over the digit-size buckets of each operation.
    """
    shares = dict(PAPER_SHARES if shares is None else shares)
    shapes = {
        ADD: [(n, m) for n in range(1, 17) for m in range(1, n + 1)],
        SUB: [(n, m) for n in range(1, 17) for m in range(1, n + 1)],
        MUL: [(n, m) for n in range(1, 9) for m in range(1, 9)] + [(n, 1) for n in range(9, 17)],
        DIV: [(n, m) for n in range(1, 17) for m in range(1, n + 1)],
    }
    ops = list(shapes)
    weight = sum(shares.get(op, 0.0) for op in ops)
    per_op = [int(total * shares.get(op, 0.0) / weight) for op in ops]
    per_op[ops.index(DIV)] += total - sum(per_op)
    buckets = []
    for op, n_op in zip(ops, per_op):
        for (n, m), c in zip(shapes[op], _spread(n_op, shapes[op])):
            buckets.append(Bucket(op, n, m, c))
    spec = DatasetSpec(tuple(buckets), seed=seed, preset="paper")
    return replace(spec, **overrides).validate()


@dataclass(frozen=True)
class SampleRecord:
    prompt: str
    completion: str
    meta: Dict = field(default_factory=dict)

    @property
    def text(self) -> str:
        return self.prompt + self.completion

    def to_json(self) -> str:
        return json.dumps({"prompt": self.prompt, "completion": self.completion, **self.meta},
                          ensure_ascii=False, sort_keys=False)

    @classmethod
    def from_json(cls, line: str) -> "SampleRecord":
        d = json.loads(line)
        prompt, completion = d.pop("prompt"), d.pop("completion")
        return cls(prompt, completion, d)


def _digit_range(n: int) -> Tuple[int, int]:
    return (1 if n == 1 else 10 ** (n - 1)), 10 ** n - 1


def _sample_operands(rng: random.Random, bucket: Bucket, exact_division: bool) -> Tuple[int, int]:
    lo_a, hi_a = _digit_range(bucket.a_digits)
    lo_b, hi_b = _digit_range(bucket.b_digits)
    if bucket.op != DIV:
        return rng.randint(lo_a, hi_a), rng.randint(lo_b, hi_b)
    if exact_division:
        for _ in range(MAX_EXCLUSION_RETRIES):
            b = rng.randint(lo_b, hi_b)
            q_lo, q_hi = -(-lo_a // b), hi_a // b
            if q_lo <= q_hi:
                return b * rng.randint(q_lo, q_hi), b
        raise SpecError(f"no exactly divisible operands for {bucket}")
    a = rng.randint(lo_a, hi_a)
    return a, rng.randint(lo_b, min(hi_b, a))


def _record_rng(seed: int, index: int) -> random.Random:
    return random.Random(f"revorder:{seed}:{index}")


def _div_with_rollback(rng: random.Random, a: int, b: int, spec: DatasetSpec) -> Tuple[Trace, bool]:
    plain = gen_div_trace(a, b)
    if rng.random() >= spec.rollback_probability:
        return plain, False
    iterations = [s for s in plain.steps if isinstance(s, DivIteration)]
    idx = rng.randrange(len(iterations))
    delta = 1 if rng.random() < spec.rollback_plus_probability else -1
    if not 0 <= iterations[idx].quotient_digit + delta <= 9:
        delta = -delta
    return gen_div_trace(a, b, RollbackPlan.single(idx, delta)), True


def carry_chain_class(op: str, a: int, b: int) -> Optional[int]:
    if op == ADD:
        return classify_carry_chain(a, b)
    if op == SUB:
        return sub_with_borrows(DigitString.of(a), DigitString.of(b))[1].longest_run()
    return None


def make_record(spec: DatasetSpec, bucket: Bucket, index: int, exclude=frozenset()) -> SampleRecord:
    """The record at a global index; depends only on (seed, index, bucket)."""
    rng = _record_rng(spec.seed, index)
    for _ in range(MAX_EXCLUSION_RETRIES):
        a, b = _sample_operands(rng, bucket, spec.exact_division)
        if f"{a}{bucket.op}{b}" not in exclude:
            break
    else:
        raise SpecError(f"could not avoid the exclusion list in {bucket}")
    if bucket.op == DIV:
        trace, rolled = _div_with_rollback(rng, a, b, spec)
    else:
        trace, rolled = gen_trace(bucket.op, a, b), False
    text = serialize(trace, spec.form)
    prompt = f"{trace.equation}="
    meta = {
        "op": bucket.op,
        "a_digits": bucket.a_digits,
        "b_digits": bucket.b_digits,
        "rollback": rolled,
        "carry_chain": carry_chain_class(bucket.op, a, b),
    }
    return SampleRecord(prompt, text[len(prompt):], meta)


def _capacity(b: Bucket) -> int:
    lo_a, hi_a = _digit_range(b.a_digits)
    lo_b, hi_b = _digit_range(b.b_digits)
    if b.op == DIV and b.a_digits == b.b_digits:
        n = hi_a - lo_a + 1
        return n * (n + 1) // 2
    return (hi_a - lo_a + 1) * (hi_b - lo_b + 1)


def check_feasible(spec: DatasetSpec, exclude=frozenset()):
    """Reject buckets whose every candidate equation is excluded."""
    spec.validate()
    excluded = Counter()
    for eq in exclude:
        try:
            e = parse_equation(eq)
        except ValueError:
            continue
        excluded[(e.op, len(e.a), len(e.b))] += 1
    for b in spec.buckets:
        if b.count and excluded[(b.op, b.a_digits, b.b_digits)] >= _capacity(b):
            raise SpecError(f"every candidate of {b} is on the exclusion list")


def _layout(spec: DatasetSpec):
    starts, pos = [], 0
    for b in spec.buckets:
        starts.append(pos)
        pos += b.count
    return starts, pos


def _records_between(spec: DatasetSpec, exclude, start: int, stop: int) -> List[SampleRecord]:
    starts, _ = _layout(spec)
    out = []
    for index in range(start, stop):
        bucket = spec.buckets[bisect.bisect_right(starts, index) - 1]
        out.append(make_record(spec, bucket, index, exclude))
    return out


def _chunk_worker(args):
    spec_dict, exclude, start, stop = args
    spec = DatasetSpec.from_dict(spec_dict)
    return [r.to_json() for r in _records_between(spec, exclude, start, stop)]


def normalize_exclusions(lines: Iterable[str]) -> frozenset:
    """Canonical equation strings from an exclusion list (aliases like '*' allowed)."""
    out = set()
    for line in lines:
        line = line.strip()
        if line:
            out.add(str(parse_equation(line)))
    return frozenset(out)


def synth(spec: DatasetSpec, exclude: Iterable[str] = (), workers: int = 1,
          chunk_size: int = 2000) -> Iterator[SampleRecord]:
    """Stream the records of a spec in index order.

    Output is identical for any worker count: each record is seeded from
    (spec.seed, index) alone.
    """
    exclude = normalize_exclusions(exclude)
    check_feasible(spec, exclude)
    _, total = _layout(spec)
    if workers <= 1 or total <= chunk_size:
        yield from _records_between(spec, exclude, 0, total)
        return
    jobs = [(spec.to_dict(), exclude, s, min(s + chunk_size, total)) for s in range(0, total, chunk_size)]
    with get_context("spawn").Pool(workers) as pool:
        for lines in pool.imap(_chunk_worker, jobs):
            for line in lines:
                yield SampleRecord.from_json(line)


def write_dataset(spec: DatasetSpec, out: Union[str, Path], exclude: Iterable[str] = (),
                  workers: int = 1) -> Path:
    """Write JSONL records plus a ``<out>.manifest.json`` sidecar; returns the manifest path."""
    out = Path(out)
    digest = hashlib.sha256()
    n = 0
    with out.open("w", encoding="utf-8", newline="\n") as fh:
        for record in synth(spec, exclude, workers):
            line = record.to_json() + "\n"
            fh.write(line)
            digest.update(line.encode("utf-8"))
            n += 1
    manifest = out.with_name(out.name + ".manifest.json")
    manifest.write_text(json.dumps({
        "spec": spec.to_dict(),
        "seed": spec.seed,
        "records": n,
        "sha256": digest.hexdigest(),
    }, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
    return manifest


def distribution_report(records: Iterable) -> Counter:
    """Histogram keyed by (op, a_digits, b_digits, rollback)."""
    hist = Counter()
    for r in records:
        meta = r.meta if isinstance(r, SampleRecord) else r
        hist[(meta["op"], meta["a_digits"], meta["b_digits"], bool(meta["rollback"]))] += 1
    return hist


def op_totals(hist: Counter) -> Counter:
    totals = Counter()
    for (op, *_), n in hist.items():
        totals[op] += n
    return totals


_CHAIN_TOKEN_OPS = {"+": ADD, "-": SUB, "−": SUB, "×": MUL, "*": MUL}
_UNSUPPORTED = set("÷/()^")


def _tokenize_chain(chain) -> list:
    if not isinstance(chain, str):
        return [str(t) for t in chain]
    tokens, i, s = [], 0, "".join(chain.split())
    while i < len(s):
        c = s[i]
        if c.isdigit() or (c == "-" and (not tokens or tokens[-1] in _CHAIN_TOKEN_OPS) and i + 1 < len(s)):
            j = i + 1
            while j < len(s) and s[j].isdigit():
                j += 1
            tokens.append(s[i:j])
            i = j
        else:
            tokens.append(c)
            i += 1
    return tokens


def _reversed_form(value: int) -> str:
    lit = to_reversed_literal(DigitString.of(value))
    return ("-" if lit.negative else "") + "@@" + lit.body + "@@"


def rewrite_equation_chain(chain: Union[str, Sequence], forward_intermediates: bool = False) -> str:
    """Reduce a flat +,-,× chain left to right, one pair at a time.

    Each intermediate result is written reversed inside @@ delimiters; with
    ``forward_intermediates`` its forward form follows it, e.g.
    ``12+34+5=@@64@@=46+5=@@15@@=51``. The default omits it:
    ``1+2+4=@@3@@+4=@@7@@=7``.
    """
    tokens = _tokenize_chain(chain)
    if not tokens:
        raise ValueError("empty chain")
    operands, ops = tokens[0::2], tokens[1::2]
    if len(operands) != len(ops) + 1:
        raise ValueError(f"chain must alternate operands and operators: {tokens}")
    for op in ops:
        if op not in _CHAIN_TOKEN_OPS:
            raise ValueError(f"unsupported operator {op!r} in chain")
    try:
        values = [int(DigitString.of(x)) for x in operands]
    except ValueError:
        raise ValueError(f"bad operand in chain: {operands}") from None

    syms = [_CHAIN_TOKEN_OPS[op] for op in ops]
    out = ["".join(str(v) + sym for v, sym in zip(values, syms)) + str(values[-1])]
    acc = values[0]
    for i, sym in enumerate(syms):
        rhs = values[i + 1]
        acc = acc + rhs if sym == ADD else acc - rhs if sym == SUB else acc * rhs
        tail = "".join(s + str(v) for s, v in zip(syms[i + 1:], values[i + 2:]))
        if forward_intermediates and tail:
            out += [_reversed_form(acc), str(acc) + tail]
        else:
            out.append(_reversed_form(acc) + tail)
    if ops:
        out.append(str(acc))
    return "=".join(out)


def bare_equation(t: Trace) -> str:
    """``a op b=result`` with no reasoning steps."""
    result = str(t.final)
    if t.op == DIV and t.remainder is not None and not t.remainder.is_zero:
        result += f"R{t.remainder}"
    return f"{t.equation}={result}"


def count_tokens(text: str) -> int:
    """One token per character, with 'r|' counted as a single token."""
    return len(text) - text.count("r|")


def token_cost(t: Trace, form: Form = Form.COMPACT) -> Tuple[int, int]:
    """(total tokens, tokens beyond the bare equation) of a serialized trace."""
    total = count_tokens(serialize(t, form))
    return total, total - count_tokens(bare_equation(t))


def size_operands(op: str, size: int) -> Tuple[int, int]:
    """Operand digit counts used for a 'size' in token-cost tables.

    Addition, subtraction and multiplication use size x size; division
    uses a (2*size)-digit dividend over a size-digit divisor.
    """
    op = OP_ALIASES[op]
    return (2 * size, size) if op == DIV else (size, size)


def token_cost_table(op: str, sizes: Iterable[int], samples: int = 100, seed: int = 0,
                     forms: Sequence[Form] = (Form.VERBOSE, Form.COMPACT)) -> List[dict]:
    """Mean total and extra tokens per operand size and serialization form."""
    op = OP_ALIASES[op]
    rows = []
    for size in sizes:
        n, m = size_operands(op, size)
        bucket = Bucket(op, n, m, samples)
        rng = random.Random(f"revorder-stats:{seed}:{op}:{size}")
        traces = [gen_trace(op, *_sample_operands(rng, bucket, False)) for _ in range(samples)]
        for form in forms:
            costs = [token_cost(t, form) for t in traces]
            rows.append({
                "op": op,
                "size": size,
                "a_digits": n,
                "b_digits": m,
                "form": form.value,
                "mean_total": sum(c[0] for c in costs) / samples,
                "mean_extra": sum(c[1] for c in costs) / samples,
            })
    return rows

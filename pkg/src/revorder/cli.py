"""Command-line interface: gen, verify, csid, synth, stats, score.

Exit codes:
  0  success
  2  usage error (bad flags)
  3  malformed input (unparseable equation or trace, division by zero,
     mismatched line counts)
  4  verification failure (at least one invalid trace)
  5  I/O error
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import List, Optional, Tuple

from . import csid as csid_mod
from .dataset import (
    Bucket,
    DatasetSpec,
    SampleRecord,
    SpecError,
    distribution_report,
    paper_preset,
    token_cost_table,
    write_dataset,
)
from .digits import from_reversed_literal
from .traces import (
    ADD,
    DIV,
    MUL,
    OP_ALIASES,
    SUB,
    Form,
    ParseError,
    RollbackPlan,
    gen_trace,
    parse,
    parse_equation,
    serialize,
    verify,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3
EXIT_INVALID = 4
EXIT_IO = 5
MAX_ERROR_EXAMPLES = 5
GLOBAL_FLAGS = ("form", "seed", "out")
OP_NAMES = {"add": ADD, "sub": SUB, "mul": MUL, "div": DIV}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


@contextlib.contextmanager
def _output(args):
    if args.out in (None, "-"):
        yield sys.stdout
        return
    try:
        fh = open(args.out, "w", encoding="utf-8", newline="\n")
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO)
    with fh:
        yield fh


def _read_lines(path: str) -> List[str]:
    try:
        if path == "-":
            return sys.stdin.read().splitlines()
        return Path(path).read_text(encoding="utf-8").splitlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise CliError(f"cannot read {path}: {exc}", EXIT_IO)


def _form(args, default: Form) -> Form:
    return Form(args.form) if args.form else default


def _parse_rollback(values) -> RollbackPlan:
    deltas = []
    for v in values or ():
        try:
            idx, delta = v.split(":")
            deltas.append((int(idx), int(delta)))
        except ValueError:
            raise CliError(f"--rollback expects ITER:DELTA such as 0:+1, got {v!r}", EXIT_USAGE)
    try:
        return RollbackPlan(tuple(deltas))
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE)


def cmd_gen(args) -> int:
    try:
        eq = parse_equation(args.equation)
    except ValueError as exc:
        raise CliError(f"malformed equation {args.equation!r}: {exc}", EXIT_INPUT)
    plan = _parse_rollback(args.rollback)
    try:
        trace = gen_trace(eq.op, eq.a, eq.b, plan)
    except ZeroDivisionError:
        raise CliError(f"division by zero in {args.equation!r}", EXIT_INPUT)
    except ValueError as exc:
        raise CliError(f"cannot generate {args.equation!r}: {exc}", EXIT_INPUT)
    with _output(args) as out:
        out.write(serialize(trace, _form(args, Form.VERBOSE)) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    lines = _read_lines(args.input)
    total = valid = 0
    with _output(args) as out:
        for lineno, line in enumerate(lines, 1):
            if not line.strip():
                continue
            total += 1
            try:
                result = verify(parse(line))
                report, ok = str(result), result.valid
            except ParseError as exc:
                report, ok = f"INVALID parse error: {exc}", False
            valid += ok
            out.write(f"line {lineno}: {report}\n")
        out.write(f"summary: {valid}/{total} valid\n")
    return EXIT_OK if valid == total else EXIT_INVALID


def _csid_line(args) -> str:
    if args.worstcase:
        if args.n is None:
            raise CliError("--worstcase needs -n", EXIT_USAGE)
        try:
            value = csid_mod.csid_worstcase(args.worstcase, args.n, args.m)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_INPUT)
        return f"{args.worstcase} n={args.n} m={args.m if args.m is not None else args.n}: {value}"
    if not args.equation:
        raise CliError("csid needs an equation or --worstcase", EXIT_USAGE)
    try:
        eq = parse_equation(args.equation)
    except ValueError as exc:
        raise CliError(f"malformed equation {args.equation!r}: {exc}", EXIT_INPUT)
    if eq.op not in (ADD, SUB):
        raise CliError("csid of a concrete equation supports + and - only", EXIT_INPUT)
    plain = csid_mod.csid_add_sub(eq.a, eq.b, csid_mod.FormatPolicy.PLAIN, eq.op)
    rev = csid_mod.csid_add_sub(eq.a, eq.b, csid_mod.FormatPolicy.REVORDER, eq.op)
    return f"plain={plain.max_csid} revorder={rev.max_csid}"


def cmd_csid(args) -> int:
    line = _csid_line(args)
    with _output(args) as out:
        out.write(line + "\n")
    return EXIT_OK


def _parse_bucket(text: str) -> Bucket:
    try:
        op, n, m, count = text.split(":")
        return Bucket(OP_ALIASES[op], int(n), int(m), int(count))
    except (ValueError, KeyError):
        raise CliError(f"--bucket expects OP:A_DIGITS:B_DIGITS:COUNT, got {text!r}", EXIT_USAGE)


def _synth_spec(args) -> DatasetSpec:
    if args.spec:
        try:
            spec = DatasetSpec.from_dict(json.loads(Path(args.spec).read_text(encoding="utf-8")))
        except OSError as exc:
            raise CliError(f"cannot read {args.spec}: {exc}", EXIT_IO)
        except (ValueError, KeyError, TypeError) as exc:
            raise CliError(f"bad spec file {args.spec}: {exc}", EXIT_INPUT)
    elif args.preset == "paper":
        spec = paper_preset(total=args.total if args.total is not None else 1_700_000)
    else:
        spec = DatasetSpec(tuple(_parse_bucket(b) for b in args.bucket or ()))
    changes = {"seed": args.seed}
    if args.form:
        changes["form"] = Form(args.form)
    if args.rollback_probability is not None:
        changes["rollback_probability"] = args.rollback_probability
    if args.exact_division:
        changes["exact_division"] = True
    return replace(spec, **changes)


def cmd_synth(args) -> int:
    if args.seed is None:
        raise CliError("synth requires an explicit --seed", EXIT_USAGE)
    if not args.out or args.out == "-":
        raise CliError("synth requires --out <path>", EXIT_USAGE)
    spec = _synth_spec(args)
    exclude = _read_lines(args.exclude) if args.exclude else ()
    try:
        manifest = write_dataset(spec, args.out, exclude, workers=args.workers)
    except SpecError as exc:
        raise CliError(f"invalid dataset spec: {exc}", EXIT_INPUT)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}", EXIT_IO)
    print(f"wrote {spec.total} records to {args.out} (manifest {manifest})", file=sys.stderr)
    return EXIT_OK


def _parse_sizes(text: str) -> List[int]:
    try:
        if "-" in text:
            lo, hi = text.split("-")
            return list(range(int(lo), int(hi) + 1))
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise CliError(f"--sizes expects LO-HI or a comma list, got {text!r}", EXIT_USAGE)


def cmd_stats(args) -> int:
    if args.dataset:
        lines = _read_lines(args.dataset)
        try:
            hist = distribution_report(SampleRecord.from_json(line) for line in lines if line.strip())
        except (ValueError, KeyError) as exc:
            raise CliError(f"bad dataset line in {args.dataset}: {exc}", EXIT_INPUT)
        with _output(args) as out:
            out.write("op\ta_digits\tb_digits\trollback\tcount\n")
            for (op, n, m, rolled), count in sorted(hist.items()):
                out.write(f"{op}\t{n}\t{m}\t{int(rolled)}\t{count}\n")
        return EXIT_OK
    forms = [Form(args.form)] if args.form else [Form.VERBOSE, Form.COMPACT]
    rows = token_cost_table(args.op, _parse_sizes(args.sizes), args.samples,
                            args.seed if args.seed is not None else 0, forms)
    with _output(args) as out:
        out.write("op\tsize\ta_digits\tb_digits\tform\tmean_total\tmean_extra\n")
        for r in rows:
            out.write(f"{r['op']}\t{r['size']}\t{r['a_digits']}\t{r['b_digits']}\t{r['form']}\t"
                      f"{r['mean_total']:.2f}\t{r['mean_extra']:.2f}\n")
    return EXIT_OK


@dataclass
class ScoreReport:
    total: int = 0
    exact_matches: int = 0
    first_error_examples: List[Tuple[int, str, str]] = field(default_factory=list)

    @property
    def precision(self) -> float:
        return self.exact_matches / self.total if self.total else 0.0

    def render(self) -> str:
        lines = [f"total={self.total} exact={self.exact_matches} precision={self.precision:.6f}"]
        for lineno, expected, found in self.first_error_examples:
            lines.append(f"line {lineno}: expected {expected!r} found {found!r}")
        return "\n".join(lines)


def decode_answer(line: str) -> str:
    """Forward answer from a prediction: last '=' segment, un-reversed if needed."""
    answer = line.rsplit("=", 1)[-1].strip()
    negative = answer.startswith("-r|")
    body = answer[1:] if negative else answer
    if body.startswith("r|"):
        try:
            value = from_reversed_literal(body[2:] + ("-" if negative else ""))
        except ValueError:
            return answer
        return str(value)
    return answer


def score_lines(predictions: List[str], gold: List[str], decode: bool = False) -> ScoreReport:
    if len(predictions) != len(gold):
        raise ValueError(f"line counts differ: {len(predictions)} predictions vs {len(gold)} gold")
    report = ScoreReport()
    for lineno, (p, g) in enumerate(zip(predictions, gold), 1):
        p, g = p.rstrip(), g.rstrip()
        if decode:
            p = decode_answer(p)
        report.total += 1
        if p == g:
            report.exact_matches += 1
        elif len(report.first_error_examples) < MAX_ERROR_EXAMPLES:
            report.first_error_examples.append((lineno, g, p))
    return report


def cmd_score(args) -> int:
    predictions, gold = _read_lines(args.predictions), _read_lines(args.gold)
    try:
        report = score_lines(predictions, gold, args.decode)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_INPUT)
    with _output(args) as out:
        out.write(report.render() + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand from resetting a global flag given before it.
    common.add_argument("--form", choices=[f.value for f in Form], default=argparse.SUPPRESS,
                        help="trace serialization form")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="unsigned 64-bit seed")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output path (default: stdout)")

    parser = argparse.ArgumentParser(
        prog="revorder", parents=[common],
        description="RevOrder arithmetic traces.",
        epilog="exit codes: 0 ok, 2 usage, 3 malformed input, 4 verification failure, 5 I/O error",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="print the trace of one equation")
    p.add_argument("equation", help="e.g. 123+46, 12*4567, 948/12")
    p.add_argument("--rollback", action="append", metavar="ITER:DELTA",
                   help="misestimate division iteration ITER by DELTA (+1/-1); repeatable")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", parents=[common], help="verify one trace per line")
    p.add_argument("input", help="trace file, or - for stdin")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("csid", parents=[common], help="CSID of an equation or a worst case")
    p.add_argument("equation", nargs="?", help="e.g. 123+179")
    p.add_argument("--worstcase", choices=csid_mod.WORSTCASE_OPS)
    p.add_argument("-n", type=int, help="digits of the larger operand")
    p.add_argument("-m", type=int, help="digits of the smaller operand")
    p.set_defaults(func=cmd_csid)

    p = sub.add_parser("synth", parents=[common], help="write a RevOrder dataset")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--spec", help="DatasetSpec JSON file")
    src.add_argument("--preset", choices=["paper"])
    src.add_argument("--bucket", action="append", metavar="OP:A:B:COUNT",
                     help="e.g. '/:12:6:1000'; repeatable")
    p.add_argument("--total", type=int, help="record count for --preset")
    p.add_argument("--rollback-probability", type=float)
    p.add_argument("--exact-division", action="store_true", help="only divisions with remainder 0")
    p.add_argument("--exclude", help="newline-delimited equations never to emit")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("stats", parents=[common], help="token-cost table or dataset histogram")
    p.add_argument("--op", default="mul", help="add, sub, mul, div (or + - * /)")
    p.add_argument("--sizes", default="2-8", help="operand sizes, LO-HI or comma list")
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--dataset", help="histogram a JSONL dataset instead")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("score", parents=[common], help="exact-match precision")
    p.add_argument("predictions")
    p.add_argument("gold")
    p.add_argument("--decode", action="store_true",
                   help="reduce each prediction to its forward final answer first")
    p.set_defaults(func=cmd_score)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in GLOBAL_FLAGS:
        if not hasattr(args, name):
            setattr(args, name, None)
    if args.command == "stats":
        args.op = OP_NAMES.get(args.op, args.op)
        if args.op not in OP_ALIASES:
            parser.error(f"unknown --op {args.op!r}")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"revorder {args.command}: {exc}", file=sys.stderr)
        if exc.code == EXIT_USAGE:
            parser.print_usage(sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())

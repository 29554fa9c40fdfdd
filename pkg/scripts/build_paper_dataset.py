"""Synthesize the full-size preset dataset (1.7M records) and print its composition.

Use --total for a smaller run with the same shape.
"""
import argparse
import time

from revorder.dataset import (
    PAPER_TOTAL,
    SampleRecord,
    distribution_report,
    op_totals,
    paper_preset,
    write_dataset,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", required=True)
    ap.add_argument("--total", type=int, default=PAPER_TOTAL)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()

    spec = paper_preset(total=args.total, seed=args.seed)
    start = time.perf_counter()
    manifest = write_dataset(spec, args.out, workers=args.workers)
    print(f"wrote {spec.total} records in {time.perf_counter() - start:.1f}s, manifest {manifest}")

    with open(args.out, encoding="utf-8") as fh:
        hist = distribution_report(SampleRecord.from_json(line) for line in fh)
    for op, count in sorted(op_totals(hist).items()):
        print(f"{op}\t{count}\t{count / spec.total:.3f}")
    rolled = sum(c for (op, _, _, r), c in hist.items() if r)
    divs = op_totals(hist).get("÷", 0)
    if divs:
        print(f"division rollback fraction {rolled / divs:.4f}")


if __name__ == "__main__":
    main()

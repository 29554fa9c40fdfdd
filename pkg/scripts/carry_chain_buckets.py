"""Histogram of plain-format CSID (longest carry chain) over random 15D+15D additions.

Also reports the RevOrder CSID, which stays at most 1 for every sample.
"""
import argparse
import random
from collections import Counter

from revorder.csid import FormatPolicy, csid_add_sub


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--digits", type=int, default=15)
    ap.add_argument("--samples", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    lo, hi = 10 ** (args.digits - 1), 10 ** args.digits - 1
    plain, rev = Counter(), Counter()
    for _ in range(args.samples):
        a, b = rng.randint(lo, hi), rng.randint(lo, hi)
        plain[csid_add_sub(a, b, FormatPolicy.PLAIN).max_csid] += 1
        rev[csid_add_sub(a, b, FormatPolicy.REVORDER).max_csid] += 1

    print(f"{args.samples} samples of {args.digits}D+{args.digits}D, seed {args.seed}")
    print("csid\tplain\trevorder")
    for k in range(max(plain) + 1):
        print(f"{k}\t{plain[k]}\t{rev[k]}")


if __name__ == "__main__":
    main()

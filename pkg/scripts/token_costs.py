"""Mean total and extra tokens per trace by operand size, for each operator and form."""
import argparse

from revorder.dataset import token_cost_table
from revorder.traces import ADD, DIV, MUL, SUB, Form


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-size", type=int, default=8)
    ap.add_argument("--samples", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    sizes = range(1, args.max_size + 1)
    print("op\tsize\tform\tmean_total\tmean_extra")
    for op in (ADD, SUB, MUL, DIV):
        for row in token_cost_table(op, sizes, args.samples, args.seed, (Form.VERBOSE, Form.COMPACT)):
            print(f"{op}\t{row['size']}\t{row['form']}\t{row['mean_total']:.2f}\t{row['mean_extra']:.2f}")


if __name__ == "__main__":
    main()

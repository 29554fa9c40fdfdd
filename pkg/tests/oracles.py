"""Independent reference implementations used by the tests.

These work on big-endian decimal strings and Python ints and share no code
with the package.
"""

import random


def column_add(x: int, y: int):
    """Schoolbook addition of two non-negative ints; carries little-endian."""
    sx, sy = str(x), str(y)
    width = max(len(sx), len(sy))
    sx, sy = sx.zfill(width), sy.zfill(width)
    carries, carry = [], 0
    for i in range(width - 1, -1, -1):
        carry = 1 if int(sx[i]) + int(sy[i]) + carry > 9 else 0
        carries.append(carry)
    return x + y, carries


def column_sub(x: int, y: int):
    """Schoolbook |x| - |y| of the larger minus the smaller magnitude."""
    big, small = (x, y) if x >= y else (y, x)
    sb, ss = str(big), str(small).zfill(len(str(big)))
    borrows, borrow = [], 0
    for i in range(len(sb) - 1, -1, -1):
        borrow = 1 if int(sb[i]) - int(ss[i]) - borrow < 0 else 0
        borrows.append(borrow)
    return x - y, borrows


def column_mul1d(x: int, d: int):
    carries, carry = [], 0
    for ch in reversed(str(x)):
        carry = (int(ch) * d + carry) // 10
        carries.append(carry)
    return x * d, carries


def longest_run(bits):
    best = run = 0
    for b in bits:
        run = run + 1 if b else 0
        best = max(best, run)
    return best


def random_digits(rng: random.Random, n: int) -> int:
    """Uniform n-digit positive integer (1..9 for n == 1)."""
    return rng.randint(1 if n == 1 else 10 ** (n - 1), 10 ** n - 1)

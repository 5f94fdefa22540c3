#!/usr/bin/env python3
"""Recompute the frozen first-moment oracle constants exactly.

The acceptance suite gates the sample mean of the dominating-set count X_k
on G(30, 0.3) against E X_k = C(n,k) * (1 - (1-p)^k)^(n-k). The expected
values are frozen in the test source as correctly rounded f64 literals; this
script rederives them with exact rational arithmetic (p = 3/10) so the
constants never depend on the library under test.

Run: python3 scripts/recompute_moment_oracle.py
"""

from fractions import Fraction
from math import comb


def first_moment(n: int, k: int, p: Fraction) -> Fraction:
    """E X_k for G(n, p): each k-set dominates the other n-k vertices
    independently with probability 1 - (1-p)^k."""
    return comb(n, k) * (1 - (1 - p) ** k) ** (n - k)


def main() -> None:
    n, p = 30, Fraction(3, 10)
    print(f"# exact E X_k for G({n}, {float(p)}) — paste into the acceptance suite")
    for k in (2, 3, 4):
        value = first_moment(n, k, p)
        print(f"(30, {k}, {float(value):.17e}),")


if __name__ == "__main__":
    main()

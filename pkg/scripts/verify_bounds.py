#!/usr/bin/env python3
"""Cross-check the analytic Toffoli budgets by independent summation.

Recomputes every budget with explicit loops and exact rational arithmetic
(no shared code with the package's evaluator) and compares against
``blocksynth.bounds``.  Exits nonzero on any mismatch.

Usage: python3 scripts/verify_bounds.py [max_width]
"""

from __future__ import annotations

import sys
from fractions import Fraction
from math import ceil, comb

from blocksynth import bounds, preprocessing_bound


def conjoin_budget(n: int) -> int:
    """Pair-construction worst case: positions at region scale m cost one
    m-control gate (2m-3 Toffoli-equivalents) and there are 2^(n-m) of
    them; the final position is forced and free, so m stops at n-1."""
    return sum((2 * m - 3) * (1 << (n - m)) for m in range(2, n))


def slide_budget(n: int) -> int:
    """Left-slide worst case, summed over gate sizes and position counts."""
    total = 0
    for j in range(2, n - 1):
        for i in range(2, n - j + 1):
            total += (2 * i - 3) * comb(n - j, i)
    return total


def conditioning_budget(n: int) -> int:
    s = Fraction(5 * (1 << n), 16) + 2 * n - 5
    for i in range(2, n - 2):
        s += (2 * i - 3) * comb(n - 3, i)
    return ceil(s)


def rebalance_budget(n: int) -> int:
    s = Fraction(3 * (1 << n), 16) - 1
    for i in range(2, n - 2):
        s += (2 * i - 3) * comb(n - 3, i)
    return ceil(s)


def main() -> int:
    max_width = int(sys.argv[1]) if len(sys.argv) > 1 else 12
    header = f"{'n':>3} {'n_c':>8} {'n_a':>8} {'extra':>8} {'pre':>8} {'total':>8} {'cumul':>9}"
    print(header)
    failures = 0
    cumulative = 0
    for n in range(3, max_width + 1):
        b = bounds(n)
        mine = {
            "n_c": conjoin_budget(n),
            "n_a": slide_budget(n),
            "extra": conditioning_budget(n),
            "preprocessing": rebalance_budget(n),
        }
        theirs = {
            "n_c": b.n_c,
            "n_a": b.n_a,
            "extra": b.extra,
            "preprocessing": preprocessing_bound(n),
        }
        total = mine["n_c"] + mine["n_a"] + mine["extra"]
        cumulative += total
        row_ok = mine == theirs and total == b.per_reduction_total
        print(
            f"{n:>3} {mine['n_c']:>8} {mine['n_a']:>8} {mine['extra']:>8} "
            f"{mine['preprocessing']:>8} {total:>8} {cumulative:>9}"
            + ("" if row_ok else "  MISMATCH")
        )
        if not row_ok:
            failures += 1
            for key in mine:
                if mine[key] != theirs[key]:
                    print(
                        f"    {key}: independent {mine[key]} != package {theirs[key]}",
                        file=sys.stderr,
                    )
            if total != b.per_reduction_total:
                print(
                    f"    total: independent {total} != package {b.per_reduction_total}",
                    file=sys.stderr,
                )
    if failures:
        print(f"{failures} width(s) disagree", file=sys.stderr)
        return 1
    print("all widths agree")
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Independent oracles shared by the test suite.

Everything here recomputes expectations from first principles (bit fiddling,
brute-force search, explicit summation) without calling into the package's
own logic, so that tests compare two genuinely separate computations.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import ceil, comb


def sim_gate(width: int, target: int, controls, x: int) -> int:
    """Reference semantics of one multiple-controlled NOT on input ``x``.

    Lines are 1-based with line 1 the most significant bit.  ``controls``
    holds (line, polarity) pairs; the target bit flips iff every control
    line carries its polarity.
    """
    for line, polarity in controls:
        bit = (x >> (width - line)) & 1
        if bit != (1 if polarity else 0):
            return x
    return x ^ (1 << (width - target))


def sim_circuit(width: int, gates, x: int) -> int:
    """Run [(target, controls), ...] left-to-right on ``x``."""
    for target, controls in gates:
        x = sim_gate(width, target, controls, x)
    return x


def as_plain(seq):
    """Strip a GateSequence down to [(target, ((line, polarity), ...)), ...]."""
    return [(g.target, tuple(g.controls)) for g in seq]


def circuit_table(width: int, gates) -> list[int]:
    """Full input/output table of a plain-form circuit."""
    return [sim_circuit(width, gates, x) for x in range(1 << width)]


def balanced_entries(width: int, seed: int) -> tuple[int, ...]:
    """Row placement with half the pairs normal, half inverted, none mixed.

    Pair ⟨2j, 2j+1⟩ is normal when each member sits at a column of its own
    parity and inverted when both sit at the opposite parity.  The first
    half of the pairs is laid out normal, the rest inverted, over shuffled
    even/odd column pools.
    """
    size = 1 << width
    rng = random.Random(f"{seed}:balanced:{width}")
    evens = list(range(0, size, 2))
    odds = list(range(1, size, 2))
    rng.shuffle(evens)
    rng.shuffle(odds)
    entries = [0] * size
    quarter = size // 4
    for j in range(size // 2):
        if j < quarter:  # normal: even row -> even column, odd row -> odd
            entries[evens.pop()] = 2 * j
            entries[odds.pop()] = 2 * j + 1
        else:  # inverted: even row -> odd column, odd row -> even
            entries[odds.pop()] = 2 * j
            entries[evens.pop()] = 2 * j + 1
    return tuple(entries)


def independent_parity(entries) -> str:
    """Sign of a permutation by cycle decomposition (no package code)."""
    seen = [False] * len(entries)
    transpositions = 0
    for start in range(len(entries)):
        if seen[start]:
            continue
        length = 0
        c = start
        while not seen[c]:
            seen[c] = True
            c = entries[c]
            length += 1
        transpositions += length - 1
    return "odd" if transpositions % 2 else "even"


def mismatch_rows(entries) -> int:
    """Rows belonging to a pair with exactly one parity-mismatched member."""
    size = len(entries)
    pos = [0] * size
    for col, row in enumerate(entries):
        pos[row] = col
    count = 0
    for j in range(size // 2):
        a_bad = (2 * j ^ pos[2 * j]) & 1
        b_bad = ((2 * j + 1) ^ pos[2 * j + 1]) & 1
        if a_bad != b_bad:
            count += 2
    return count


# --- Independent recomputation of the analytic gate budgets. ---------------


def conjoin_budget(n: int) -> int:
    """Worst-case Toffoli-equivalents spent conjoining all pairs.

    A position needing an m-control gate contributes 2m-3; the 2^(n-m)
    positions sharing region scale m are summed explicitly, skipping the
    final forced position.
    """
    total = 0
    for m in range(2, n):
        total += (2 * m - 3) * (1 << (n - m))
    return total


def slide_budget(n: int) -> int:
    """Worst-case Toffoli-equivalents spent sliding conjoined pairs left."""
    total = 0
    for j in range(2, n - 1):
        for i in range(2, n - j + 1):
            total += (2 * i - 3) * comb(n - j, i)
    return total


def conditioning_budget(n: int) -> int:
    """Worst-case Toffoli-equivalents of the balancing passes, rounded up."""
    s = Fraction(5 * (1 << n), 16) + 2 * n - 5
    for i in range(2, n - 2):
        s += (2 * i - 3) * comb(n - 3, i)
    return ceil(s)


def rebalance_budget(n: int) -> int:
    """Worst-case Toffoli-equivalents of the half-to-quarter conversion."""
    s = Fraction(3 * (1 << n), 16) - 1
    for i in range(2, n - 2):
        s += (2 * i - 3) * comb(n - 3, i)
    return ceil(s)

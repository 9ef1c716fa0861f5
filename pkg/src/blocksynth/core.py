"""Permutations, gates, and the column-exchange semantics of gate application.

A width-n permutation is stored in one-line notation: ``entries[c]`` is the
row number sitting in column ``c``.  Lines are numbered 1..n with line 1 the
*most significant* bit of a column number (so an X on line 1 swaps the two
halves of the entry array).  Most circuit formats index the other way round;
everything in this package sticks to the MSB-first convention.

A gate acts on a permutation by exchanging columns: for every column ``c``
whose bits satisfy all controls, the entries at ``c`` and at ``c`` with the
target bit flipped are swapped.  Because a control may never sit on the
target line, the set of satisfying columns is closed under the target flip.

The same ``GateSequence`` that maps a permutation P to the identity, executed
left-to-right as a circuit on an input register x, computes P(x).  That dual
reading is the contract for every emitted circuit.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Literal, Sequence

MAX_WIDTH = 24


class WidthMismatch(ValueError):
    """Objects of different widths were combined."""


class NotABijection(ValueError):
    """Entry list is not a permutation of 0..2^n-1."""


class NotReducible(ValueError):
    """Permutation is not of the form Q (x) I_2."""


class PreconditionViolated(ValueError):
    """An operation was invoked on a state outside its contract."""


@dataclass(frozen=True)
class Gate:
    """A multiple-controlled NOT.

    ``controls`` holds (line, polarity) pairs; polarity True fires on bit 1.
    ``target`` is the line whose bit gets flipped.  Lines are 1-based,
    MSB-first.  Negative controls are first-class here and only materialized
    as X-conjugations when exporting to formats that lack them.
    """

    width: int
    target: int
    controls: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self) -> None:
        if not 1 <= self.target <= self.width:
            raise ValueError(f"target {self.target} outside lines 1..{self.width}")
        seen = set()
        for line, _ in self.controls:
            if not 1 <= line <= self.width:
                raise ValueError(f"control line {line} outside 1..{self.width}")
            if line == self.target or line in seen:
                raise ValueError(f"control line {line} repeated or equal to target")
            seen.add(line)

    @property
    def control_count(self) -> int:
        return len(self.controls)

    def masks(self) -> tuple[int, int, int]:
        """(must-be-1 mask, must-be-0 mask, target mask) over column bits."""
        n = self.width
        ones = zeros = 0
        for line, positive in self.controls:
            bit = 1 << (n - line)
            if positive:
                ones |= bit
            else:
                zeros |= bit
        return ones, zeros, 1 << (n - self.target)

    def widen(self, width: int) -> "Gate":
        """Embed into a wider circuit keeping the same 1-based lines."""
        if width < self.width:
            raise WidthMismatch(f"cannot narrow gate from {self.width} to {width}")
        if width == self.width:
            return self
        return Gate(width, self.target, self.controls)

    def map_column(self, column: int) -> int:
        """Where this gate sends the contents of ``column``.

        Controls never sit on the target line, so satisfaction is invariant
        under the target flip and a single check covers both directions.
        """
        ones, zeros, tmask = self.masks()
        if (column & ones) == ones and (column & zeros) == 0:
            return column ^ tmask
        return column

    def __str__(self) -> str:  # compact diagnostic form, e.g. C(1,3̄)X@2
        if not self.controls:
            return f"X@{self.target}"
        ctl = ",".join(f"{l}" if p else f"!{l}" for l, p in self.controls)
        return f"C({ctl})X@{self.target}"


def x(width: int, target: int) -> Gate:
    return Gate(width, target)


def cx(width: int, control: int, target: int, *, positive: bool = True) -> Gate:
    return Gate(width, target, ((control, positive),))


def toffoli(width: int, c1: int, c2: int, target: int) -> Gate:
    return Gate(width, target, ((c1, True), (c2, True)))


def mct(width: int, controls: Iterable[int | tuple[int, bool]], target: int) -> Gate:
    """Multiple-controlled NOT; bare ints mean positive controls."""
    normalized = tuple(
        (c, True) if isinstance(c, int) else (c[0], bool(c[1])) for c in controls
    )
    return Gate(width, target, normalized)


@dataclass(frozen=True)
class Permutation:
    """Bijection on {0..2^n-1} in one-line notation."""

    width: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if not 1 <= self.width <= MAX_WIDTH:
            raise ValueError(f"width must be in 1..{MAX_WIDTH}, got {self.width}")
        size = 1 << self.width
        if len(self.entries) != size:
            raise NotABijection(
                f"width {self.width} needs {size} entries, got {len(self.entries)}"
            )
        if sorted(self.entries) != list(range(size)):
            raise NotABijection("entries are not a permutation of 0..2^n-1")

    @classmethod
    def identity(cls, width: int) -> "Permutation":
        return cls(width, tuple(range(1 << width)))

    @classmethod
    def from_entries(cls, entries: Sequence[int]) -> "Permutation":
        size = len(entries)
        width = size.bit_length() - 1
        if size != 1 << width or size < 2:
            raise NotABijection(f"entry count {size} is not a power of two >= 2")
        return cls(width, tuple(entries))

    @property
    def size(self) -> int:
        return 1 << self.width

    def __call__(self, column: int) -> int:
        return self.entries[column]

    def position_of(self, row: int) -> int:
        """Column currently holding ``row`` (O(1) after first use)."""
        return self.positions[row]

    @property
    def positions(self) -> tuple[int, ...]:
        cached = self.__dict__.get("_positions")
        if cached is None:
            pos = [0] * self.size
            for col, row in enumerate(self.entries):
                pos[row] = col
            cached = tuple(pos)
            self.__dict__["_positions"] = cached
        return cached

    def is_identity(self) -> bool:
        return all(r == c for c, r in enumerate(self.entries))


@dataclass(frozen=True)
class GateSequence:
    """Ordered list of same-width gates; executed left-to-right."""

    width: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self) -> None:
        for g in self.gates:
            if g.width != self.width:
                raise WidthMismatch(
                    f"gate width {g.width} in sequence of width {self.width}"
                )

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def __add__(self, other: "GateSequence") -> "GateSequence":
        if other.width != self.width:
            raise WidthMismatch(f"{self.width} vs {other.width}")
        return GateSequence(self.width, self.gates + other.gates)

    def widen(self, width: int) -> "GateSequence":
        return GateSequence(width, tuple(g.widen(width) for g in self.gates))

    @classmethod
    def of(cls, *gates: Gate) -> "GateSequence":
        if not gates:
            raise ValueError("use GateSequence(width) for an empty sequence")
        return cls(gates[0].width, tuple(gates))


def _apply_gate_inplace(entries: list[int], gate: Gate) -> None:
    ones, zeros, tmask = gate.masks()
    for c in range(len(entries)):
        if c & tmask:
            continue  # visit each column pair once, from its target-bit-0 side
        if (c & ones) == ones and (c & zeros) == 0:
            d = c | tmask
            entries[c], entries[d] = entries[d], entries[c]


def apply_gate(perm: Permutation, gate: Gate) -> Permutation:
    """Exchange the column pairs selected by ``gate``'s controls."""
    if perm.width != gate.width:
        raise WidthMismatch(f"permutation width {perm.width}, gate width {gate.width}")
    entries = list(perm.entries)
    _apply_gate_inplace(entries, gate)
    return Permutation(perm.width, tuple(entries))


def apply_sequence(
    perm: Permutation, acc: GateSequence, seq: GateSequence
) -> tuple[Permutation, GateSequence]:
    """Apply ``seq`` to ``perm`` and append it to the accumulator ``acc``."""
    if perm.width != seq.width or acc.width != seq.width:
        raise WidthMismatch(
            f"widths differ: perm {perm.width}, acc {acc.width}, seq {seq.width}"
        )
    entries = list(perm.entries)
    for g in seq.gates:
        _apply_gate_inplace(entries, g)
    return Permutation(perm.width, tuple(entries)), acc + seq


def run_circuit(seq: GateSequence, x: int) -> int:
    """Execute the sequence left-to-right on the input bit string ``x``."""
    if not 0 <= x < (1 << seq.width):
        raise ValueError(f"input {x} outside 0..2^{seq.width}-1")
    for g in seq.gates:
        ones, zeros, tmask = g.masks()
        if (x & ones) == ones and (x & zeros) == 0:
            x ^= tmask
    return x


def verify_identity(perm: Permutation, seq: GateSequence) -> bool:
    """True iff applying ``seq`` to ``perm`` yields the identity.

    Equivalently (the emitted-circuit contract): running ``seq`` as a circuit
    on every input x returns perm(x).
    """
    if perm.width != seq.width:
        raise WidthMismatch(f"permutation width {perm.width}, seq width {seq.width}")
    entries = list(perm.entries)
    for g in seq.gates:
        _apply_gate_inplace(entries, g)
    return all(r == c for c, r in enumerate(entries))


def parity(perm: Permutation) -> Literal["even", "odd"]:
    """Sign of the permutation via cycle decomposition."""
    seen = [False] * perm.size
    transpositions = 0
    for start in range(perm.size):
        if seen[start]:
            continue
        length = 0
        c = start
        while not seen[c]:
            seen[c] = True
            c = perm.entries[c]
            length += 1
        transpositions += length - 1
    return "even" if transpositions % 2 == 0 else "odd"


def reduce_width(perm: Permutation) -> Permutation:
    """Strip the identity last line from a permutation of the form Q (x) I_2.

    Requires every column pair (2i, 2i+1) to hold rows (2k, 2k+1); the result
    maps block position i to k.
    """
    if perm.width < 2:
        raise NotReducible("width-1 permutations have no tensor factor to strip")
    entries = perm.entries
    out = []
    for i in range(perm.size // 2):
        lo, hi = entries[2 * i], entries[2 * i + 1]
        if lo % 2 != 0 or hi != lo + 1:
            raise NotReducible(
                f"columns {2*i},{2*i+1} hold rows {lo},{hi}; need an even block"
            )
        out.append(lo // 2)
    return Permutation(perm.width - 1, tuple(out))


def is_reducible(perm: Permutation) -> bool:
    """True iff the last line is already an identity wire (Q (x) I_2 form)."""
    entries = perm.entries
    return all(
        entries[c] % 2 == 0 and entries[c + 1] == entries[c] + 1
        for c in range(0, perm.size, 2)
    )


def sample(
    width: int, seed: int, kind: Literal["uniform", "parity_aligned"] = "uniform"
) -> Permutation:
    """Seeded pseudorandom permutation.

    ``parity_aligned`` keeps every row at a column of its own parity
    (r_i ≡ i mod 2), i.e. all relevant pairs sit at normal positions.
    """
    rng = random.Random(f"{seed}:{kind}:{width}")
    size = 1 << width
    if kind == "uniform":
        entries = list(range(size))
        rng.shuffle(entries)
    elif kind == "parity_aligned":
        evens = list(range(0, size, 2))
        odds = list(range(1, size, 2))
        rng.shuffle(evens)
        rng.shuffle(odds)
        entries = [0] * size
        entries[0::2] = evens
        entries[1::2] = odds
    else:
        raise ValueError(f"unknown sample kind {kind!r}")
    return Permutation(width, tuple(entries))

"""End-to-end circuit synthesis for arbitrary permutations.

``synthesize`` walks the width down one line at a time.  At each stage the
current permutation is inspected: already-reducible states cost nothing;
all-normal states go straight to reduction; an exact half count of
interrupting rows goes to preprocessing then reduction; a balanced
normal/inverted split goes to the general reduction; anything else is first
mixed.  Stage gates are widened back to the original width (lines keep
their numbers; the stripped lines are the trailing ones) and concatenated;
widths 1 and 2 are finished from a precomputed optimal table instead.

Pair selection inside the reductions optionally looks ahead: candidate
pairs are scored by the exact Toffoli-equivalents of their construction
and slide gates (computed analytically from the two columns, no state
copy), plus the best reachable score over the next depth-1 positions.
Near the end of a stage the remaining positions are solved exactly by
branch and bound (``exhaustive_tail``).

The emitted sequence is always verified against the input before being
returned; a failure is an internal error, not a user error.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Literal, Mapping, Optional

from .blocks import classify_positions
from .conditioning import MixConfig, _mix_engine, _run_preprocess
from .core import (
    Gate,
    GateSequence,
    Permutation,
    WidthMismatch,
    apply_gate,
    cx,
    is_reducible,
    reduce_width,
    verify_identity,
    x,
)
from .cost import DEFAULT_TABLE, quantum_cost, toffoli_count
from .reduction import (
    PairNotFound,
    RelevantPair,
    _alloc_gates,
    _cons_gates,
    _Engine,
    _n_pick_rows,
    _region_mask,
    _run_general,
    _run_normal,
    bounds,
)


@dataclass(frozen=True)
class SynthesisConfig:
    """Tuning knobs for ``synthesize``.

    ``depths`` maps j to the lookahead depth used while the remaining row
    count r of the current phase satisfies 2^(j-1) < r <= 2^j (that is,
    j = (r-1).bit_length()); missing entries default to depth 1, and depth 0
    reproduces the plain scan-order selection.  ``exhaustive_tail`` switches
    the last positions of a stage to exact branch-and-bound (0 disables).
    ``seed`` is recorded in reports; the pipeline itself is deterministic.
    """

    depths: Optional[Mapping[int, int]] = None
    exhaustive_tail: int = 9
    mix: MixConfig = field(default_factory=MixConfig)
    seed: int = 0
    post_peephole: bool = True

    def depth_for(self, remaining_rows: int) -> int:
        if remaining_rows <= 0:
            return 0
        j = (remaining_rows - 1).bit_length()
        if self.depths is None:
            return 1
        return self.depths.get(j, 1)


@dataclass(frozen=True)
class StageStats:
    """Per-width accounting of one stage of the pipeline."""

    width: int
    mix_gates: int
    pre_gates: int
    red_gates: int
    toffoli: int
    bound: int  # analytic per-reduction Toffoli budget at this width
    region_lifts: int
    mix_depth: int  # composite length the mixing search applied
    mix_fixups: int  # fully controlled repair gates after the composite
    lift_toffoli: int = 0  # Toffoli-equivalents spent lifting pairs in-region


@dataclass(frozen=True)
class SynthesisReport:
    width: int
    stages: tuple[StageStats, ...]
    gate_count: int
    toffoli_total: int
    quantum_cost_total: int
    bound_total: int
    assumption1_deviations: int
    region_lifts: int
    wall_time_s: float
    cost_table: str
    config: SynthesisConfig
    lift_toffoli: int = 0  # Toffoli-equivalents spent on region lifts


# ---------------------------------------------------------------------------
# Lookahead pair selection.


def _track(column: int, gates: list[Gate]) -> int:
    for g in gates:
        column = g.map_column(column)
    return column


def _pair_gates(n: int, i: int, ca: int, cb: int) -> tuple[list[Gate], int]:
    """Construction+slide gates for a pair at columns (ca, cb), analytically."""
    gates = _cons_gates(n, i, ca, cb)
    a = _track(ca, gates)
    gates = gates + _alloc_gates(n, i, a)
    cost = sum(2 * g.control_count - 3 for g in gates if g.control_count >= 2)
    return gates, cost


def _admissible_from(
    n: int, cols: dict[int, int], i: int, kind: str
) -> list[tuple[int, int]]:
    """In-region pairs of the phase kind, as (smaller-column row, partner)."""
    mask = _region_mask(n, i)
    out = []
    for r, ca in cols.items():
        if r & 1:
            continue
        cb = cols[r + 1]
        if (ca & mask) != mask or (cb & mask) != mask:
            continue
        match_a = (r ^ ca) & 1 == 0
        match_b = ((r + 1) ^ cb) & 1 == 0
        if kind == "normal":
            if not (match_a and match_b):
                continue
        else:
            if match_a or match_b:
                continue
        out.append((r, r + 1) if ca < cb else (r + 1, r))
    out.sort()
    return out


def _count_free(cols: dict[int, int], kind: str) -> int:
    cnt = 0
    for r, c in cols.items():
        if r & 1:
            continue
        if c ^ cols[r + 1] != 1:
            continue
        if (c & 1) == (0 if kind == "normal" else 1):
            cnt += 1
    return cnt


def _suffix(
    n: int,
    cols: dict[int, int],
    i: int,
    depth_left: int,
    phase_end: int,
    kind: str,
    budget: float,
) -> Optional[int]:
    """Cheapest total over the next ``depth_left`` positions, or None if the
    incoming budget cannot be beaten.  Runs dry (cost 0) where no admissible
    pair exists — the plain fallback path is not modelled."""
    if depth_left == 0 or i >= phase_end:
        return 0
    cands = _admissible_from(n, cols, i, kind)
    if not cands:
        return 0
    scored = []
    for a, b in cands:
        gates, c0 = _pair_gates(n, i, cols[a], cols[b])
        scored.append((c0, a, b, gates))
    scored.sort(key=lambda t: t[0])
    best: Optional[int] = None
    for c0, a, b, gates in scored:
        if c0 >= budget:
            break
        if depth_left == 1 or i + 1 >= phase_end:
            sub = 0
        else:
            nxt = {r: _track(c, gates) for r, c in cols.items() if r != a and r != b}
            sub = _suffix(n, nxt, i + 1, depth_left - 1, phase_end, kind, budget - c0)
            if sub is None:
                continue
        total = c0 + sub
        if best is None or total < best:
            best = total
            budget = total
        if best == 0:
            break
    return best


def _lookahead_choose(
    n: int,
    cols: dict[int, int],
    i: int,
    kind: str,
    phase_end: int,
    d: int,
) -> Optional[tuple[int, int]]:
    cands = _admissible_from(n, cols, i, kind)
    if not cands or d <= 0:
        return None
    best_total: Optional[int] = None
    tied: list[tuple[int, int, list[Gate]]] = []
    for a, b in cands:
        gates, c0 = _pair_gates(n, i, cols[a], cols[b])
        if d == 1 or i + 1 >= phase_end:
            total = c0
        else:
            if best_total is not None and c0 > best_total:
                continue
            budget = math.inf if best_total is None else best_total - c0 + 1
            nxt = {r: _track(c, gates) for r, c in cols.items() if r != a and r != b}
            sub = _suffix(n, nxt, i + 1, d - 1, phase_end, kind, budget)
            if sub is None:
                continue
            total = c0 + sub
        if best_total is None or total < best_total:
            best_total = total
            tied = [(a, b, gates)]
        elif total == best_total:
            tied.append((a, b, gates))
    if len(tied) == 1:
        return tied[0][0], tied[0][1]
    best_key = None
    best_pair = None
    for a, b, gates in tied:
        after = {r: _track(c, gates) for r, c in cols.items() if r != a and r != b}
        key = (-_count_free(after, kind), a, b)
        if best_key is None or key < best_key:
            best_key = key
            best_pair = (a, b)
    return best_pair


def select_with_lookahead(
    perm: Permutation,
    i: int,
    cfg: Optional[SynthesisConfig] = None,
    phase: Literal["normal_part", "inverted_part"] = "normal_part",
) -> RelevantPair:
    """Pick the pair for position i by cost lookahead.

    ``normal_part`` selects among in-region normal pairs for the left-half
    positions (phase ends at a quarter of the columns), ``inverted_part``
    among inverted pairs for the right half.  With depth 0, or when the
    region holds no admissible pair, this degrades to the plain scan-order
    selection (including its out-of-region fallback).
    """
    cfg = cfg or SynthesisConfig()
    n = perm.width
    kind = "normal" if phase == "normal_part" else "inverted"
    phase_end = perm.size // 4 if phase == "normal_part" else perm.size // 2
    if i >= (1 << (n - 1)) - cfg.exhaustive_tail:
        d = phase_end - i
    else:
        d = cfg.depth_for(2 * (phase_end - i))
    cols = {perm.entries[c]: c for c in range(2 * i, perm.size)}
    chosen = _lookahead_choose(n, cols, i, kind, phase_end, d)
    if chosen is None:
        engine = _Engine(perm)
        if kind == "normal":
            chosen = _n_pick_rows(engine, i)
        else:
            found = engine.scan_region_pair(i)
            if found is None:
                found = engine.best_out_of_region(i, "inverted")
            if found is None:
                raise PairNotFound(f"no pair available for position {i}")
            chosen = found
    return RelevantPair(*chosen)


def _make_selector(engine: _Engine, kind: str, phase_end: int, cfg: SynthesisConfig):
    n = engine.n
    tail_at = (1 << (n - 1)) - cfg.exhaustive_tail
    def select(i: int) -> Optional[tuple[int, int]]:
        if i >= tail_at:
            d = phase_end - i
        else:
            d = cfg.depth_for(2 * (phase_end - i))
        if d <= 0:
            return None
        cols = {engine.entries[c]: c for c in range(2 * i, engine.size)}
        return _lookahead_choose(n, cols, i, kind, phase_end, d)
    return select


# ---------------------------------------------------------------------------
# Small-width endgame.

_TWO_BIT_TABLE: dict[tuple[int, ...], tuple[Gate, ...]] = {}


def _two_bit_table() -> dict[tuple[int, ...], tuple[Gate, ...]]:
    if not _TWO_BIT_TABLE:
        gens = [x(2, 1), x(2, 2), cx(2, 1, 2), cx(2, 2, 1)]
        start = (0, 1, 2, 3)
        _TWO_BIT_TABLE[start] = ()
        frontier = [start]
        while frontier:
            nxt = []
            for state in frontier:
                for g in gens:
                    reached = apply_gate(Permutation(2, state), g).entries
                    if reached not in _TWO_BIT_TABLE:
                        _TWO_BIT_TABLE[reached] = (g,) + _TWO_BIT_TABLE[state]
                        nxt.append(reached)
            frontier = nxt
    return _TWO_BIT_TABLE


def search_two_bit(perm: Permutation) -> GateSequence:
    """Minimum-length sequence mapping a width-2 permutation to the identity.

    Breadth-first over the 24 width-2 permutations with generator order
    X line 1, X line 2, CX 1->2, CX 2->1; ties resolve to the generator
    discovered first.
    """
    if perm.width != 2:
        raise WidthMismatch(f"two-bit search needs width 2, got {perm.width}")
    return GateSequence(2, _two_bit_table()[perm.entries])


def peephole(seq: GateSequence) -> GateSequence:
    """Cancel adjacent identical gates (every gate is an involution)."""
    stack: list[Gate] = []
    for g in seq:
        if stack and stack[-1] == g:
            stack.pop()
        else:
            stack.append(g)
    return GateSequence(seq.width, tuple(stack))


# ---------------------------------------------------------------------------
# The pipeline.


def synthesize(
    perm: Permutation, cfg: Optional[SynthesisConfig] = None
) -> tuple[GateSequence, SynthesisReport]:
    """Produce a circuit computing ``perm`` (no garbage lines) plus a report.

    The returned sequence maps ``perm`` to the identity when applied to it,
    which by the dual reading means the circuit run on input x outputs
    perm(x).  Verification happens internally before returning.
    """
    cfg = cfg or SynthesisConfig()
    t0 = time.perf_counter()
    n0 = perm.width
    out: list[Gate] = []
    stages: list[StageStats] = []
    current = perm

    for w in range(n0, 2, -1):
        mix_gates = pre_gates = red_gates = 0
        mix_depth = mix_fix = lifts = lift_tof = 0
        stage_seq = GateSequence(w)
        if not is_reducible(current):
            engine = _Engine(current)
            counts = classify_positions(current)
            size, half, quarter = engine.size, engine.size // 2, engine.size // 4
            if counts.normal == size:
                _run_normal(engine, _make_selector(engine, "normal", half, cfg))
                red_gates = len(engine.gates)
            else:
                balanced = counts.interrupting == 0 and counts.normal == half
                if not balanced:
                    if counts.interrupting != half:
                        mstats = _mix_engine(engine, cfg.mix)
                        mix_depth, mix_fix = mstats.depth, mstats.fixup_gates
                        mix_gates = len(engine.gates)
                    mark = len(engine.gates)
                    _run_preprocess(engine)
                    pre_gates = len(engine.gates) - mark
                mark = len(engine.gates)
                _run_general(
                    engine,
                    _make_selector(engine, "normal", quarter, cfg),
                    _make_selector(engine, "inverted", half, cfg),
                )
                red_gates = len(engine.gates) - mark
            lifts = engine.stats.region_lifts
            lift_tof = engine.stats.lift_toffoli
            stage_seq = engine.sequence()
            current = engine.snapshot()
        stages.append(
            StageStats(
                width=w,
                mix_gates=mix_gates,
                pre_gates=pre_gates,
                red_gates=red_gates,
                toffoli=toffoli_count(stage_seq),
                bound=bounds(w).per_reduction_total,
                region_lifts=lifts,
                mix_depth=mix_depth,
                mix_fixups=mix_fix,
                lift_toffoli=lift_tof,
            )
        )
        out.extend(g.widen(n0) for g in stage_seq)
        current = reduce_width(current)

    if n0 >= 2:
        out.extend(g.widen(n0) for g in search_two_bit(current))
    elif not current.is_identity():
        out.append(x(1, 1))

    seq = GateSequence(n0, tuple(out))
    if cfg.post_peephole:
        seq = peephole(seq)
    if not verify_identity(perm, seq):
        raise RuntimeError(
            "internal error: synthesized circuit does not realize the input"
        )
    report = SynthesisReport(
        width=n0,
        stages=tuple(stages),
        gate_count=len(seq),
        toffoli_total=toffoli_count(seq),
        quantum_cost_total=quantum_cost(seq, DEFAULT_TABLE),
        bound_total=sum(s.bound for s in stages),
        assumption1_deviations=sum(s.mix_fixups for s in stages),
        region_lifts=sum(s.region_lifts for s in stages),
        wall_time_s=time.perf_counter() - t0,
        cost_table=DEFAULT_TABLE.name,
        config=cfg,
        lift_toffoli=sum(s.lift_toffoli for s in stages),
    )
    return seq, report


# ---------------------------------------------------------------------------
# Runtime estimation.


@dataclass(frozen=True)
class RuntimeEstimate:
    complexity: str
    seconds: float
    bucket: str
    warning: bool


# Seconds per n * 2^((2+d)n) work unit, fitted to depth-0 runs of
# ``synthesize`` at widths 8-10 (scripts/calibrate_runtime.py; the observed
# seconds-per-unit was stable at ~1.1e-7 across those widths).
_SECONDS_PER_UNIT = 1.1e-07


def estimate_runtime_class(n: int, depth: int) -> RuntimeEstimate:
    """Coarse worst-case wall-time forecast for ``synthesize``.

    The unit count follows the worst-case class (each lookahead level can
    multiply the scan work by the candidate-set size); sparse candidate
    sets and branch-and-bound pruning usually come in far below it.
    """
    if n < 1 or depth < 0:
        raise ValueError("need n >= 1 and depth >= 0")
    units = n * 2 ** ((2 + depth) * n)
    seconds = _SECONDS_PER_UNIT * units
    if seconds < 1.0:
        bucket = "sub-second"
    elif seconds < 60.0:
        bucket = "sub-minute"
    elif seconds < 3600.0:
        bucket = "minutes"
    elif seconds < 86400.0:
        bucket = "hours"
    else:
        bucket = "impractical"
    return RuntimeEstimate(
        complexity=f"O(n*2^({2 + depth}n))",
        seconds=seconds,
        bucket=bucket,
        warning=seconds >= 3600.0,
    )

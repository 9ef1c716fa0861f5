#!/usr/bin/env python3
"""Fit the seconds-per-unit constant behind estimate_runtime_class.

Runs depth-0 synthesis at a few widths, divides measured wall time by the
n * 2^(2n) unit count, and prints the per-width ratios plus their mean.
Paste the mean into _SECONDS_PER_UNIT in blocksynth/synthesis.py if the
hardware changed enough to matter.
"""

import argparse
import statistics
import time

from blocksynth import SynthesisConfig, sample, synthesize
from blocksynth.core import MAX_WIDTH


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--widths", default="8,9,10", help="comma list of widths")
    ap.add_argument("--repeats", type=int, default=3)
    args = ap.parse_args()

    cfg = SynthesisConfig(
        depths={j: 0 for j in range(1, MAX_WIDTH + 1)}, exhaustive_tail=0
    )
    ratios = []
    for n in (int(w) for w in args.widths.split(",")):
        times = []
        for seed in range(args.repeats):
            perm = sample(n, seed=seed)
            t0 = time.perf_counter()
            synthesize(perm, cfg)
            times.append(time.perf_counter() - t0)
        mean_t = statistics.mean(times)
        units = n * (1 << (2 * n))
        ratios.append(mean_t / units)
        print(f"n={n}: {mean_t:.3f}s over {units} units -> {mean_t / units:.3e} s/unit")
    print(f"mean seconds-per-unit: {statistics.mean(ratios):.3e}")


if __name__ == "__main__":
    main()

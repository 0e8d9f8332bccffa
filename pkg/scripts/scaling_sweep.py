#!/usr/bin/env python3
# Epoch-count scaling sweeps for every algorithm family, with a log-log
# exponent fit per family.  Writes one CSV per sweep into --out-dir and
# prints a summary table.  Typical use:
#
#   python3 scripts/scaling_sweep.py --seeds 10 --out-dir results/
#   python3 scripts/scaling_sweep.py --family lumi-fsync --values 4 8 16 32 64 128

import argparse
import os
import sys
import time

from swarmline.runner import sweep

# family -> (algorithm, scheduler, axis, default values, worst-case exponent).
# The last entry is the exponent of the proven upper bound; randomized ssync
# runs usually fit below it at these sizes.
FAMILIES = {
    "oblot": ("maxline-oblot", "ssync-random:0.5", "n",
              [4, 6, 8, 12, 16, 24], 2.0),
    "lumi-fsync": ("maxline-lumi-fsync", "fsync", "n",
                   [4, 8, 16, 32, 64], 1.0),
    "lumi-ssync": ("maxline-lumi-ssync", "ssync-random:0.5", "n",
                   [4, 6, 8, 12, 16], 2.0),
    "gathering": ("gathering", "fsync", "delta",
                  [4, 8, 16], 1.0),
    "chain": ("chain-gtm", "ssync-random:0.5", "n",
              [4, 6, 8, 12, 16], 2.0),
}


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=sorted(FAMILIES), action="append",
                    help="sweep only these families (default: all)")
    ap.add_argument("--values", type=float, nargs="+",
                    help="override the swept axis values")
    ap.add_argument("--seeds", type=int, default=10,
                    help="seeds 0..S-1 per value (default 10)")
    ap.add_argument("--gathering-n", type=int, default=40,
                    help="fixed robot count for the delta sweep (default 40; "
                         "keep the start dense or the contraction constant "
                         "drifts between spans)")
    ap.add_argument("--epsilon", type=float, default=0.01)
    ap.add_argument("--out-dir", default="results")
    args = ap.parse_args(argv)

    families = args.family or sorted(FAMILIES)
    os.makedirs(args.out_dir, exist_ok=True)
    seeds = list(range(args.seeds))
    bad = 0

    print(f"{'family':<12} {'axis':<6} {'runs':>5} {'secs':>6} "
          f"{'fit exp':>9} {'bound exp':>9}  medians")
    for fam in families:
        algorithm, scheduler, axis, values, bound_exp = FAMILIES[fam]
        if args.values:
            values = args.values
        t0 = time.perf_counter()
        res = sweep(algorithm, scheduler, values, seeds, axis=axis,
                    n=args.gathering_n if axis == "delta" else None,
                    epsilon=args.epsilon,
                    csv_path=os.path.join(args.out_dir, f"sweep_{fam}.csv"))
        dt = time.perf_counter() - t0
        unconverged = [r for r in res.rows if r.status != "converged"]
        bad += len(unconverged)
        meds = " ".join(f"{v:g}:{m:g}" for v, m in sorted(res.medians.items()))
        exp = "n/a" if res.exponent is None else f"{res.exponent:9.3f}"
        print(f"{fam:<12} {axis:<6} {len(res.rows):>5} {dt:>6.1f} "
              f"{exp:>9} {bound_exp:>9.1f}  {meds}")
        for row in unconverged:
            print(f"  !! {row.value:g} seed {row.seed}: {row.status}",
                  file=sys.stderr)

    print(f"\nCSV files in {args.out_dir}/")
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())

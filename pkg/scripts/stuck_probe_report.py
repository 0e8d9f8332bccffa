#!/usr/bin/env python3
# Escape-probe report for the pinned start configurations: for each fixture
# and range model, which robots can make any single-robot move that keeps the
# swarm connected along the whole motion?  Demonstrates the square/circular
# asymmetry (the circular range pins the C2 corners-and-bridge trio; the
# square range frees the corners sideways).
#
#   python3 scripts/stuck_probe_report.py
#   python3 scripts/stuck_probe_report.py --kind alpha --alpha 2.5 --grid 41

import argparse
import sys

from swarmline.fixtures import make_fixture, stuck_check
from swarmline.geometry import RangeModel


def describe(kind, c, alpha, model_kind, grid, samples):
    config = make_fixture(kind, c=c, alpha=alpha)
    model = RangeModel(kind=model_kind, radius=1.0)
    report = stuck_check(config, model, probe_grid=grid, path_samples=samples)
    print(f"--- {kind} (c={c:g}"
          + (f", alpha={alpha:g}" if kind == "alpha" else "")
          + f"), {model_kind} range, {grid}x{grid} grid, "
          f"{samples} path samples ---")
    for robot in config.robots:
        esc = report.escapes[robot.id]
        pos = f"({robot.pos.x:+.2f},{robot.pos.y:+.2f})"
        if not esc:
            print(f"  robot {robot.id:>2} {pos}  STUCK")
        else:
            sample = ", ".join(f"({d.x:+.1f},{d.y:+.1f})" for d in esc[:4])
            more = f" (+{len(esc) - 4} more)" if len(esc) > 4 else ""
            print(f"  robot {robot.id:>2} {pos}  {len(esc):>3} escapes: "
                  f"{sample}{more}")
    print(f"  stuck ids: {report.stuck_ids or 'none'}")
    return report


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--kind", choices=["C1", "C2", "alpha"], action="append",
                    help="fixtures to probe (default: all three)")
    ap.add_argument("--range", dest="ranges", choices=["square", "circular"],
                    action="append", help="range models (default: both)")
    ap.add_argument("--c", type=float, default=1.0,
                    help="fixture scale, must stay in (0, 1] (default 1)")
    ap.add_argument("--alpha", type=float, default=2.0,
                    help="column spread for the alpha fixture (default 2)")
    ap.add_argument("--grid", type=int, default=21,
                    help="probe grid points per axis (default 21)")
    ap.add_argument("--path-samples", type=int, default=16,
                    help="connectivity samples along each motion (default 16; "
                         "1 checks endpoints only and lets robots tunnel)")
    args = ap.parse_args(argv)

    kinds = args.kind or ["C1", "C2", "alpha"]
    ranges = args.ranges or ["square", "circular"]
    for kind in kinds:
        for model_kind in ranges:
            describe(kind, args.c, args.alpha, model_kind,
                     args.grid, args.path_samples)
            print()
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface.

Subcommands:
  simulate   run one algorithm instance, optionally writing a JSONL trace
  verify     replay a trace byte-for-byte and re-check its certificates
  sweep      run a grid of instances and fit a log-log scaling exponent
  fixture    emit a named example configuration, optionally probing which
             robots can move at all without breaking connectivity

Exit codes: 0 success (simulate: converged; verify: all checks pass),
3 budget exhausted, 4 invariant violation or failed verification,
2 argument errors (argparse default).
"""

from __future__ import annotations

import argparse
import json
import sys

from .fixtures import make_fixture, stuck_check
from .geometry import RangeModel
from .runner import (
    ALGORITHMS,
    STATUS_BUDGET,
    STATUS_CONVERGED,
    STATUS_VIOLATION,
    RunConfig,
    RunResult,
    SourceSpec,
    simulate,
    sweep,
    verify,
)
from .world import config_to_dict

EXIT_OK = 0
EXIT_BUDGET = 3
EXIT_VIOLATION = 4


def _values_list(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _int_list(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _add_simulate(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("simulate", help="run one algorithm instance")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--scheduler", default="fsync",
                   help="fsync | ssync-random:P | ssync-roundrobin:K | "
                        "ssync-adversary:FILE")
    p.add_argument("--n", type=int, default=None, help="robot count for "
                   "generated sources (chain: inner robots)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--max-epochs", type=int, default=None)
    p.add_argument("--max-rounds", type=int, default=None)
    p.add_argument("--range", dest="range_kind", default="square",
                   choices=("square", "circular"))
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--chirality", default="random",
                   choices=("random", "plus", "as-is"))
    p.add_argument("--source", default="random",
                   choices=("random", "diagonal", "line", "fixture", "file"))
    p.add_argument("--config", default=None,
                   help="JSON configuration file (implies --source file)")
    p.add_argument("--fixture", default="C1", help="fixture kind for "
                   "--source fixture")
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=8.0,
                   help="initial diameter for --source diagonal")
    p.add_argument("--trace", default=None, help="write a JSONL trace here")
    p.add_argument("--report", default=None, help="write a JSON summary here")
    p.set_defaults(func=_cmd_simulate)


def _result_report(res: RunResult) -> dict:
    report: dict = {
        "status": res.status,
        "reason": res.reason,
        "rounds": res.rounds,
        "epochs": res.epochs,
        "collision_rounds": len(res.collisions),
    }
    if res.line is not None:
        report["line"] = {"is_line": res.line.is_line,
                          "length": res.line.length, "n": res.line.n}
    if res.light_states is not None:
        report["light_states"] = res.light_states
    if res.round_drops is not None:
        report["round_drop_checks"] = res.round_drops.to_dict()
    if res.epoch_report is not None:
        ratios = [e.ratio for e in res.epoch_report.entries
                  if e.ratio is not None]
        report["epoch_drop_checks"] = {
            "pairs": len(res.epoch_report.entries),
            "violations": res.epoch_report.violations,
            "first_approx_epoch": res.epoch_report.first_approx_epoch,
            "min_ratio": min(ratios) if ratios else None,
        }
    if res.chain_report is not None:
        report["chain_drop_checks"] = res.chain_report
    return report


def _cmd_simulate(args: argparse.Namespace) -> int:
    source = SourceSpec(kind=args.source, fixture=args.fixture, c=args.c,
                        alpha=args.alpha, delta=args.delta, path=args.config)
    if args.config is not None:
        source.kind = "file"
    cfg = RunConfig(
        algorithm=args.algorithm, scheduler=args.scheduler, n=args.n,
        seed=args.seed, epsilon=args.epsilon, max_epochs=args.max_epochs,
        max_rounds=args.max_rounds, range_kind=args.range_kind,
        radius=args.radius, chirality=args.chirality, source=source,
        trace_path=args.trace,
    )
    res = simulate(cfg)
    report = _result_report(res)
    print(f"{args.algorithm} [{args.scheduler}] seed={args.seed}: "
          f"{res.status} after {res.rounds} rounds, {res.epochs} epochs"
          + (f" ({res.reason})" if res.reason else ""))
    if res.line is not None and res.line.is_line:
        print(f"  line length {res.line.length:.6f} over {res.line.n} robots")
    if args.report:
        with open(args.report, "w") as f:
            json.dump(report, f, indent=2, sort_keys=True)
            f.write("\n")
    if res.status == STATUS_CONVERGED:
        return EXIT_OK
    if res.status == STATUS_BUDGET:
        return EXIT_BUDGET
    return EXIT_VIOLATION


def _add_verify(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("verify", help="replay and re-check a trace")
    p.add_argument("trace", help="JSONL trace file")
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_verify)


def _cmd_verify(args: argparse.Namespace) -> int:
    rep = verify(args.trace)
    checks = [
        ("replay", rep.replay_ok),
        ("connectivity", rep.connectivity_ok),
        ("collisions", rep.collisions_ok),
        ("lights", rep.lights_ok),
        ("epoch-accounting", rep.epochs_ok),
        ("epoch-drop-bounds", rep.epoch_violations == 0),
    ]
    if rep.round_drops is not None:
        checks.append(("round-drop-bounds", rep.round_drops["violations"] == 0))
    for name, ok in checks:
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
    if rep.first_mismatch is not None:
        print(f"  first diverging line: {rep.first_mismatch}")
    for note in rep.notes[:10]:
        print(f"  {note}")
    print(f"verify: {'PASS' if rep.ok else 'FAIL'}")
    if args.report:
        payload = {
            "path": rep.path, "ok": rep.ok, "replay_ok": rep.replay_ok,
            "first_mismatch": rep.first_mismatch,
            "connectivity_ok": rep.connectivity_ok,
            "collisions_ok": rep.collisions_ok, "lights_ok": rep.lights_ok,
            "epochs_ok": rep.epochs_ok, "round_drops": rep.round_drops,
            "epoch_violations": rep.epoch_violations, "notes": rep.notes,
        }
        with open(args.report, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
    return EXIT_OK if rep.ok else EXIT_VIOLATION


def _add_sweep(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("sweep", help="grid runs plus scaling fit")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    p.add_argument("--scheduler", default="fsync")
    p.add_argument("--values", required=True, type=_values_list,
                   help="comma-separated axis values, e.g. 4,8,16")
    p.add_argument("--axis", default="n", choices=("n", "delta"))
    p.add_argument("--seeds", type=_int_list, default=[0, 1, 2])
    p.add_argument("--n", type=int, default=None,
                   help="fixed robot count for --axis delta")
    p.add_argument("--epsilon", type=float, default=0.01)
    p.add_argument("--max-epochs", type=int, default=None)
    p.add_argument("--range", dest="range_kind", default="square",
                   choices=("square", "circular"))
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--csv", default=None, help="write per-run rows here")
    p.add_argument("--report", default=None)
    p.set_defaults(func=_cmd_sweep)


def _cmd_sweep(args: argparse.Namespace) -> int:
    result = sweep(args.algorithm, args.scheduler, args.values, args.seeds,
                   axis=args.axis, n=args.n, epsilon=args.epsilon,
                   range_kind=args.range_kind, radius=args.radius,
                   max_epochs=args.max_epochs, csv_path=args.csv)
    converged = sum(1 for r in result.rows if r.status == STATUS_CONVERGED)
    print(f"{args.algorithm} [{args.scheduler}] axis={args.axis}: "
          f"{converged}/{len(result.rows)} runs converged")
    for v in sorted(result.medians):
        print(f"  {args.axis}={v:g}: median epochs {result.medians[v]:g}")
    if result.exponent is not None:
        print(f"  fitted exponent: {result.exponent:.3f}")
    if args.report:
        payload = {
            "algorithm": args.algorithm, "scheduler": args.scheduler,
            "axis": args.axis, "medians": {str(k): v for k, v
                                           in result.medians.items()},
            "exponent": result.exponent, "intercept": result.intercept,
            "converged": converged, "total": len(result.rows),
        }
        with open(args.report, "w") as f:
            json.dump(payload, f, indent=2, sort_keys=True)
            f.write("\n")
    return EXIT_OK


def _add_fixture(sub: argparse._SubParsersAction) -> None:
    p = sub.add_parser("fixture", help="emit a named example configuration")
    p.add_argument("--kind", required=True, choices=("C1", "C2", "alpha"))
    p.add_argument("--c", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--out", default=None, help="write the configuration "
                   "JSON here (default: stdout)")
    p.add_argument("--stuck", action="store_true",
                   help="probe single-robot moves for connectivity")
    p.add_argument("--probe-range", default=None,
                   choices=("square", "circular"),
                   help="override the range model used for stuck probing")
    p.set_defaults(func=_cmd_fixture)


def _cmd_fixture(args: argparse.Namespace) -> int:
    config = make_fixture(args.kind, c=args.c, alpha=args.alpha)
    text = json.dumps(config_to_dict(config), indent=2, sort_keys=True)
    if args.out:
        with open(args.out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)
    if args.stuck:
        model = config.range_model
        if args.probe_range:
            model = RangeModel(kind=args.probe_range, radius=model.radius)
        report = stuck_check(config, model)
        print(f"stuck probe ({model.kind}, radius {model.radius:g}):",
              file=sys.stderr)
        for rid in sorted(report.escapes):
            esc = report.escapes[rid]
            state = "stuck" if not esc else f"{len(esc)} escapes"
            print(f"  robot {rid}: {state}", file=sys.stderr)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="swarmline",
        description="simulate and certify limited-visibility swarm "
                    "formation algorithms")
    sub = parser.add_subparsers(dest="command", required=True)
    _add_simulate(sub)
    _add_verify(sub)
    _add_sweep(sub)
    _add_fixture(sub)
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

"""End-to-end acceptance battery.

One test per shipped guarantee. Every test prints a single
``criterion-NN <name>: PASS|FAIL`` line (run with ``pytest -s`` to see them
all) and then asserts, so the suite doubles as a checklist. The oblivious
line-former runs (criterion 02) are shared by the potential-certificate
criteria 03 and 04 through a module fixture.
"""

from __future__ import annotations

import itertools
import math
import statistics

import pytest

from swarmline.analysis import GapVector, gaps_from_config, ln_epoch_budget, w_update_oracle
from swarmline.fixtures import alpha_column_ends, make_fixture, stuck_check, vertical_line
from swarmline.gathering import gathered
from swarmline.geometry import TAU_GEO, Point2, RangeModel
from swarmline.runner import (
    RunConfig,
    SourceSpec,
    STATUS_VIOLATION,
    _general_actions,
    simulate,
)
from swarmline.schedulers import SchedulerSpec
from swarmline.world import GlobalConfiguration, RobotState, apply_moves, take_snapshot

SLACK = 1e-9
PHI_GUARD = 1e-12


def _report(num: int, name: str, ok: bool, detail: str = "") -> None:
    tail = f" ({detail})" if detail else ""
    print(f"criterion-{num:02d} {name}: {'PASS' if ok else 'FAIL'}{tail}")


def _sorted_gaps(config) -> list[float]:
    ys = sorted(r.pos.y for r in config.robots)
    return [b - a for a, b in zip(ys, ys[1:])]


def _median_rounds(algorithm: str, ns: list[int], seeds: range, **kw) -> dict[int, float]:
    out = {}
    for n in ns:
        rounds = []
        for seed in seeds:
            res = simulate(RunConfig(algorithm=algorithm, scheduler="fsync",
                                     n=n, seed=seed, **kw))
            assert res.converged, (algorithm, n, seed, res.reason)
            rounds.append(res.rounds)
        out[n] = statistics.median(rounds)
    return out


# ---------------------------------------------------------------------------
# criterion 02 fixture: the oblivious line-former battery, reused by 03/04
# ---------------------------------------------------------------------------

@pytest.fixture(scope="module")
def oblot_battery():
    runs = {}
    for n in range(3, 17):
        for seed in range(20):
            cfg = RunConfig(algorithm="maxline-oblot",
                            scheduler="ssync-random:0.5",
                            n=n, seed=seed, epsilon=0.01)
            runs[(n, seed)] = simulate(cfg)
    return runs


# ---------------------------------------------------------------------------
# 01 safety
# ---------------------------------------------------------------------------

def test_criterion_01_safety():
    ssync_pool = ["fsync", "ssync-random:0.5", "ssync-roundrobin:3",
                  SchedulerSpec(kind="ssync-adversary",
                                script=(frozenset({0}), frozenset({1}),
                                        frozenset({0, 1})))]
    fsync_only = {"maxline-lumi-fsync", "maxline-lumi-fsync-stationary",
                  "gathering"}
    algorithms = ["maxline-oblot", "maxline-lumi-fsync",
                  "maxline-lumi-fsync-stationary", "maxline-lumi-ssync",
                  "gathering", "chain-gtm"]
    violations = []
    for algorithm in algorithms:
        pool = ["fsync"] if algorithm in fsync_only else ssync_pool
        for k in range(50):
            n = 2 + (k % 15)
            cfg = RunConfig(algorithm=algorithm, scheduler=pool[k % len(pool)],
                            n=n, seed=k)
            res = simulate(cfg)
            if res.status == STATUS_VIOLATION:
                violations.append((algorithm, n, k, res.reason))
            elif algorithm.startswith("maxline") and res.collisions:
                violations.append((algorithm, n, k, "collision"))
    ok = not violations
    _report(1, "safety", ok, f"{6 * 50} runs, {len(violations)} violations")
    assert ok, violations[:5]


# ---------------------------------------------------------------------------
# 02 oblivious convergence within the epoch budget
# ---------------------------------------------------------------------------

def test_criterion_02_oblot_convergence(oblot_battery):
    failures = [(n, seed) for (n, seed), res in oblot_battery.items()
                if not res.converged]
    budgets_ok = all(res.epochs <= ln_epoch_budget(n, 0.01)
                     for (n, seed), res in oblot_battery.items())
    ok = not failures and budgets_ok
    worst = max(res.epochs / ln_epoch_budget(n, 0.01)
                for (n, _), res in oblot_battery.items())
    _report(2, "oblot-epoch-budget", ok,
            f"{len(oblot_battery)} runs, worst budget use {worst:.1%}")
    assert ok, failures[:5]


# ---------------------------------------------------------------------------
# 03 per-epoch drop bounds on those runs
# ---------------------------------------------------------------------------

def test_criterion_03_epoch_drop_bounds(oblot_battery):
    violations = 0
    pairs = 0
    min_margin = math.inf
    for (n, _), res in oblot_battery.items():
        rep = res.epoch_report
        assert rep is not None
        violations += rep.violations
        pairs += len(rep.entries)
        for e in rep.entries:
            if e.ratio is not None:
                min_margin = min(min_margin, e.ratio - e.ratio_bound)
            assert e.sorted_ok
    ok = violations == 0 and min_margin >= -SLACK
    _report(3, "epoch-drop-bounds", ok,
            f"{pairs} epoch pairs, min ratio margin {min_margin:+.2e}")
    assert ok


# ---------------------------------------------------------------------------
# 04 per-round drop decomposition + oracle equivalence
# ---------------------------------------------------------------------------

def _column(gaps, chirality):
    ys = [0.0]
    for g in gaps:
        ys.append(ys[-1] + g)
    return GlobalConfiguration(robots=tuple(
        RobotState(id=i, pos=Point2(0.0, y), chirality=c)
        for i, (y, c) in enumerate(zip(ys, chirality))))


def test_criterion_04_round_drop_decomposition(oblot_battery):
    min_residual = math.inf
    max_interior = 0.0
    rounds = 0
    for res in oblot_battery.values():
        lm = res.round_drops
        assert lm is not None and lm.violations == 0
        rounds += lm.rounds_checked
        if lm.rounds_checked:
            min_residual = min(min_residual, lm.min_residual)
        max_interior = max(max_interior, lm.max_interior_abs_residual)

    # simulator-versus-recurrence equivalence over *every* activation subset
    max_dev = 0.0
    for n in range(2, 7):
        gaps = [0.3 + 0.6 * ((i * 7) % 5) / 5 for i in range(n - 1)]
        chirality = [(-1) ** i for i in range(n)]
        start = _column(gaps, chirality)
        for subset in itertools.product([False, True], repeat=n):
            active = [i for i, a in enumerate(subset) if a]
            actions = _general_actions(start, active, "maxline-oblot")
            nxt = apply_moves(start, actions, active)
            _, got = gaps_from_config(nxt)
            want = w_update_oracle(GapVector(tuple(gaps)), list(subset))
            max_dev = max(max_dev, max(abs(a - b) for a, b
                                       in zip(got.gaps, want.gaps)))
    ok = (min_residual >= -SLACK and max_interior <= SLACK
          and max_dev <= 1e-12)
    _report(4, "round-drop-decomposition", ok,
            f"{rounds} rounds, min residual {min_residual:+.2e}, "
            f"interior |residual| <= {max_interior:.2e}, "
            f"oracle deviation {max_dev:.2e}")
    assert ok


# ---------------------------------------------------------------------------
# 05 luminous synchronous: exact line in linear time
# ---------------------------------------------------------------------------

def test_criterion_05_lumi_fsync_scaling():
    ns = [4, 8, 16, 32, 64]
    lights_ok = True
    gaps_ok = True
    rounds: dict[int, list[int]] = {n: [] for n in ns}
    for n in ns:
        for seed in range(10):
            res = simulate(RunConfig(algorithm="maxline-lumi-fsync",
                                     scheduler="fsync", n=n, seed=seed))
            assert res.converged, (n, seed, res.reason)
            rounds[n].append(res.rounds)
            lights_ok &= res.light_states <= 9
            gaps_ok &= all(abs(g - 1.0) <= SLACK for g in _sorted_gaps(res.final))
    medians = {n: statistics.median(r) for n, r in rounds.items()}
    ratios = [medians[b] / medians[a] for a, b in zip(ns, ns[1:])]
    ratios_ok = all(1.5 <= r <= 2.5 for r in ratios)
    ok = lights_ok and gaps_ok and ratios_ok
    _report(5, "lumi-fsync-linear", ok,
            "medians " + "/".join(f"{medians[n]:g}" for n in ns)
            + ", ratios " + "/".join(f"{r:.2f}" for r in ratios))
    assert ok, (medians, ratios, lights_ok, gaps_ok)


# ---------------------------------------------------------------------------
# 06 gathering scales linearly with the initial diameter
# ---------------------------------------------------------------------------

def test_criterion_06_gathering_scaling():
    deltas = [4.0, 8.0, 16.0]
    epochs: dict[float, list[int]] = {d: [] for d in deltas}
    coincide_ok = True
    for d in deltas:
        for seed in range(10):
            res = simulate(RunConfig(algorithm="gathering", scheduler="fsync",
                                     n=40, seed=seed,
                                     source=SourceSpec(kind="diagonal", delta=d)))
            assert res.converged, (d, seed, res.reason)
            epochs[d].append(res.epochs)
            coincide_ok &= gathered([r.pos for r in res.final.robots], TAU_GEO)
    medians = {d: statistics.median(e) for d, e in epochs.items()}
    ratios = [medians[b] / medians[a] for a, b in zip(deltas, deltas[1:])]
    ratios_ok = all(1.5 <= r <= 2.5 for r in ratios)
    ok = coincide_ok and ratios_ok
    _report(6, "gathering-linear", ok,
            "median epochs " + "/".join(f"{medians[d]:g}" for d in deltas)
            + ", ratios " + "/".join(f"{r:.2f}" for r in ratios))
    assert ok, (medians, ratios, coincide_ok)


# ---------------------------------------------------------------------------
# 07 chain straightening within the epoch budget, drop bound certified
# ---------------------------------------------------------------------------

def test_criterion_07_chain_convergence():
    failures = []
    violations = 0
    min_ratio_margin = math.inf
    for n in (4, 8, 16):
        budget = ln_epoch_budget(n + 1, 0.01)
        for seed in range(10):
            res = simulate(RunConfig(algorithm="chain-gtm",
                                     scheduler="ssync-random:0.5",
                                     n=n, seed=seed, epsilon=0.01,
                                     max_epochs=budget))
            if not res.converged:
                failures.append((n, seed, res.reason))
                continue
            rep = res.chain_report
            violations += rep["violations"]
            bound = 1.0 / (4.0 * (n + 1) ** 2)
            for axis in ("x", "y"):
                r = rep[f"min_ratio_{axis}"]
                if r is not None:
                    min_ratio_margin = min(min_ratio_margin, r - bound)
    ok = not failures and violations == 0 and min_ratio_margin >= -SLACK
    _report(7, "chain-epoch-budget", ok,
            f"30 runs, min axis-drop margin {min_ratio_margin:+.2e}")
    assert ok, (failures[:5], violations)


# ---------------------------------------------------------------------------
# 08 connectivity-pinned configurations
# ---------------------------------------------------------------------------

def test_criterion_08_pinned_fixtures():
    c2 = make_fixture("C2")
    circ = stuck_check(c2, c2.range_model)
    pinned_ok = circ.stuck_ids == [1, 3, 5]

    # the free corners are locally indistinguishable from a solved-line
    # endpoint: exactly one visible robot, straight above or below at
    # distance exactly the radius
    endpoint_view = take_snapshot(vertical_line(2), 0).entries[1].rel
    views_ok = True
    for rid in (0, 2, 4, 6):
        others = take_snapshot(c2, rid).entries[1:]
        views_ok &= (len(others) == 1
                     and abs(others[0].rel.x) <= TAU_GEO
                     and abs(abs(others[0].rel.y) - abs(endpoint_view.y))
                     <= TAU_GEO)

    # under a square range the same shape is not pinned: the column middles
    # may slide sideways the full unit
    sq = stuck_check(c2, RangeModel("square", 1.0))
    rightward = {round(p.x, 10) for p in sq.escapes[1]
                 if p.y == 0.0 and p.x > 0}
    square_ok = {round(0.1 * k, 10) for k in range(1, 11)} <= rightward

    alpha = make_fixture("alpha", alpha=2.0)
    ends = alpha_column_ends(2.0)
    rep = stuck_check(alpha, alpha.range_model)
    alpha_ok = (alpha.n == 12
                and rep.stuck_ids == sorted(set(range(12)) - set(ends)))

    ok = pinned_ok and views_ok and square_ok and alpha_ok
    _report(8, "pinned-fixtures", ok,
            f"C2 circular stuck {circ.stuck_ids}, "
            f"alpha stuck {len(rep.stuck_ids)}/12")
    assert ok, (circ.stuck_ids, views_ok, square_ok, rep.stuck_ids)


# ---------------------------------------------------------------------------
# 09 luminous semi-synchronous: exact line under fair activation
# ---------------------------------------------------------------------------

def test_criterion_09_lumi_ssync():
    failures = []
    worst = 0.0
    for n in range(3, 13):
        for seed in range(20):
            res = simulate(RunConfig(algorithm="maxline-lumi-ssync",
                                     scheduler="ssync-random:0.5",
                                     n=n, seed=seed))
            gaps = _sorted_gaps(res.final)
            exact = all(abs(g - 1.0) <= SLACK for g in gaps)
            if not (res.converged and exact) or res.collisions:
                failures.append((n, seed, res.status))
            worst = max(worst, res.epochs / (40 * n * n))
    ok = not failures
    _report(9, "lumi-ssync-exact", ok,
            f"200 runs, worst budget use {worst:.1%}")
    assert ok, failures[:5]


# ---------------------------------------------------------------------------
# 10 determinism
# ---------------------------------------------------------------------------

def test_criterion_10_determinism():
    cases = [
        RunConfig(algorithm="maxline-oblot", scheduler="ssync-random:0.5",
                  n=6, seed=11, collect_trace=True),
        RunConfig(algorithm="maxline-lumi-fsync", scheduler="fsync",
                  n=6, seed=11, collect_trace=True),
        RunConfig(algorithm="maxline-lumi-fsync-stationary", scheduler="fsync",
                  n=6, seed=11, collect_trace=True),
        RunConfig(algorithm="maxline-lumi-ssync", scheduler="ssync-roundrobin:2",
                  n=6, seed=11, collect_trace=True),
        RunConfig(algorithm="gathering", scheduler="fsync", n=6, seed=11,
                  range_kind="circular", collect_trace=True),
        RunConfig(algorithm="chain-gtm", scheduler="ssync-random:0.5",
                  n=6, seed=11, collect_trace=True),
    ]
    mismatches = []
    for cfg in cases:
        first = list(simulate(cfg).trace.lines())
        second = list(simulate(cfg).trace.lines())
        if first != second:
            mismatches.append(cfg.algorithm)
    ok = not mismatches
    _report(10, "determinism", ok, f"{len(cases)} algorithms byte-compared")
    assert ok, mismatches

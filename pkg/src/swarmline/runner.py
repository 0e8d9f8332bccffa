"""Run engine: deterministic simulation of every algorithm in the package.

One entry point, :func:`simulate`, drives any algorithm from a
:class:`RunConfig`: it resolves the start state, steps the scheduler, applies
moves, and keeps online monitors running (connectivity, collisions, the
per-round potential-drop certificate for the oblivious line former, per-epoch
potential records). Runs are bitwise deterministic for a given config; with
tracing enabled they emit a self-contained JSONL trace that :func:`verify`
replays and byte-compares. :func:`sweep` runs grids of instances and fits a
log-log scaling exponent.

Whenever all robots occupy one exact column, moves are computed through a
linear-time path that feeds each robot a minimal snapshot (its in-range
column neighbors) instead of the full quadratic view. The algorithms only
consult those neighbors once collinear, so both paths produce bitwise
identical moves; tests assert that equivalence.
"""

from __future__ import annotations

import json
import math
import random as _random
import statistics
from dataclasses import dataclass, field, replace as _dc_replace
from typing import Callable, Sequence

from .analysis import (
    PHI_GUARD,
    SLACK,
    EpochReport,
    GapVector,
    LineMetrics,
    epoch_bound_checks,
    epsilon_approx,
    exact_line_solved,
    gaps_from_config,
    line_metrics,
    ln_epoch_budget,
    phi,
    phi_drop_bound_check,
)
from .chain import (
    ChainConfiguration,
    chain_drop_bound,
    chain_from_dict,
    chain_to_dict,
    eps_reached,
    gtm_compute,
    phi2,
    random_chain,
)
from .fixtures import (
    diagonal_span_config,
    make_fixture,
    random_connected,
    vertical_line,
)
from .gathering import gathered, gathering_compute
from .geometry import TAU_GEO, Point2, RangeModel, diameter_stats, is_connected
from .maxline import (
    lumi_fsync_compute,
    lumi_fsync_stationary_compute,
    lumi_ssync_compute,
    oblot_compute,
)
from .schedulers import (
    FSYNC,
    ActivationRecord,
    EpochLedger,
    Scheduler,
    SchedulerSpec,
    parse_scheduler,
)
from .traces import TRACE_VERSION, Trace
from .world import (
    Action,
    GlobalConfiguration,
    Lights,
    LocalSnapshot,
    SnapshotEntry,
    apply_moves,
    config_from_dict,
    config_to_dict,
    detect_collisions,
    neighbor_lists,
    take_snapshot,
)

# ---------------------------------------------------------------------------
# algorithm registry
# ---------------------------------------------------------------------------

ALGO_MAX_OBLOT = "maxline-oblot"
ALGO_MAX_LUMI_FSYNC = "maxline-lumi-fsync"
ALGO_MAX_LUMI_STATIONARY = "maxline-lumi-fsync-stationary"
ALGO_MAX_LUMI_SSYNC = "maxline-lumi-ssync"
ALGO_GATHERING = "gathering"
ALGO_CHAIN = "chain-gtm"

ALGORITHMS = (
    ALGO_MAX_OBLOT,
    ALGO_MAX_LUMI_FSYNC,
    ALGO_MAX_LUMI_STATIONARY,
    ALGO_MAX_LUMI_SSYNC,
    ALGO_GATHERING,
    ALGO_CHAIN,
)

MAXLINE_ALGORITHMS = (
    ALGO_MAX_OBLOT,
    ALGO_MAX_LUMI_FSYNC,
    ALGO_MAX_LUMI_STATIONARY,
    ALGO_MAX_LUMI_SSYNC,
)

LUMI_ALGORITHMS = (
    ALGO_MAX_LUMI_FSYNC,
    ALGO_MAX_LUMI_STATIONARY,
    ALGO_MAX_LUMI_SSYNC,
)

# algorithms whose movement rule assumes every robot acts every round
FSYNC_ONLY = (ALGO_MAX_LUMI_FSYNC, ALGO_MAX_LUMI_STATIONARY, ALGO_GATHERING)

# algorithms with a column fast path (see module docstring)
_COLUMN_FAST = (ALGO_MAX_OBLOT, ALGO_MAX_LUMI_FSYNC, ALGO_MAX_LUMI_SSYNC,
                ALGO_GATHERING)

_COMPUTE: dict[str, Callable[[LocalSnapshot], "object"]] = {
    ALGO_MAX_OBLOT: oblot_compute,
    ALGO_MAX_LUMI_FSYNC: lambda s: lumi_fsync_compute(s, s.entries[0].lights),
    ALGO_MAX_LUMI_STATIONARY: lambda s: lumi_fsync_stationary_compute(
        s, s.entries[0].lights),
    ALGO_MAX_LUMI_SSYNC: lambda s: lumi_ssync_compute(s, s.entries[0].lights),
    ALGO_GATHERING: gathering_compute,
}

STATUS_CONVERGED = "converged"
STATUS_BUDGET = "budget-exhausted"
STATUS_VIOLATION = "invariant-violation"


# ---------------------------------------------------------------------------
# run configuration
# ---------------------------------------------------------------------------

@dataclass
class SourceSpec:
    """Where the start state comes from.

    kind:
      random    grown connected cluster (``n`` robots)
      diagonal  connected cluster whose diameter is exactly ``delta``
      line      already-solved vertical line of ``n`` robots
      fixture   one of the named example configurations (C1 / C2 / alpha)
      file      JSON file holding a robot or chain configuration
      inline    configuration dict passed directly
    """

    kind: str = "random"
    fixture: str = "C1"
    c: float = 1.0
    alpha: float = 2.0
    delta: float = 8.0
    path: str | None = None
    inline: dict | None = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "fixture": self.fixture, "c": self.c,
            "alpha": self.alpha, "delta": self.delta, "path": self.path,
        }


@dataclass
class RunConfig:
    algorithm: str
    scheduler: SchedulerSpec | str = "fsync"
    n: int | None = None
    seed: int = 0
    epsilon: float = 0.01
    max_epochs: int | None = None
    max_rounds: int | None = None
    range_kind: str = "square"
    radius: float = 1.0
    chirality: str = "random"       # random | plus | as-is
    source: SourceSpec = field(default_factory=SourceSpec)
    trace_path: str | None = None
    collect_trace: bool = False
    check_round_drops: bool = True

    def __post_init__(self) -> None:
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; "
                             f"choose from {ALGORITHMS}")
        if isinstance(self.scheduler, str):
            self.scheduler = parse_scheduler(self.scheduler, seed=self.seed)
        if self.algorithm in FSYNC_ONLY and self.scheduler.kind != FSYNC:
            raise ValueError(
                f"{self.algorithm} assumes a fully synchronous scheduler; "
                f"got {self.scheduler.kind!r}")
        if self.chirality not in ("random", "plus", "as-is"):
            raise ValueError(f"unknown chirality mode {self.chirality!r}")

    @property
    def wants_trace(self) -> bool:
        return self.collect_trace or self.trace_path is not None


def _apply_chirality(config: GlobalConfiguration, mode: str,
                     seed: int) -> GlobalConfiguration:
    if mode == "as-is":
        return config
    if mode == "plus":
        values = [1] * config.n
    else:
        rng = _random.Random(f"{seed}:chirality")
        values = [rng.choice((-1, 1)) for _ in range(config.n)]
    robots = tuple(_dc_replace(r, chirality=v)
                   for r, v in zip(config.robots, values))
    return _dc_replace(config, robots=robots)


def resolve_initial(cfg: RunConfig) -> GlobalConfiguration | ChainConfiguration:
    """Build the fully resolved start state for a run configuration."""
    src = cfg.source
    if cfg.algorithm == ALGO_CHAIN:
        if src.kind == "random":
            if cfg.n is None:
                raise ValueError("chain runs from a random source need n")
            return random_chain(cfg.n, cfg.seed, cfg.radius)
        if src.kind == "inline":
            return chain_from_dict(src.inline)
        if src.kind == "file":
            with open(src.path) as f:
                return chain_from_dict(json.load(f))
        raise ValueError(f"source kind {src.kind!r} not usable for chains")

    model = RangeModel(kind=cfg.range_kind, radius=cfg.radius)
    generated = True
    if src.kind == "random":
        if cfg.n is None:
            raise ValueError("random sources need n")
        config = random_connected(cfg.n, model, cfg.seed)
    elif src.kind == "diagonal":
        if cfg.n is None:
            raise ValueError("diagonal sources need n")
        config = diagonal_span_config(cfg.n, cfg.seed, src.delta, model)
    elif src.kind == "line":
        if cfg.n is None:
            raise ValueError("line sources need n")
        config = vertical_line(cfg.n, c=cfg.radius, kind=cfg.range_kind)
    elif src.kind == "fixture":
        config = make_fixture(src.fixture, c=src.c, alpha=src.alpha)
    elif src.kind == "file":
        generated = False
        with open(src.path) as f:
            data = json.load(f)
        if "robots" not in data:
            return chain_from_dict(data)
        config = config_from_dict(data)
    elif src.kind == "inline":
        generated = False
        config = config_from_dict(src.inline)
    else:
        raise ValueError(f"unknown source kind {src.kind!r}")
    # generated sources get chirality assigned here; files and inline configs
    # already carry their own
    if generated:
        config = _apply_chirality(config, cfg.chirality, cfg.seed)
    return config


def default_epoch_budget(algorithm: str, n: int, epsilon: float,
                         initial=None) -> int:
    """Epoch budget used when the run config does not set one."""
    if algorithm == ALGO_MAX_OBLOT:
        return ln_epoch_budget(n, epsilon)
    if algorithm in (ALGO_MAX_LUMI_FSYNC, ALGO_MAX_LUMI_STATIONARY):
        return 20 * n
    if algorithm == ALGO_MAX_LUMI_SSYNC:
        return 40 * n * n
    if algorithm == ALGO_GATHERING:
        _, dx, dy = diameter_stats(initial.positions())
        return math.ceil(20.0 * (dx + dy + n))
    if algorithm == ALGO_CHAIN:
        return ln_epoch_budget(n, epsilon)
    raise ValueError(f"unknown algorithm {algorithm!r}")


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass
class RoundDropSummary:
    rounds_checked: int = 0
    violations: int = 0
    min_residual: float = math.inf
    interior_rounds: int = 0
    max_interior_abs_residual: float = 0.0
    first_violation_round: int | None = None

    def update(self, check, t: int) -> None:
        self.rounds_checked += 1
        self.min_residual = min(self.min_residual, check.residual)
        if check.residual < -SLACK:
            self.violations += 1
            if self.first_violation_round is None:
                self.first_violation_round = t
        if not check.endpoint_active:
            self.interior_rounds += 1
            self.max_interior_abs_residual = max(
                self.max_interior_abs_residual, abs(check.residual))

    def to_dict(self) -> dict:
        return {
            "rounds_checked": self.rounds_checked,
            "violations": self.violations,
            "min_residual": (None if self.rounds_checked == 0
                             else self.min_residual),
            "interior_rounds": self.interior_rounds,
            "max_interior_abs_residual": self.max_interior_abs_residual,
            "first_violation_round": self.first_violation_round,
        }


@dataclass
class RunResult:
    status: str
    reason: str
    rounds: int
    epochs: int
    final: GlobalConfiguration | ChainConfiguration
    trace: Trace | None = None
    collisions: list = field(default_factory=list)
    light_states: int | None = None
    round_drops: RoundDropSummary | None = None
    epoch_gaps: list | None = None
    epoch_report: EpochReport | None = None
    line: LineMetrics | None = None
    chain_phi2: list | None = None
    chain_report: dict | None = None

    @property
    def converged(self) -> bool:
        return self.status == STATUS_CONVERGED


# ---------------------------------------------------------------------------
# fast column path
# ---------------------------------------------------------------------------

def _column_order(config: GlobalConfiguration, distinct: bool,
                  tol: float = 0.0) -> list[int] | None:
    """Robot indices sorted by (y, id) when every robot sits at one x
    coordinate (within ``tol``); None otherwise. With ``distinct`` the ys must
    additionally be pairwise farther than the coincidence tolerance (line
    formers abort on collisions, so their fast path may assume it)."""
    robots = config.robots
    x0 = robots[0].pos.x
    if any(abs(r.pos.x - x0) > tol for r in robots):
        return None
    order = sorted(range(len(robots)),
                   key=lambda i: (robots[i].pos.y, robots[i].id))
    if distinct:
        for a, b in zip(order, order[1:]):
            if robots[b].pos.y - robots[a].pos.y <= TAU_GEO:
                return None
    return order


def _column_orders(config: GlobalConfiguration, distinct: bool,
                   algo: str) -> tuple[list[int] | None, list[int] | None]:
    """(exact, tolerant) column orders. The exact one gates the fast action
    path, which needs bitwise-equal inputs; the tolerant one gates the safety
    monitors and potential certificates. A phase-1 hop can land a robot one
    ulp off the column's x coordinate (p.x + (q.x - p.x) need not equal q.x),
    and such dust must not silence the certificates."""
    if algo not in _COLUMN_FAST:
        return None, None
    exact = _column_order(config, distinct)
    if exact is not None:
        return exact, exact
    return None, _column_order(config, distinct, TAU_GEO)


def _fast_actions(config: GlobalConfiguration, order: Sequence[int],
                  active: Sequence[int], algorithm: str) -> dict[int, Action]:
    """Moves for one round on an exact column, via minimal snapshots. The
    entries handed to the algorithm are exactly those it would consult in the
    full snapshot, so the outputs are bitwise identical."""
    robots = config.robots
    model = config.range_model
    compute = _COMPUTE[algorithm]
    slot = {robots[i].id: k for k, i in enumerate(order)}
    actions: dict[int, Action] = {}
    for rid in active:
        k = slot[rid]
        me = robots[order[k]]
        neigh: list[int] = []
        if algorithm == ALGO_GATHERING:
            j = k - 1
            while j >= 0 and model.within(me.pos, robots[order[j]].pos):
                neigh.append(order[j])
                j -= 1
            j = k + 1
            while j < len(order) and model.within(me.pos, robots[order[j]].pos):
                neigh.append(order[j])
                j += 1
        else:
            if k > 0 and model.within(me.pos, robots[order[k - 1]].pos):
                neigh.append(order[k - 1])
            if k + 1 < len(order) and model.within(me.pos,
                                                   robots[order[k + 1]].pos):
                neigh.append(order[k + 1])
        entries = [SnapshotEntry(Point2(0.0, 0.0), me.lights)]
        entries.extend(SnapshotEntry(me.to_local(robots[i].pos),
                                     robots[i].lights)
                       for i in sorted(neigh))
        move = compute(LocalSnapshot(tuple(entries)))
        actions[rid] = Action(me.to_global(move.target), move.lights)
    return actions


def _general_actions(config: GlobalConfiguration, active: Sequence[int],
                     algorithm: str) -> dict[int, Action]:
    adj = neighbor_lists(config)
    index_of = {r.id: i for i, r in enumerate(config.robots)}
    compute = _COMPUTE[algorithm]
    actions: dict[int, Action] = {}
    for rid in active:
        i = index_of[rid]
        move = compute(take_snapshot(config, i, adj))
        actions[rid] = Action(config.robots[i].to_global(move.target),
                              move.lights)
    return actions


def _column_collisions(config: GlobalConfiguration,
                       order: Sequence[int]) -> list[tuple[int, int]]:
    robots = config.robots
    out = []
    for a, b in zip(order, order[1:]):
        if abs(robots[b].pos.y - robots[a].pos.y) <= TAU_GEO:
            out.append(tuple(sorted((robots[a].id, robots[b].id))))
    return out


def _column_connected(config: GlobalConfiguration,
                      order: Sequence[int]) -> bool:
    robots = config.robots
    reach = config.range_model.radius + TAU_GEO
    return all(robots[b].pos.y - robots[a].pos.y <= reach
               for a, b in zip(order, order[1:]))


def _full_collisions(config: GlobalConfiguration) -> list[tuple[int, int]]:
    return detect_collisions(config)


# ---------------------------------------------------------------------------
# simulation
# ---------------------------------------------------------------------------

def _terminal(cfg: RunConfig, state) -> bool:
    if cfg.algorithm == ALGO_MAX_OBLOT:
        return epsilon_approx(state, cfg.epsilon)
    if cfg.algorithm in (ALGO_MAX_LUMI_FSYNC, ALGO_MAX_LUMI_SSYNC):
        return exact_line_solved(state)
    if cfg.algorithm == ALGO_MAX_LUMI_STATIONARY:
        if state.n == 1:
            return True
        return (exact_line_solved(state)
                and all(r.lights.final for r in state.robots))
    if cfg.algorithm == ALGO_GATHERING:
        return gathered(state.positions(), TAU_GEO)
    return eps_reached(state, cfg.epsilon)


def _make_header(cfg: RunConfig, initial, ids: Sequence[int],
                 max_epochs: int, max_rounds: int) -> dict:
    if cfg.algorithm == ALGO_CHAIN:
        initial_dict = chain_to_dict(initial)
        kind = "chain"
    else:
        initial_dict = config_to_dict(initial)
        kind = "planar"
    return {
        "type": "header",
        "version": TRACE_VERSION,
        "kind": kind,
        "algorithm": cfg.algorithm,
        "epsilon": cfg.epsilon,
        "seed": cfg.seed,
        "max_epochs": max_epochs,
        "max_rounds": max_rounds,
        "scheduler": cfg.scheduler.to_dict(),
        "ids": list(ids),
        "tau": TAU_GEO,
        "check_round_drops": cfg.check_round_drops,
        "initial": initial_dict,
    }


def simulate(cfg: RunConfig) -> RunResult:
    """Run one configuration to termination, budget exhaustion, or an
    invariant violation."""
    initial = resolve_initial(cfg)
    if cfg.algorithm == ALGO_CHAIN:
        return _simulate_chain(cfg, initial)
    return _simulate_planar(cfg, initial)


def _simulate_planar(cfg: RunConfig, initial: GlobalConfiguration) -> RunResult:
    algo = cfg.algorithm
    is_maxline = algo in MAXLINE_ALGORITHMS
    is_lumi = algo in LUMI_ALGORITHMS
    n = initial.n
    if not initial.connected():
        raise ValueError("initial configuration is not connected")
    if is_maxline and _full_collisions(initial):
        raise ValueError("initial configuration has coincident robots")

    ids = sorted(r.id for r in initial.robots)
    spec = cfg.scheduler
    max_epochs = (cfg.max_epochs if cfg.max_epochs is not None
                  else default_epoch_budget(algo, n, cfg.epsilon, initial))
    max_rounds = (cfg.max_rounds if cfg.max_rounds is not None
                  else max_epochs * spec.bound_for(n) + spec.bound_for(n))
    scheduler = Scheduler(spec, ids)
    ledger = EpochLedger(frozenset(ids))

    header = _make_header(cfg, initial, ids, max_epochs, max_rounds)
    records: list[dict] | None = [] if cfg.wants_trace else None

    round_drops = (RoundDropSummary()
              if algo == ALGO_MAX_OBLOT and cfg.check_round_drops else None)
    epoch_gaps: list[tuple[int, GapVector]] = []
    light_states: set | None = set() if is_lumi else None
    collisions_log: list[tuple[int, tuple]] = []

    distinct = is_maxline
    cur = initial
    fast_order, order = _column_orders(cur, distinct, algo)
    if order is not None and algo == ALGO_MAX_OBLOT:
        _, g0 = gaps_from_config(cur)
        epoch_gaps.append((0, g0))
    if light_states is not None:
        light_states.update(
            (r.lights.c, r.lights.mov, r.lights.prev, r.lights.final)
            for r in cur.robots)

    status = STATUS_BUDGET
    reason = ""
    t = 0
    while True:
        if _terminal(cfg, cur):
            status = STATUS_CONVERGED
            reason = ""
            break
        if ledger.epoch_of(t) >= max_epochs:
            status, reason = STATUS_BUDGET, "epoch budget exhausted"
            break
        if t >= max_rounds:
            status, reason = STATUS_BUDGET, "round cap reached"
            break
        rec = scheduler.next()
        active = sorted(rec.active)
        epoch_idx = len(ledger.epoch_starts) - 1

        if fast_order is not None:
            actions = _fast_actions(cur, fast_order, active, algo)
        else:
            actions = _general_actions(cur, active, algo)
        try:
            new = apply_moves(cur, actions, active)
        except ValueError as exc:    # illegal light combination and the like
            status, reason = STATUS_VIOLATION, str(exc)
            break

        new_fast, new_order = _column_orders(new, distinct, algo)

        # safety monitors --------------------------------------------------
        if new_order is not None:
            cols = _column_collisions(new, new_order)
            connected = _column_connected(new, new_order)
        else:
            cols = _full_collisions(new)
            connected = new.connected()
        if cols:
            collisions_log.append((t, tuple(cols)))
        if cols and is_maxline:
            status, reason = STATUS_VIOLATION, f"collision at round {t}: {cols}"
            _emit_record(records, new, ids, t, epoch_idx, active, algo,
                         new_order, collisions=cols)
            ledger.update(rec)
            cur = new
            t += 1
            break
        if not connected:
            status, reason = STATUS_VIOLATION, f"disconnected at round {t}"
            _emit_record(records, new, ids, t, epoch_idx, active, algo,
                         new_order, collisions=cols)
            ledger.update(rec)
            cur = new
            t += 1
            break

        # per-round potential certificate (oblivious line former) ----------
        if round_drops is not None and order is not None and n >= 2:
            if new_order is None:
                status, reason = (STATUS_VIOLATION,
                                  f"column lost at round {t}")
                ledger.update(rec)
                cur = new
                t += 1
                break
            ids_b, g_before = gaps_from_config(cur)
            ids_a, g_after = gaps_from_config(new)
            if ids_b != ids_a:
                status, reason = (STATUS_VIOLATION,
                                  f"column order changed at round {t}")
                ledger.update(rec)
                cur = new
                t += 1
                break
            flags = [rid in rec.active for rid in ids_b]
            try:
                round_drops.update(phi_drop_bound_check(g_before, flags, g_after), t)
            except ValueError as exc:
                status, reason = STATUS_VIOLATION, str(exc)
                ledger.update(rec)
                cur = new
                t += 1
                break

        _emit_record(records, new, ids, t, epoch_idx, active, algo, new_order,
                     collisions=cols if algo == ALGO_GATHERING else None)
        if light_states is not None:
            light_states.update(
                (r.lights.c, r.lights.mov, r.lights.prev, r.lights.final)
                for r in new.robots)

        before_epochs = len(ledger.epoch_starts)
        ledger.update(rec)
        cur = new
        order = new_order
        fast_order = new_fast
        t += 1
        if (len(ledger.epoch_starts) > before_epochs
                and algo == ALGO_MAX_OBLOT and order is not None):
            _, g = gaps_from_config(cur)
            epoch_gaps.append((len(ledger.epoch_starts) - 1, g))

    epochs_used = ledger.epochs_elapsed(t - 1) if t > 0 else 0
    if status == STATUS_BUDGET and reason == "epoch budget exhausted":
        epochs_used = max_epochs

    trace = None
    if records is not None:
        records.append({"type": "end", "status": status, "reason": reason,
                        "rounds": t, "epochs": epochs_used})
        trace = Trace(header=header, records=records)
        if cfg.trace_path:
            trace.write_jsonl(cfg.trace_path)

    epoch_report = None
    if algo == ALGO_MAX_OBLOT and len(epoch_gaps) >= 1:
        epoch_report = epoch_bound_checks(n, epoch_gaps, cfg.epsilon,
                                          cur.range_model.radius)

    return RunResult(
        status=status, reason=reason, rounds=t, epochs=epochs_used,
        final=cur, trace=trace, collisions=collisions_log,
        light_states=len(light_states) if light_states is not None else None,
        round_drops=round_drops, epoch_gaps=epoch_gaps or None,
        epoch_report=epoch_report,
        line=line_metrics(cur) if is_maxline else None,
    )


def _emit_record(records: list[dict] | None, config: GlobalConfiguration,
                 ids: Sequence[int], t: int, epoch: int,
                 active: Sequence[int], algorithm: str,
                 order: Sequence[int] | None,
                 collisions: Sequence[tuple[int, int]] | None = None) -> None:
    if records is None:
        return
    by_id = {r.id: r for r in config.robots}
    rec: dict = {
        "type": "round",
        "round": t,
        "epoch": epoch,
        "active": list(active),
        "pos": [[by_id[i].pos.x, by_id[i].pos.y] for i in ids],
    }
    if algorithm in LUMI_ALGORITHMS:
        rec["lights"] = [
            [by_id[i].lights.c, int(by_id[i].lights.mov),
             int(by_id[i].lights.prev), int(by_id[i].lights.final)]
            for i in ids]
    if algorithm in MAXLINE_ALGORITHMS:
        if order is not None:
            _, g = gaps_from_config(config)
            rec["phi"] = phi(g)
        else:
            rec["phi"] = None
    if algorithm == ALGO_GATHERING:
        rec["collisions"] = [list(c) for c in (collisions or [])]
    records.append(rec)


# ---------------------------------------------------------------------------
# chain simulation
# ---------------------------------------------------------------------------

def _simulate_chain(cfg: RunConfig, initial: ChainConfiguration) -> RunResult:
    inner = initial.inner
    ids = list(range(inner))            # scheduler id i drives chain robot i+1
    spec = cfg.scheduler
    max_epochs = (cfg.max_epochs if cfg.max_epochs is not None
                  else default_epoch_budget(ALGO_CHAIN, inner, cfg.epsilon))
    max_rounds = (cfg.max_rounds if cfg.max_rounds is not None
                  else max_epochs * spec.bound_for(inner) + spec.bound_for(inner))
    scheduler = Scheduler(spec, ids)
    ledger = EpochLedger(frozenset(ids))

    header = _make_header(cfg, initial, ids, max_epochs, max_rounds)
    records: list[dict] | None = [] if cfg.wants_trace else None

    cur = initial
    chain_phi2: list[tuple[int, float, float]] = [
        (0, phi2(cur, "x"), phi2(cur, "y"))]

    status = STATUS_BUDGET
    reason = ""
    t = 0
    while True:
        if eps_reached(cur, cfg.epsilon):
            status, reason = STATUS_CONVERGED, ""
            break
        if ledger.epoch_of(t) >= max_epochs:
            status, reason = STATUS_BUDGET, "epoch budget exhausted"
            break
        if t >= max_rounds:
            status, reason = STATUS_BUDGET, "round cap reached"
            break
        rec = scheduler.next()
        active = sorted(rec.active)
        epoch_idx = len(ledger.epoch_starts) - 1
        try:
            new = gtm_compute(cur, [i + 1 for i in active])
        except ValueError as exc:       # a link left the connectivity range
            status, reason = STATUS_VIOLATION, str(exc)
            break
        if records is not None:
            records.append({
                "type": "round", "round": t, "epoch": epoch_idx,
                "active": active,
                "pos": [[p.x, p.y] for p in new.positions],
                "phi2": [phi2(new, "x"), phi2(new, "y")],
            })
        before_epochs = len(ledger.epoch_starts)
        ledger.update(rec)
        cur = new
        t += 1
        if len(ledger.epoch_starts) > before_epochs:
            chain_phi2.append((len(ledger.epoch_starts) - 1,
                               phi2(cur, "x"), phi2(cur, "y")))

    epochs_used = ledger.epochs_elapsed(t - 1) if t > 0 else 0
    if status == STATUS_BUDGET and reason == "epoch budget exhausted":
        epochs_used = max_epochs

    trace = None
    if records is not None:
        records.append({"type": "end", "status": status, "reason": reason,
                        "rounds": t, "epochs": epochs_used})
        trace = Trace(header=header, records=records)
        if cfg.trace_path:
            trace.write_jsonl(cfg.trace_path)

    return RunResult(
        status=status, reason=reason, rounds=t, epochs=epochs_used,
        final=cur, trace=trace, chain_phi2=chain_phi2,
        chain_report=chain_epoch_report(inner, chain_phi2),
    )


def chain_epoch_report(inner: int,
                       chain_phi2: Sequence[tuple[int, float, float]]) -> dict:
    """Per-epoch relative drop certification for both chain axis potentials."""
    bound = chain_drop_bound(inner)
    report = {"pairs": 0, "violations": 0, "bound": bound,
              "min_ratio_x": None, "min_ratio_y": None}
    for (_, px0, py0), (_, px1, py1) in zip(chain_phi2, chain_phi2[1:]):
        report["pairs"] += 1
        for axis, p0, p1 in (("x", px0, px1), ("y", py0, py1)):
            if p0 <= PHI_GUARD:
                continue
            ratio = (p0 - p1) / p0
            key = f"min_ratio_{axis}"
            if report[key] is None or ratio < report[key]:
                report[key] = ratio
            if ratio < bound - SLACK:
                report["violations"] += 1
    return report


# ---------------------------------------------------------------------------
# trace verification
# ---------------------------------------------------------------------------

@dataclass
class VerifyReport:
    path: str
    replay_ok: bool
    first_mismatch: int | None
    connectivity_ok: bool
    collisions_ok: bool
    lights_ok: bool
    epochs_ok: bool
    round_drops: dict | None
    epoch_violations: int
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.replay_ok and self.connectivity_ok and self.collisions_ok
                and self.lights_ok and self.epochs_ok
                and self.epoch_violations == 0
                and (self.round_drops is None or self.round_drops["violations"] == 0))


def config_from_header(header: dict) -> RunConfig:
    """Reconstruct the run configuration embedded in a trace header. The
    online checks are re-enabled exactly as recorded so the replay follows
    the original control flow bit for bit."""
    return RunConfig(
        algorithm=header["algorithm"],
        scheduler=SchedulerSpec.from_dict(header["scheduler"]),
        seed=header["seed"],
        epsilon=header["epsilon"],
        max_epochs=header["max_epochs"],
        max_rounds=header["max_rounds"],
        chirality="as-is",
        source=SourceSpec(kind="inline", inline=header["initial"]),
        collect_trace=True,
        check_round_drops=bool(header.get("check_round_drops", True)),
    )


def verify(path: str) -> VerifyReport:
    """Replay a trace from its embedded header and byte-compare every line;
    then re-check safety, epoch accounting, and the potential certificates
    from the recorded rounds themselves."""
    lines = Trace.read_lines(path)
    trace = Trace.read_jsonl(path)
    header = trace.header

    cfg = config_from_header(header)
    result = simulate(cfg)
    regenerated = list(result.trace.lines())

    replay_ok = True
    first_mismatch: int | None = None
    for i in range(max(len(lines), len(regenerated))):
        a = lines[i] if i < len(lines) else None
        b = regenerated[i] if i < len(regenerated) else None
        if a != b:
            replay_ok = False
            first_mismatch = i
            break

    if header["kind"] == "chain":
        return _verify_chain_records(path, header, trace.records,
                                     replay_ok, first_mismatch)
    return _verify_planar_records(path, header, trace.records,
                                  replay_ok, first_mismatch)


def _verify_planar_records(path: str, header: dict, records: list[dict],
                           replay_ok: bool,
                           first_mismatch: int | None) -> VerifyReport:
    algo = header["algorithm"]
    ids = header["ids"]
    initial = config_from_dict(header["initial"])
    model = initial.range_model
    is_maxline = algo in MAXLINE_ALGORITHMS
    notes: list[str] = []

    connectivity_ok = True
    collisions_ok = True
    lights_ok = True
    rounds = [r for r in records if r.get("type") == "round"]
    end = next((r for r in records if r.get("type") == "end"), None)

    # independent per-round checks off the recorded states
    ledger = EpochLedger(frozenset(ids))
    epochs_ok = True
    states: list[list[Point2]] = [
        [initial.robot(i).pos for i in ids]]
    actives: list[list[int]] = []
    for rec in rounds:
        pts = [Point2(x, y) for x, y in rec["pos"]]
        states.append(pts)
        actives.append(rec["active"])
        aborted = (end is not None and end["status"] == STATUS_VIOLATION
                   and rec is rounds[-1])
        if not is_connected(pts, model) and not aborted:
            connectivity_ok = False
            notes.append(f"round {rec['round']}: disconnected")
        if is_maxline and not aborted:
            for i in range(len(pts)):
                for j in range(i + 1, len(pts)):
                    if pts[i].coincides(pts[j]):
                        collisions_ok = False
                        notes.append(f"round {rec['round']}: collision "
                                     f"({ids[i]},{ids[j]})")
        for lt in rec.get("lights", []):
            try:
                Lights(c=lt[0], mov=bool(lt[1]), prev=bool(lt[2]),
                       final=bool(lt[3]))
            except ValueError as exc:
                lights_ok = False
                notes.append(f"round {rec['round']}: {exc}")
        if ledger.epoch_of(rec["round"]) != rec["epoch"]:
            epochs_ok = False
            notes.append(f"round {rec['round']}: epoch index mismatch")
        ledger.update(ActivationRecord(rec["round"], frozenset(rec["active"])))

    # potential certificates recomputed from the recorded geometry
    round_drops = None
    epoch_violations = 0
    if algo == ALGO_MAX_OBLOT:
        summary = RoundDropSummary()
        epoch_gaps: list[tuple[int, GapVector]] = []
        seen_epochs: set[int] = set()
        for k in range(len(states) - 1):
            gb = _column_gaps(states[k], ids)
            ga = _column_gaps(states[k + 1], ids)
            if gb is None or ga is None:
                continue
            order_b, g_before = gb
            order_a, g_after = ga
            if order_b != order_a:
                continue
            flags = [rid in set(actives[k]) for rid in order_b]
            try:
                summary.update(phi_drop_bound_check(g_before, flags, g_after), k)
            except ValueError as exc:
                summary.violations += 1
                notes.append(f"round {k}: {exc}")
            ep = rounds[k]["epoch"] if k < len(rounds) else None
            if ep is not None and ep not in seen_epochs:
                seen_epochs.add(ep)
                epoch_gaps.append((ep, g_before))
        round_drops = summary.to_dict()
        if len(epoch_gaps) >= 2:
            rep = epoch_bound_checks(len(ids), epoch_gaps, header["epsilon"],
                                     model.radius)
            epoch_violations = rep.violations

    return VerifyReport(path=path, replay_ok=replay_ok,
                        first_mismatch=first_mismatch,
                        connectivity_ok=connectivity_ok,
                        collisions_ok=collisions_ok, lights_ok=lights_ok,
                        epochs_ok=epochs_ok, round_drops=round_drops,
                        epoch_violations=epoch_violations, notes=notes)


def _column_gaps(points: Sequence[Point2],
                 ids: Sequence[int]) -> tuple[list[int], GapVector] | None:
    x0 = points[0].x
    if any(abs(p.x - x0) > TAU_GEO for p in points):
        return None
    order = sorted(range(len(points)), key=lambda i: (points[i].y, ids[i]))
    ys = [points[i].y for i in order]
    if any(ys[i + 1] - ys[i] <= TAU_GEO for i in range(len(ys) - 1)):
        return None
    return ([ids[i] for i in order],
            GapVector(tuple(ys[i + 1] - ys[i] for i in range(len(ys) - 1))))


def _phi2_of_points(points: Sequence[Point2], axis: str) -> float:
    idx = 0 if axis == "x" else 1
    coords = [(b.x - a.x, b.y - a.y)[idx]
              for a, b in zip(points, points[1:])]
    m = sum(coords) / len(coords)
    return sum((v - m) ** 2 for v in coords)


def _verify_chain_records(path: str, header: dict, records: list[dict],
                          replay_ok: bool,
                          first_mismatch: int | None) -> VerifyReport:
    initial = chain_from_dict(header["initial"])
    radius = initial.radius
    inner = initial.inner
    notes: list[str] = []
    connectivity_ok = True
    epochs_ok = True
    ledger = EpochLedger(frozenset(header["ids"]))
    rounds = [r for r in records if r.get("type") == "round"]
    phi2_series: list[tuple[int, float, float]] = [
        (0, phi2(initial, "x"), phi2(initial, "y"))]
    for rec in rounds:
        pts = [Point2(x, y) for x, y in rec["pos"]]
        for a, b in zip(pts, pts[1:]):
            if a.euclidean(b) > radius + 1e-12:
                connectivity_ok = False
                notes.append(f"round {rec['round']}: link too long")
        if ledger.epoch_of(rec["round"]) != rec["epoch"]:
            epochs_ok = False
            notes.append(f"round {rec['round']}: epoch index mismatch")
        new_start_before = len(ledger.epoch_starts)
        ledger.update(ActivationRecord(rec["round"], frozenset(rec["active"])))
        if len(ledger.epoch_starts) > new_start_before:
            phi2_series.append((len(ledger.epoch_starts) - 1,
                                _phi2_of_points(pts, "x"),
                                _phi2_of_points(pts, "y")))
    report = chain_epoch_report(inner, phi2_series)
    return VerifyReport(path=path, replay_ok=replay_ok,
                        first_mismatch=first_mismatch,
                        connectivity_ok=connectivity_ok, collisions_ok=True,
                        lights_ok=True, epochs_ok=epochs_ok, round_drops=None,
                        epoch_violations=report["violations"], notes=notes)


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

@dataclass
class SweepRow:
    algorithm: str
    scheduler: str
    axis: str
    value: float
    n: int
    seed: int
    status: str
    rounds: int
    epochs: int


@dataclass
class SweepResult:
    rows: list[SweepRow]
    axis: str
    medians: dict[float, float]
    exponent: float | None
    intercept: float | None

    def write_csv(self, path: str) -> None:
        import csv
        with open(path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["algorithm", "scheduler", "axis", "value", "n",
                        "seed", "status", "rounds", "epochs"])
            for r in self.rows:
                w.writerow([r.algorithm, r.scheduler, r.axis, r.value, r.n,
                            r.seed, r.status, r.rounds, r.epochs])


def sweep(algorithm: str, scheduler: str, values: Sequence[float],
          seeds: Sequence[int], *, axis: str = "n", n: int | None = None,
          epsilon: float = 0.01, range_kind: str = "square",
          radius: float = 1.0, max_epochs: int | None = None,
          csv_path: str | None = None) -> SweepResult:
    """Run a grid of instances along one axis (robot count, or initial
    diameter for the gathering runs) and fit the scaling exponent of the
    median epoch count on a log-log scale."""
    if axis not in ("n", "delta"):
        raise ValueError("axis must be 'n' or 'delta'")
    rows: list[SweepRow] = []
    per_value: dict[float, list[int]] = {v: [] for v in values}
    for v in values:
        for seed in seeds:
            if axis == "n":
                cfg = RunConfig(algorithm=algorithm, scheduler=scheduler,
                                n=int(v), seed=seed, epsilon=epsilon,
                                range_kind=range_kind, radius=radius,
                                max_epochs=max_epochs)
            else:
                cfg = RunConfig(algorithm=algorithm, scheduler=scheduler,
                                n=n or 20, seed=seed, epsilon=epsilon,
                                range_kind=range_kind, radius=radius,
                                max_epochs=max_epochs,
                                source=SourceSpec(kind="diagonal",
                                                  delta=float(v)))
            res = simulate(cfg)
            rows.append(SweepRow(algorithm=algorithm, scheduler=scheduler,
                                 axis=axis, value=float(v), n=cfg.n or 0,
                                 seed=seed, status=res.status,
                                 rounds=res.rounds, epochs=res.epochs))
            if res.converged:
                per_value[v].append(res.epochs)
    medians = {float(v): statistics.median(es)
               for v, es in per_value.items() if es}
    exponent = intercept = None
    usable = {v: m for v, m in medians.items() if v > 0 and m > 0}
    if len(usable) >= 2 and len(set(usable)) >= 2:
        xs = [math.log(v) for v in usable]
        ys = [math.log(m) for m in usable.values()]
        if len(set(xs)) >= 2:
            fit = statistics.linear_regression(xs, ys)
            exponent, intercept = fit.slope, fit.intercept
    result = SweepResult(rows=rows, axis=axis, medians=medians,
                         exponent=exponent, intercept=intercept)
    if csv_path:
        result.write_csv(csv_path)
    return result

"""Activation schedulers (fully synchronous and fair semi-synchronous) and
epoch accounting.

An epoch is the minimal window in which every robot completes at least one
full look-compute-move cycle; under FSYNC every round is an epoch. All
semi-synchronous modes enforce fairness with a hard bound E: a robot inactive
for E-1 consecutive rounds is force-added to the next activation set.

Randomness is drawn from a per-round generator seeded with
``f"{seed}:round:{t}"`` so that activation sets are a pure function of
(spec, round) — the same round always yields the same set, independent of how
the history was produced.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

FSYNC = "fsync"
SSYNC_RANDOM = "ssync-random"
SSYNC_ROUNDROBIN = "ssync-roundrobin"
SSYNC_ADVERSARY = "ssync-adversary"

KINDS = (FSYNC, SSYNC_RANDOM, SSYNC_ROUNDROBIN, SSYNC_ADVERSARY)


@dataclass(frozen=True)
class ActivationRecord:
    round: int
    active: frozenset[int]


@dataclass(frozen=True)
class SchedulerSpec:
    """Which robots wake when.

    kind            -- one of fsync / ssync-random / ssync-roundrobin /
                       ssync-adversary
    p               -- inclusion probability (ssync-random)
    k               -- robots per round (ssync-roundrobin)
    script          -- list of activation sets, repeated cyclically
                       (ssync-adversary)
    fairness_bound  -- E; defaults to 1 under fsync and 2n otherwise
    seed            -- randomness seed (ssync-random)
    """

    kind: str = FSYNC
    p: float = 0.5
    k: int = 1
    script: tuple[frozenset[int], ...] = ()
    fairness_bound: int | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown scheduler kind {self.kind!r}")
        if self.kind == SSYNC_RANDOM and not (0.0 < self.p <= 1.0):
            raise ValueError(f"activation probability must be in (0,1], got {self.p}")
        if self.kind == SSYNC_ROUNDROBIN and self.k < 1:
            raise ValueError(f"round-robin group size must be >= 1, got {self.k}")
        if self.kind == SSYNC_ADVERSARY and not self.script:
            raise ValueError("adversary scheduler needs a non-empty script")

    def bound_for(self, n: int) -> int:
        if self.fairness_bound is not None:
            return self.fairness_bound
        return 1 if self.kind == FSYNC else 2 * n

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind, "seed": self.seed}
        if self.kind == SSYNC_RANDOM:
            d["p"] = self.p
        if self.kind == SSYNC_ROUNDROBIN:
            d["k"] = self.k
        if self.kind == SSYNC_ADVERSARY:
            d["script"] = [sorted(s) for s in self.script]
        if self.fairness_bound is not None:
            d["fairness_bound"] = self.fairness_bound
        return d

    @staticmethod
    def from_dict(d: dict) -> "SchedulerSpec":
        return SchedulerSpec(
            kind=d["kind"],
            p=float(d.get("p", 0.5)),
            k=int(d.get("k", 1)),
            script=tuple(frozenset(s) for s in d.get("script", [])),
            fairness_bound=d.get("fairness_bound"),
            seed=int(d.get("seed", 0)),
        )


def parse_scheduler(text: str, seed: int = 0) -> SchedulerSpec:
    """Parse the CLI syntax: ``fsync``, ``ssync-random:P``,
    ``ssync-roundrobin:K``, ``ssync-adversary:FILE``."""
    import json

    if text == FSYNC:
        return SchedulerSpec(kind=FSYNC, seed=seed)
    if ":" not in text:
        raise ValueError(f"malformed scheduler {text!r}")
    kind, arg = text.split(":", 1)
    if kind == SSYNC_RANDOM:
        return SchedulerSpec(kind=SSYNC_RANDOM, p=float(arg), seed=seed)
    if kind == SSYNC_ROUNDROBIN:
        return SchedulerSpec(kind=SSYNC_ROUNDROBIN, k=int(arg), seed=seed)
    if kind == SSYNC_ADVERSARY:
        with open(arg) as f:
            raw = json.load(f)
        if not isinstance(raw, list) or not raw:
            raise ValueError(f"adversary script {arg!r} must be a non-empty list of lists")
        return SchedulerSpec(kind=SSYNC_ADVERSARY,
                             script=tuple(frozenset(int(i) for i in s) for s in raw),
                             seed=seed)
    raise ValueError(f"unknown scheduler kind {kind!r}")


# ---------------------------------------------------------------------------
# activation computation
# ---------------------------------------------------------------------------

def _base_set(spec: SchedulerSpec, ids: Sequence[int], t: int) -> set[int]:
    """Activation set before fairness enforcement."""
    n = len(ids)
    if spec.kind == FSYNC:
        return set(ids)
    if spec.kind == SSYNC_ROUNDROBIN:
        start = (spec.k * t) % n
        return {ids[(start + j) % n] for j in range(min(spec.k, n))}
    if spec.kind == SSYNC_ADVERSARY:
        chosen = spec.script[t % len(spec.script)]
        bad = chosen.difference(ids)
        if bad:
            raise ValueError(f"adversary script names unknown robots {sorted(bad)}")
        return set(chosen)
    # ssync-random: one generator per round; resample until non-empty
    rng = random.Random(f"{spec.seed}:round:{t}")
    while True:
        drawn = {i for i in ids if rng.random() < spec.p}
        if drawn:
            return drawn


class Scheduler:
    """Stateful wrapper producing one ActivationRecord per round, enforcing
    the fairness bound incrementally."""

    def __init__(self, spec: SchedulerSpec, ids: Sequence[int]):
        if not ids:
            raise ValueError("scheduler needs at least one robot")
        self.spec = spec
        self.ids = sorted(ids)
        self.bound = spec.bound_for(len(self.ids))
        self.t = 0
        self._idle = {i: 0 for i in self.ids}

    def next(self) -> ActivationRecord:
        active = _base_set(self.spec, self.ids, self.t)
        if self.spec.kind != FSYNC:
            for i in self.ids:
                if self._idle[i] >= self.bound - 1:
                    active.add(i)
        rec = ActivationRecord(self.t, frozenset(active))
        for i in self.ids:
            self._idle[i] = 0 if i in active else self._idle[i] + 1
        self.t += 1
        return rec


def next_activation(spec: SchedulerSpec, ids: Sequence[int],
                    history: Sequence[ActivationRecord]) -> ActivationRecord:
    """Pure form: the activation set following ``history``. Equivalent to
    replaying a Scheduler (activation is a function of the round, and idle
    counters derive from the history)."""
    sched = Scheduler(spec, ids)
    for expected, rec in enumerate(history):
        if rec.round != expected:
            raise ValueError(f"history not consecutive at round {rec.round}")
        got = sched.next()
        if got.active != rec.active:
            raise ValueError(
                f"history diverges from spec at round {rec.round}: "
                f"{sorted(rec.active)} vs expected {sorted(got.active)}")
    return sched.next()


# ---------------------------------------------------------------------------
# epochs
# ---------------------------------------------------------------------------

@dataclass
class EpochLedger:
    """Tracks epoch boundaries: a new epoch starts at round t+1 exactly when,
    since the current epoch's start, every robot has been active at least
    once."""

    ids: frozenset[int]
    epoch_starts: list[int] = field(default_factory=lambda: [0])
    _covered: set[int] = field(default_factory=set)
    _next_round: int = 0

    def update(self, record: ActivationRecord) -> None:
        if record.round != self._next_round:
            raise ValueError(
                f"epoch ledger fed round {record.round}, expected {self._next_round}")
        self._next_round += 1
        self._covered.update(record.active & self.ids)
        if self._covered == set(self.ids):
            self.epoch_starts.append(record.round + 1)
            self._covered.clear()

    def epoch_of(self, t: int) -> int:
        """0-based index of the epoch containing round t."""
        import bisect
        return bisect.bisect_right(self.epoch_starts, t) - 1

    def epochs_elapsed(self, t: int) -> int:
        """Number of epochs begun up to and including round t (1-based count)."""
        return self.epoch_of(t) + 1

    @property
    def completed_epochs(self) -> int:
        return len(self.epoch_starts) - 1

"""World model: robot states, local-frame snapshots, synchronous move application.

Robots agree on the x axis (direction and orientation) but each robot has a
private chirality on y: its local frame maps a global offset (dx, dy) to
(dx, chirality * dy). Snapshots are taken in the local frame and contain the
observer itself at (0, 0). Lights (for the luminous variants) are visible to
neighbors with one round of delay: a light set while computing in round t is
committed at the end of round t and observed from round t+1 on.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .geometry import TAU_GEO, Point2, RangeModel, adjacency, is_connected

# Default dodge denominator: when a robot needs a small vertical offset but sees
# no robot strictly above, it falls back to this value as its "smallest
# positive y".
Y_MIN_DEFAULT = 0.1


# ---------------------------------------------------------------------------
# robot state
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Lights:
    """Light state for luminous robots.

    c      -- run-cycle counter, values 0..2
    mov    -- robot holds a movement token (it is about to pin a gap)
    prev   -- robot has completed its movement in the current run
    final  -- robot belongs to / has observed a finished formation (stationary
              variant only)

    mov and prev are never both set; oblivious algorithms ignore lights
    entirely and leave them at the default.
    """

    c: int = 0
    mov: bool = False
    prev: bool = False
    final: bool = False

    def __post_init__(self) -> None:
        if self.c not in (0, 1, 2):
            raise ValueError(f"light counter must be 0..2, got {self.c}")
        if self.mov and self.prev:
            raise ValueError("mov and prev light set simultaneously")


@dataclass(frozen=True)
class RobotState:
    id: int
    pos: Point2
    chirality: int = 1  # +1 or -1: private orientation of the y axis
    lights: Lights = field(default_factory=Lights)

    def __post_init__(self) -> None:
        if self.chirality not in (1, -1):
            raise ValueError(f"chirality must be +1 or -1, got {self.chirality}")

    def to_local(self, q: Point2) -> Point2:
        """Global point -> offset in this robot's local frame."""
        return Point2(q.x - self.pos.x, self.chirality * (q.y - self.pos.y))

    def to_global(self, rel: Point2) -> Point2:
        """Offset in this robot's local frame -> global point."""
        return Point2(self.pos.x + rel.x, self.pos.y + self.chirality * rel.y)


@dataclass(frozen=True)
class GlobalConfiguration:
    robots: tuple[RobotState, ...]
    range_model: RangeModel = field(default_factory=RangeModel)
    round: int = 0

    def __post_init__(self) -> None:
        ids = [r.id for r in self.robots]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate robot ids")

    @property
    def n(self) -> int:
        return len(self.robots)

    def positions(self) -> list[Point2]:
        return [r.pos for r in self.robots]

    def robot(self, rid: int) -> RobotState:
        for r in self.robots:
            if r.id == rid:
                return r
        raise KeyError(f"no robot with id {rid}")

    def connected(self) -> bool:
        return is_connected(self.positions(), self.range_model)


# ---------------------------------------------------------------------------
# snapshots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SnapshotEntry:
    rel: Point2  # position in the observer's local frame
    lights: Lights


@dataclass(frozen=True)
class LocalSnapshot:
    """What one robot sees: all robots within range (itself included, at the
    origin), positions in its local frame, lights as committed at the end of
    the previous round. Entries keep the global id order for deterministic
    tie-breaking, but carry no identities."""

    entries: tuple[SnapshotEntry, ...]

    # -- horizontal structure ------------------------------------------------

    @property
    def x_r(self) -> float:
        return max(e.rel.x for e in self.entries)

    @property
    def x_l(self) -> float:
        return min(e.rel.x for e in self.entries)

    def collinear(self, tol: float = TAU_GEO) -> bool:
        return all(abs(e.rel.x) <= tol for e in self.entries)

    def rightmost_not_leftmost(self, tol: float = TAU_GEO) -> bool:
        """No robot strictly to the right, at least one strictly to the left."""
        return self.x_r <= tol and self.x_l < -tol

    # -- vertical structure --------------------------------------------------

    def closest_above(self, tol: float = TAU_GEO) -> SnapshotEntry | None:
        above = [e for e in self.entries if e.rel.y > tol]
        if not above:
            return None
        return min(above, key=lambda e: e.rel.y)

    def closest_below(self, tol: float = TAU_GEO) -> SnapshotEntry | None:
        below = [e for e in self.entries if e.rel.y < -tol]
        if not below:
            return None
        return max(below, key=lambda e: e.rel.y)

    @property
    def y_plus(self) -> float:
        """Local y of the closest robot strictly above, 0.0 if none."""
        e = self.closest_above()
        return e.rel.y if e is not None else 0.0

    @property
    def y_minus(self) -> float:
        """Local y of the closest robot strictly below, 0.0 if none."""
        e = self.closest_below()
        return e.rel.y if e is not None else 0.0

    # -- named subsets -------------------------------------------------------

    def y_level_set(self, tol: float = TAU_GEO) -> list[SnapshotEntry]:
        """Robots at the observer's own y level (local |y| <= tol), observer
        included."""
        return [e for e in self.entries if abs(e.rel.y) <= tol]

    def column_set(self, tol: float = TAU_GEO) -> list[SnapshotEntry]:
        """Robots in the observer's own column or the leftmost visible column."""
        xl = self.x_l
        return [e for e in self.entries
                if abs(e.rel.x) <= tol or abs(e.rel.x - xl) <= tol]

    def own_column(self, tol: float = TAU_GEO) -> list[SnapshotEntry]:
        return [e for e in self.entries if abs(e.rel.x) <= tol]

    @staticmethod
    def y_min_of(entries: Iterable[SnapshotEntry], tol: float = TAU_GEO) -> float:
        """Smallest strictly positive local y among ``entries``; falls back to
        Y_MIN_DEFAULT when none exists."""
        ys = [e.rel.y for e in entries if e.rel.y > tol]
        return min(ys) if ys else Y_MIN_DEFAULT

    def rank_at_level(self, tol: float = TAU_GEO) -> tuple[int, int]:
        """(k, m): 1-based rank of the observer among the robots at its own y
        level ordered by x, and the size of that level set."""
        level = self.y_level_set(tol)
        k = 1 + sum(1 for e in level if e.rel.x < -tol)
        return k, len(level)

    def occupied(self, rel: Point2, tol: float = TAU_GEO) -> bool:
        return any(e.rel.coincides(rel, tol) for e in self.entries)


def take_snapshot(config: GlobalConfiguration, observer: int,
                  adj: Sequence[Sequence[int]] | None = None) -> LocalSnapshot:
    """Local view of robot at index ``observer`` (index into config.robots).

    ``adj`` may carry precomputed neighbor lists to avoid the quadratic scan
    when stepping whole rounds.
    """
    robots = config.robots
    me = robots[observer]
    if adj is None:
        model = config.range_model
        idx = [j for j in range(len(robots))
               if j != observer and model.within(me.pos, robots[j].pos)]
    else:
        idx = list(adj[observer])
    entries = [SnapshotEntry(Point2(0.0, 0.0), me.lights)]
    for j in sorted(idx):
        other = robots[j]
        entries.append(SnapshotEntry(me.to_local(other.pos), other.lights))
    return LocalSnapshot(tuple(entries))


# ---------------------------------------------------------------------------
# move application
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Move:
    """Outcome of one robot's compute step, in its own local frame: the target
    offset to move to (rigidly) and the lights to commit at the end of the
    round."""

    target: Point2
    lights: Lights


@dataclass(frozen=True)
class Action:
    """A Move mapped to global coordinates, ready for apply_moves."""

    target: Point2
    lights: Lights


def apply_moves(config: GlobalConfiguration,
                actions: Mapping[int, Action],
                active: Iterable[int]) -> GlobalConfiguration:
    """Apply one synchronous round: every active robot (by id) moves to its
    action's target and commits its lights; inactive robots are untouched.
    All targets were computed from the same pre-round configuration."""
    active_set = set(active)
    missing = active_set.difference(a for a in actions)
    if missing:
        raise ValueError(f"active robots without actions: {sorted(missing)}")
    new_robots = []
    for r in config.robots:
        if r.id in active_set:
            act = actions[r.id]
            new_robots.append(replace(r, pos=act.target, lights=act.lights))
        else:
            new_robots.append(r)
    return replace(config, robots=tuple(new_robots), round=config.round + 1)


def detect_collisions(config: GlobalConfiguration,
                      tol: float = TAU_GEO) -> list[tuple[int, int]]:
    """Pairs of robot ids occupying the same point (within ``tol``)."""
    out = []
    robots = config.robots
    for i in range(len(robots)):
        for j in range(i + 1, len(robots)):
            if robots[i].pos.coincides(robots[j].pos, tol):
                out.append((robots[i].id, robots[j].id))
    return out


def neighbor_lists(config: GlobalConfiguration) -> list[list[int]]:
    return adjacency(config.positions(), config.range_model)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def config_to_dict(config: GlobalConfiguration) -> dict:
    return {
        "round": config.round,
        "range": {"kind": config.range_model.kind, "radius": config.range_model.radius},
        "robots": [
            {
                "id": r.id,
                "x": r.pos.x,
                "y": r.pos.y,
                "chirality": r.chirality,
                "lights": {
                    "c": r.lights.c,
                    "mov": r.lights.mov,
                    "prev": r.lights.prev,
                    "final": r.lights.final,
                },
            }
            for r in config.robots
        ],
    }


def config_from_dict(data: dict) -> GlobalConfiguration:
    rng = data.get("range", {})
    model = RangeModel(kind=rng.get("kind", "square"),
                       radius=float(rng.get("radius", 1.0)))
    robots = []
    for rd in data["robots"]:
        ld = rd.get("lights", {})
        robots.append(RobotState(
            id=int(rd["id"]),
            pos=Point2(float(rd["x"]), float(rd["y"])),
            chirality=int(rd.get("chirality", 1)),
            lights=Lights(
                c=int(ld.get("c", 0)),
                mov=bool(ld.get("mov", False)),
                prev=bool(ld.get("prev", False)),
                final=bool(ld.get("final", False)),
            ),
        ))
    return GlobalConfiguration(robots=tuple(robots), range_model=model,
                               round=int(data.get("round", 0)))


def config_to_json(config: GlobalConfiguration) -> str:
    return json.dumps(config_to_dict(config), sort_keys=True)


def config_from_json(text: str) -> GlobalConfiguration:
    return config_from_dict(json.loads(text))

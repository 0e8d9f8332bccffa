"""Named start configurations, impossibility probes, and random generators.

Fixture kinds:

* ``C1``     -- the three-robot generic start (0,0), (0.5,0.3), (1,0), scaled
               by c; square connectivity radius c.
* ``C2``     -- seven robots in an H shape: two vertical three-robot columns
               at x = -c and x = +c (rows -c, 0, c) bridged by one robot at
               the origin; circular connectivity radius c. Under the circular
               range each outer-corner robot sees exactly one neighbor — the
               same view an endpoint of a solved two-robot column has — while
               the three bridge robots cannot move anywhere without cutting
               the configuration.
* ``alpha``  -- a pinned configuration for viewing range alpha*c with
               connectivity radius c, alpha > 1: two vertical columns of
               2*ceil(alpha)+1 robots at x = -+(ceil(alpha)+1)c/2 (rows
               -ceil(alpha)c .. ceil(alpha)c), bridged at y = 0 by a
               horizontal chain of ceil(alpha) robots at spacing exactly c.
               The four column-end robots see exactly the view of a solved
               line's endpoint under viewing range alpha*c; every other robot
               is a cut vertex with a unique feasible point.

``stuck_check`` probes, robot by robot, a square grid of displacement
candidates and reports which nonzero displacements keep the configuration
connected — the numerical form of "no robot can safely move". Robots move
continuously, so a displacement only counts as safe when connectivity holds
at every sampled point of the straight-line motion, not merely at its
endpoint (the bridge robot of C2 could otherwise "tunnel" a full unit up to
the exact midpoint between the two top corners, reconnecting there while
having been isolated the whole way).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .geometry import Point2, RangeModel, is_connected
from .world import GlobalConfiguration, RobotState

PROBE_GRID_DEFAULT = 21


# ---------------------------------------------------------------------------
# named fixtures
# ---------------------------------------------------------------------------

def _config(points: Sequence[Point2], model: RangeModel) -> GlobalConfiguration:
    robots = tuple(RobotState(id=i, pos=p) for i, p in enumerate(points))
    return GlobalConfiguration(robots=robots, range_model=model)


def vertical_line(n: int, c: float = 1.0, x: float = 0.0,
                  kind: str = "square") -> GlobalConfiguration:
    """A solved line: n robots at (x, 0), (x, c), ..., (x, (n-1)c)."""
    pts = [Point2(x, i * c) for i in range(n)]
    return _config(pts, RangeModel(kind=kind, radius=c))


def make_fixture(kind: str, c: float = 1.0, alpha: float = 2.0) -> GlobalConfiguration:
    if not c > 0:
        raise ValueError(f"spacing c must be positive, got {c}")
    if kind == "C1":
        pts = [Point2(0.0, 0.0), Point2(0.5 * c, 0.3 * c), Point2(1.0 * c, 0.0)]
        return _config(pts, RangeModel(kind="square", radius=c))
    if kind == "C2":
        pts = [
            Point2(-c, c), Point2(-c, 0.0), Point2(-c, -c),   # left column, ids 0-2
            Point2(0.0, 0.0),                                  # bridge, id 3
            Point2(c, c), Point2(c, 0.0), Point2(c, -c),       # right column, ids 4-6
        ]
        return _config(pts, RangeModel(kind="circular", radius=c))
    if kind == "alpha":
        if not alpha > 1:
            raise ValueError(f"alpha must exceed 1, got {alpha}")
        a = math.ceil(alpha)
        half_span = (a + 1) * c / 2.0
        pts = []
        for sign in (-1.0, 1.0):
            for k in range(-a, a + 1):
                pts.append(Point2(sign * half_span, k * c))
        for j in range(1, a + 1):
            pts.append(Point2(-half_span + j * c, 0.0))
        return _config(pts, RangeModel(kind="circular", radius=c))
    raise ValueError(f"unknown fixture kind {kind!r}")


def alpha_column_ends(alpha: float) -> tuple[int, int, int, int]:
    """Ids of the four column-end robots of the alpha fixture (the only ones
    that are not connectivity-pinned)."""
    a = math.ceil(alpha)
    return (0, 2 * a, 2 * a + 1, 4 * a + 2 - 1)


# ---------------------------------------------------------------------------
# stuck probing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StuckReport:
    probe_grid: int
    escapes: dict[int, tuple[Point2, ...]]  # robot id -> connectivity-preserving
                                            # nonzero displacements

    def is_stuck(self, rid: int) -> bool:
        return len(self.escapes[rid]) == 0

    @property
    def stuck_ids(self) -> list[int]:
        return sorted(rid for rid, esc in self.escapes.items() if not esc)


PATH_SAMPLES_DEFAULT = 16


def stuck_check(config: GlobalConfiguration, model: RangeModel,
                probe_grid: int = PROBE_GRID_DEFAULT,
                path_samples: int = PATH_SAMPLES_DEFAULT) -> StuckReport:
    """Probe a probe_grid x probe_grid grid of displacements over [-1,1]^2 for
    every robot: which single-robot moves keep the configuration connected
    under ``model``? The straight-line motion to the displacement is sampled
    at ``path_samples`` points, all of which must stay connected (rigid robots
    move continuously). Input must be connected under ``model``."""
    if probe_grid < 2:
        raise ValueError("probe grid needs at least 2 points per axis")
    if path_samples < 1:
        raise ValueError("need at least one sample along the motion")
    positions = config.positions()
    if not is_connected(positions, model):
        raise ValueError("stuck check requires a connected configuration")
    steps = [-1.0 + 2.0 * i / (probe_grid - 1) for i in range(probe_grid)]
    fractions = [j / path_samples for j in range(1, path_samples + 1)]
    escapes: dict[int, tuple[Point2, ...]] = {}
    for idx, robot in enumerate(config.robots):
        found = []
        for dx in steps:
            for dy in steps:
                if dx == 0.0 and dy == 0.0:
                    continue
                trial = list(positions)
                # endpoint first: it rejects almost everything cheaply
                trial[idx] = Point2(robot.pos.x + dx, robot.pos.y + dy)
                if not is_connected(trial, model):
                    continue
                ok = True
                for f in fractions[:-1]:
                    trial[idx] = Point2(robot.pos.x + f * dx,
                                        robot.pos.y + f * dy)
                    if not is_connected(trial, model):
                        ok = False
                        break
                if ok:
                    found.append(Point2(dx, dy))
        escapes[robot.id] = tuple(found)
    return StuckReport(probe_grid=probe_grid, escapes=escapes)


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

def random_connected(n: int, model: RangeModel, seed: int,
                     min_sep: float = 1e-3) -> GlobalConfiguration:
    """A random connected configuration grown robot by robot: each new robot
    lands within 0.9 * radius of a uniformly chosen existing one, at least
    ``min_sep`` away from everyone."""
    if n < 1:
        raise ValueError("need at least one robot")
    rng = random.Random(f"{seed}:init")
    pts = [Point2(0.0, 0.0)]
    r = 0.9 * model.radius
    while len(pts) < n:
        anchor = pts[rng.randrange(len(pts))]
        for _ in range(1000):
            if model.kind == "square":
                cand = Point2(anchor.x + rng.uniform(-r, r),
                              anchor.y + rng.uniform(-r, r))
            else:
                rad = r * math.sqrt(rng.random())
                ang = rng.uniform(0.0, 2.0 * math.pi)
                cand = Point2(anchor.x + rad * math.cos(ang),
                              anchor.y + rad * math.sin(ang))
            if all(cand.euclidean(p) >= min_sep for p in pts):
                pts.append(cand)
                break
        else:
            raise RuntimeError("could not place a robot with the required separation")
    cfg = _config(pts, model)
    assert cfg.connected()
    return cfg


def diagonal_span_config(n: int, seed: int, delta: float,
                         model: RangeModel | None = None) -> GlobalConfiguration:
    """A connected configuration whose Euclidean diameter is exactly ``delta``:
    n robots along the main diagonal from the origin, interior points jittered
    perpendicular to it but kept inside the envelope so the two endpoints stay
    the farthest pair."""
    if n < 2:
        raise ValueError("need at least two robots for a positive diameter")
    model = model or RangeModel(kind="square", radius=1.0)
    rng = random.Random(f"{seed}:diag")
    s = delta / math.sqrt(2.0)
    spacing = s / (n - 1)
    if spacing > 0.85 * model.radius:
        raise ValueError(f"{n} robots cannot connect a diameter of {delta}")
    jitter = min(0.05 * model.radius, 0.2 * spacing)
    pts = [Point2(0.0, 0.0)]
    for i in range(1, n - 1):
        j = rng.uniform(-jitter, jitter)
        pts.append(Point2(i * spacing + j, i * spacing - j))
    pts.append(Point2(s, s))
    cfg = _config(pts, model)
    assert cfg.connected()
    return cfg

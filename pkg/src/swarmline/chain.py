"""Chain contraction: inner robots of a communication chain repeatedly jump to
the midpoint of their two chain neighbors, straightening the chain between two
stationary outer robots.

Robots here are fully disoriented (each has a private rotation and possibly a
reflection), but the midpoint of two observed neighbors is invariant under any
local isometry, so the rule itself is computed on global coordinates; the
local frames are kept on the configuration and exercised through
``chain_snapshot`` to show the observations the rule would actually be made
from.

The straightness measure is a per-axis potential: with chain vectors
w_i = p_i - p_{i-1} and their (time-invariant) mean m = (p_{n+1} - p_0)/(n+1),

    phi2_axis = sum_{i=1}^{n+1} (w_i.axis - m.axis)^2.

Every epoch of a fair scheduler reduces each axis potential by at least the
fraction 1/(4 (n+1)^2).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .geometry import Point2

CHAIN_DIST_TOL = 1e-12


@dataclass(frozen=True)
class ChainFrame:
    """A robot's private frame: rotation angle plus optional reflection."""

    angle: float = 0.0
    reflect: bool = False

    def to_local(self, v: Point2) -> Point2:
        ca, sa = math.cos(-self.angle), math.sin(-self.angle)
        x, y = ca * v.x - sa * v.y, sa * v.x + ca * v.y
        return Point2(x, -y) if self.reflect else Point2(x, y)

    def to_global(self, v: Point2) -> Point2:
        x, y = (v.x, -v.y) if self.reflect else (v.x, v.y)
        ca, sa = math.cos(self.angle), math.sin(self.angle)
        return Point2(ca * x - sa * y, sa * x + ca * y)


@dataclass(frozen=True)
class ChainConfiguration:
    """Positions p_0..p_{n+1} along the chain (outer robots at both ends are
    stationary), with per-robot frames. Consecutive chain distances may not
    exceed the connectivity radius."""

    positions: tuple[Point2, ...]
    frames: tuple[ChainFrame, ...] = ()
    radius: float = 1.0

    def __post_init__(self) -> None:
        if len(self.positions) < 3:
            raise ValueError("a chain needs two outer robots and at least one inner")
        if self.frames and len(self.frames) != len(self.positions):
            raise ValueError("frames and positions disagree in length")
        if not self.frames:
            object.__setattr__(self, "frames",
                               tuple(ChainFrame() for _ in self.positions))
        for i in range(len(self.positions) - 1):
            d = self.positions[i].euclidean(self.positions[i + 1])
            if d > self.radius + CHAIN_DIST_TOL:
                raise ValueError(
                    f"chain link {i} has length {d} > radius {self.radius}")

    @property
    def inner(self) -> int:
        """Number of movable robots."""
        return len(self.positions) - 2

    def vectors(self) -> list[Point2]:
        """Chain vectors w_1..w_{n+1}."""
        return [self.positions[i] - self.positions[i - 1]
                for i in range(1, len(self.positions))]

    def mean_vector(self) -> Point2:
        n1 = len(self.positions) - 1
        span = self.positions[-1] - self.positions[0]
        return Point2(span.x / n1, span.y / n1)


def chain_snapshot(chain: ChainConfiguration, i: int) -> tuple[Point2, Point2]:
    """The two chain neighbors of inner robot i, in robot i's own frame."""
    if not 1 <= i <= chain.inner:
        raise IndexError(f"robot {i} is not an inner chain robot")
    f = chain.frames[i]
    p = chain.positions[i]
    return (f.to_local(chain.positions[i - 1] - p),
            f.to_local(chain.positions[i + 1] - p))


def gtm_target(chain: ChainConfiguration, i: int) -> Point2:
    """Midpoint of robot i's chain neighbors. Outer robots never move."""
    if not 1 <= i <= chain.inner:
        raise IndexError(f"robot {i} is an outer robot and never moves")
    a = chain.positions[i - 1]
    b = chain.positions[i + 1]
    return Point2(0.5 * (a.x + b.x), 0.5 * (a.y + b.y))


def gtm_compute(chain: ChainConfiguration, active: Iterable[int]) -> ChainConfiguration:
    """One synchronous round: every active inner robot jumps to the midpoint
    of its chain neighbors (targets all evaluated on the pre-round chain)."""
    active_set = set(active)
    for i in active_set:
        if not 1 <= i <= chain.inner:
            raise IndexError(f"cannot activate outer robot {i}")
    new_positions = tuple(
        gtm_target(chain, i) if i in active_set else p
        for i, p in enumerate(chain.positions))
    return replace(chain, positions=new_positions)


# ---------------------------------------------------------------------------
# potentials
# ---------------------------------------------------------------------------

def phi2(chain: ChainConfiguration, axis: str) -> float:
    """Per-axis straightness potential (see module docstring)."""
    if axis not in ("x", "y"):
        raise ValueError(f"axis must be 'x' or 'y', got {axis!r}")
    m = getattr(chain.mean_vector(), axis)
    return sum((getattr(w, axis) - m) ** 2 for w in chain.vectors())


def eps_reached(chain: ChainConfiguration, epsilon: float) -> bool:
    """Every chain vector is within Euclidean distance epsilon of the common
    target vector (the straightened chain's uniform step)."""
    m = chain.mean_vector()
    return all((w - m).euclidean(Point2(0.0, 0.0)) <= epsilon for w in chain.vectors())


def chain_drop_bound(inner: int) -> float:
    """Guaranteed per-epoch relative drop of each axis potential."""
    return 1.0 / (4.0 * (inner + 1) ** 2)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def chain_to_dict(chain: ChainConfiguration) -> dict:
    return {
        "radius": chain.radius,
        "positions": [[p.x, p.y] for p in chain.positions],
        "frames": [[f.angle, 1 if f.reflect else 0] for f in chain.frames],
    }


def chain_from_dict(data: dict) -> ChainConfiguration:
    positions = tuple(Point2(float(x), float(y)) for x, y in data["positions"])
    frames_raw = data.get("frames")
    if frames_raw is None:
        frames = None
    else:
        frames = tuple(ChainFrame(angle=float(a), reflect=bool(r))
                       for a, r in frames_raw)
    return ChainConfiguration(positions=positions, frames=frames,
                              radius=float(data.get("radius", 1.0)))


# ---------------------------------------------------------------------------
# random instances
# ---------------------------------------------------------------------------

def random_chain(inner: int, seed: int, radius: float = 1.0) -> ChainConfiguration:
    """A random connected chain with ``inner`` movable robots: link lengths in
    [0.3, 0.95] * radius, random turn angles, random disoriented frames."""
    if inner < 1:
        raise ValueError("need at least one inner robot")
    rng = random.Random(f"{seed}:chain")
    pts = [Point2(0.0, 0.0)]
    heading = rng.uniform(0.0, 2.0 * math.pi)
    for _ in range(inner + 1):
        heading += rng.uniform(-1.2, 1.2)
        step = rng.uniform(0.3, 0.95) * radius
        last = pts[-1]
        pts.append(Point2(last.x + step * math.cos(heading),
                          last.y + step * math.sin(heading)))
    frames = tuple(ChainFrame(angle=rng.uniform(0.0, 2.0 * math.pi),
                              reflect=rng.random() < 0.5)
                   for _ in pts)
    return ChainConfiguration(positions=tuple(pts), frames=frames, radius=radius)

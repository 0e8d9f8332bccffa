"""Planar geometry primitives: points, visibility ranges, connectivity.

Robots are points in the plane. Two range models matter: the square range
(Chebyshev distance, i.e. an axis-aligned square viewing area) and the circular
range (Euclidean distance). Both are inclusive at the boundary radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

# Geometric tolerance: coordinates closer than this are treated as equal
# (collinearity tests, collision detection, occupancy checks).
TAU_GEO = 1e-9


# ---------------------------------------------------------------------------
# points
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Point2:
    x: float
    y: float

    def __add__(self, other: "Point2") -> "Point2":
        return Point2(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Point2") -> "Point2":
        return Point2(self.x - other.x, self.y - other.y)

    def scaled(self, s: float) -> "Point2":
        return Point2(self.x * s, self.y * s)

    def euclidean(self, other: "Point2") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)

    def chebyshev(self, other: "Point2") -> float:
        return max(abs(self.x - other.x), abs(self.y - other.y))

    def coincides(self, other: "Point2", tol: float = TAU_GEO) -> bool:
        return abs(self.x - other.x) <= tol and abs(self.y - other.y) <= tol


# ---------------------------------------------------------------------------
# range models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RangeModel:
    """Visibility/connectivity range: ``square`` (Chebyshev) or ``circular``
    (Euclidean), inclusive of the boundary.

    Boundary inclusion is tolerant by the geometric tolerance: the movement
    rules deliberately place robots at distance exactly the radius (gap pins,
    solved-line spacing), which rounds to radius plus or minus an ulp in
    floats; a strict comparison would make such a pair flicker in and out of
    each other's view."""

    kind: str = "square"
    radius: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in ("square", "circular"):
            raise ValueError(f"unknown range kind {self.kind!r}")
        if not (self.radius > 0):
            raise ValueError(f"range radius must be positive, got {self.radius}")

    def within(self, a: Point2, b: Point2) -> bool:
        if self.kind == "square":
            return a.chebyshev(b) <= self.radius + TAU_GEO
        return a.euclidean(b) <= self.radius + TAU_GEO


def neighbors(positions: Sequence[Point2], model: RangeModel, observer: int) -> list[int]:
    """Indices of all robots other than ``observer`` within range of it."""
    if not 0 <= observer < len(positions):
        raise IndexError(f"observer {observer} out of range for {len(positions)} robots")
    p = positions[observer]
    return [j for j, q in enumerate(positions) if j != observer and model.within(p, q)]


# ---------------------------------------------------------------------------
# connectivity
# ---------------------------------------------------------------------------

def adjacency(positions: Sequence[Point2], model: RangeModel) -> list[list[int]]:
    """Full neighbor lists (excluding self) for every robot."""
    n = len(positions)
    adj: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        pi = positions[i]
        for j in range(i + 1, n):
            if model.within(pi, positions[j]):
                adj[i].append(j)
                adj[j].append(i)
    return adj


def is_connected(positions: Sequence[Point2], model: RangeModel) -> bool:
    """True iff the visibility graph over all robots is connected.

    Raises on an empty configuration (connectivity of nothing is undefined).
    """
    n = len(positions)
    if n == 0:
        raise ValueError("connectivity of an empty configuration is undefined")
    if n == 1:
        return True
    adj = adjacency(positions, model)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                count += 1
                stack.append(j)
    return count == n


def diameter_stats(positions: Sequence[Point2]) -> tuple[float, float, float]:
    """(delta, delta_x, delta_y): max pairwise Euclidean distance and the
    coordinate extents of the configuration."""
    if not positions:
        raise ValueError("diameter of an empty configuration is undefined")
    xs = [p.x for p in positions]
    ys = [p.y for p in positions]
    delta = 0.0
    for i, p in enumerate(positions):
        for q in positions[i + 1:]:
            d = p.euclidean(q)
            if d > delta:
                delta = d
    return delta, max(xs) - min(xs), max(ys) - min(ys)


def all_collinear_vertical(positions: Iterable[Point2], tol: float = TAU_GEO) -> bool:
    """True iff all robots share one x coordinate (within ``tol``)."""
    it = iter(positions)
    try:
        x0 = next(it).x
    except StopIteration:
        return True
    return all(abs(p.x - x0) <= tol for p in it)

"""Gathering rule for oblivious point robots with square visibility.

The swarm first collapses onto one vertical column (every robot chases the
rightmost column it sees, one unit left per round), then contracts vertically:
each robot moves to the midpoint of the farthest visible robots above and
below while the column keeps drifting left. Collisions are the goal here —
runs end when all robots coincide.
"""

from __future__ import annotations

from .geometry import Point2
from .world import LocalSnapshot, Move


def gathering_compute(snap: LocalSnapshot) -> Move:
    """One look-compute-move step. Lights are untouched (oblivious rule)."""
    own = snap.entries[0].lights
    if snap.collinear():
        ys = [e.rel.y for e in snap.entries]
        # farthest visible robot above/below; the observer itself (y = 0)
        # stands in when a side is empty
        y_above = max(ys)
        y_below = min(ys)
        return Move(Point2(snap.x_r - 1.0, 0.5 * y_above + 0.5 * y_below), own)
    return Move(Point2(snap.x_r - 1.0, 0.0), own)


def gathered(positions, tol: float) -> bool:
    """All robots within ``tol`` of each other (pairwise)."""
    pts = list(positions)
    if len(pts) <= 1:
        return True
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    return (max(xs) - min(xs)) <= tol and (max(ys) - min(ys)) <= tol

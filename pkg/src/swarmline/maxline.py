"""Line-formation rules for point robots on a shared x axis.

Four variants, all working on local snapshots:

* ``oblot_compute``           -- oblivious robots, converges to an
                                 epsilon-approximation of the unit-spaced
                                 vertical line.
* ``lumi_fsync_compute``      -- robots with lights under full synchrony;
                                 reaches consecutive distances of exactly 1 in
                                 linear time while the line drifts left.
* ``lumi_fsync_stationary_compute`` -- same, plus a "final" light that freezes
                                 the line in place once two movement waves
                                 meet, and realigns robots that drifted past.
* ``lumi_ssync_compute``      -- light-counter protocol tolerating fair
                                 semi-synchronous activation; no drift.

Every rule moves at most distance sqrt(2) per round, keeps the visibility
graph connected, and treats ties deterministically (snapshot entries keep a
fixed order).

The common movement vocabulary of the luminous rules, in local coordinates
with the reference neighbor at vertical offset y_c:

* pin:      land at distance exactly 1 from the neighbor, staying on the
            current side of it (gap becomes exactly 1);
* meeting:  both partners of an adjacent movement pair step to distance 1/2
            from the pair's midpoint (their gap becomes exactly 1 when
            simultaneous; a staggered partner finishes with a pin).
"""

from __future__ import annotations

from dataclasses import dataclass

from .geometry import TAU_GEO, Point2
from .world import Lights, LocalSnapshot, Move, SnapshotEntry


def _pin_target(y_c: float) -> float:
    """Vertical target at distance exactly 1 from a neighbor at y_c, on the
    observer's current side of it."""
    return y_c - 1.0 if y_c > 0 else y_c + 1.0


def _meeting_target(y_c: float) -> float:
    """Vertical target at distance 1/2 from the midpoint between observer and
    a meeting partner at y_c, away from the partner."""
    return 0.5 * y_c - 0.5 if y_c > 0 else 0.5 * y_c + 0.5


# ---------------------------------------------------------------------------
# oblivious variant
# ---------------------------------------------------------------------------

def oblot_compute(snap: LocalSnapshot) -> Move:
    """One look-compute-move step of the oblivious line former.

    Phase 1 (some neighbor strictly left, none strictly right): hop onto the
    leftmost visible column, dodging upward by a third of the smallest
    positive column gap if the landing point is taken.

    Phase 2 (all neighbors on the own column): move to the midpoint of the
    closest robots above and below; endpoints use a virtual neighbor one unit
    beyond themselves, which stretches the line outward.
    """
    own = snap.entries[0].lights
    if snap.rightmost_not_leftmost():
        target = Point2(snap.x_l, 0.0)
        if snap.occupied(target):
            target = Point2(snap.x_l, LocalSnapshot.y_min_of(snap.column_set()) / 3.0)
        return Move(target, own)
    if snap.collinear():
        above = snap.closest_above()
        below = snap.closest_below()
        if above is None and below is None:
            return Move(Point2(0.0, 0.0), own)
        y_above = above.rel.y if above is not None else 1.0
        y_below = below.rel.y if below is not None else -1.0
        return Move(Point2(0.0, 0.5 * (y_above + y_below)), own)
    return Move(Point2(0.0, 0.0), own)


# ---------------------------------------------------------------------------
# luminous, fully synchronous
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Vertical:
    """Vertical component + light transitions of one collinear-phase step."""

    y: float
    mov: bool
    prev: bool
    met: bool  # True iff this step executed a meeting move


def _lumi_vertical(sub: LocalSnapshot, own: Lights) -> _Vertical:
    """Collinear-phase core of the synchronous luminous rule, evaluated on a
    (sub-)snapshot whose entries all lie on the observer's column.

    Endpoints launch movement waves unconditionally every third round (own
    counter = 2); a robot holding ``mov`` pins its gap toward the neighbor
    that has not moved yet (``prev`` unset) and hands the wave on; two
    adjacent holders meet in the middle. ``prev`` marks a completed movement
    and is cleared when the wave is seen passing onward. A wave that runs
    into a stale mark is consumed clearing it, and the next launch (at most
    three rounds later) passes through, so leftover marks never block the
    line for good.
    """
    above = sub.closest_above()
    below = sub.closest_below()
    if above is None and below is None:
        return _Vertical(0.0, own.mov, own.prev, False)

    if above is None or below is None:
        inward = above if below is None else below
        if own.mov:
            if inward.lights.mov:
                return _Vertical(_meeting_target(inward.rel.y), False, True, True)
            return _Vertical(_pin_target(inward.rel.y), False, True, False)
        if own.c == 2:
            # arming replaces the movement mark, keeping mov/prev exclusive
            return _Vertical(0.0, True, False, False)
        return _Vertical(0.0, own.mov, own.prev, False)

    # interior robot
    if own.mov:
        above_mov = above.lights.mov
        below_mov = below.lights.mov
        if above_mov != below_mov:
            partner = above if above_mov else below
            return _Vertical(_meeting_target(partner.rel.y), False, True, True)
        if above_mov and below_mov:
            return _Vertical(0.0, False, True, False)
        above_free = not above.lights.prev
        below_free = not below.lights.prev
        if above_free != below_free:
            ref = above if above_free else below
            return _Vertical(_pin_target(ref.rel.y), False, True, False)
        # Both neighbors marked (this wave reached the frontier left by an
        # earlier one) or both unmarked (the marks were consumed in flight):
        # the lights cannot name the side still to serve, but geometry can —
        # a neighbor that completed a movement always sits at distance
        # exactly 1, so serve the side that does not. With both sides at 1
        # the work is done; for two marked neighbors that is the collision
        # of two waves, which counts as a meeting so a central robot can
        # finish as well.
        off = [e for e in (above, below) if abs(abs(e.rel.y) - 1.0) > TAU_GEO]
        if len(off) == 1:
            return _Vertical(_pin_target(off[0].rel.y), False, True, False)
        met = not above_free and not below_free and not off
        return _Vertical(0.0, False, True, met)
    if above.lights.mov or below.lights.mov:
        if own.prev:
            return _Vertical(0.0, False, False, False)
        return _Vertical(0.0, True, False, False)
    return _Vertical(0.0, own.mov, own.prev, False)


def _phase1_spread(snap: LocalSnapshot, own: Lights, final: bool) -> Move:
    """Off-column step of the synchronous luminous rules: chase the rightmost
    visible column leftward; robots sharing a y level fan out by distinct
    fractions of a third of the smallest positive neighbor height."""
    k, m = snap.rank_at_level()
    offset = (k - 1) / m * (LocalSnapshot.y_min_of(snap.entries) / 3.0)
    lights = Lights(c=(own.c + 1) % 3, mov=False, prev=False, final=final)
    return Move(Point2(snap.x_r - 1.0, offset), lights)


def lumi_fsync_compute(snap: LocalSnapshot, own: Lights) -> Move:
    """One step of the luminous fully-synchronous line former. The whole
    formation drifts one unit left per round; the counter light advances every
    round and paces the movement waves."""
    if not snap.collinear():
        return _phase1_spread(snap, own, final=False)
    v = _lumi_vertical(snap, own)
    lights = Lights(c=(own.c + 1) % 3, mov=v.mov, prev=v.prev, final=False)
    return Move(Point2(snap.x_r - 1.0, v.y), lights)


def lumi_fsync_stationary_compute(snap: LocalSnapshot, own: Lights) -> Move:
    """Stationary refinement of the synchronous luminous rule.

    The collision of two movement waves marks the two robots involved as
    final; the final light spreads to every robot that observes it, and final
    robots stop drifting left. Because the light needs a round per hop to
    spread, robots freeze at staggered x offsets (each one unit left of the
    next); the waves keep running along the y-order of the frozen staircase,
    and a wave holder that has fallen behind climbs one unit back right per
    wave until the column is straight again.
    """
    final = own.final or any(e.lights.final for e in snap.entries)
    if not final:
        if not snap.collinear():
            return _phase1_spread(snap, own, final=False)
        v = _lumi_vertical(snap, own)
        lights = Lights(c=(own.c + 1) % 3, mov=v.mov, prev=v.prev, final=v.met)
        x = 0.0 if v.met else snap.x_r - 1.0
        return Move(Point2(x, v.y), lights)

    v = _lumi_vertical(snap, own)
    lights = Lights(c=(own.c + 1) % 3, mov=v.mov, prev=v.prev, final=True)
    x = 0.0
    if own.mov and all(e.lights.final for e in snap.entries):
        # executing a wave movement with the whole neighborhood frozen:
        # realign instead of drifting (a robot still unaware of the final
        # light could otherwise drift left in the very round we hop right)
        behind = all(e.rel.x >= -TAU_GEO for e in snap.entries)
        ahead = any(abs(e.rel.x - 1.0) <= TAU_GEO for e in snap.entries)
        if behind and ahead:
            x = 1.0
    return Move(Point2(x, v.y), lights)


# ---------------------------------------------------------------------------
# luminous, semi-synchronous
# ---------------------------------------------------------------------------

def _rel(own: Lights, other: Lights) -> int:
    return (other.c - own.c) % 3


def _quiet(own: Lights, e: SnapshotEntry) -> bool:
    return _rel(own, e.lights) == 0 and not e.lights.mov and not e.lights.prev


def _armed(own: Lights, e: SnapshotEntry) -> bool:
    return e.lights.mov and _rel(own, e.lights) == 0


def _passed(own: Lights, e: SnapshotEntry) -> bool:
    return e.lights.prev and _rel(own, e.lights) == 1


def lumi_ssync_compute(snap: LocalSnapshot, own: Lights) -> Move:
    """One step of the luminous semi-synchronous line former.

    The counter light colors consecutive movement waves mod 3, replacing the
    synchronous cadence: a robot only treats neighbors of its own color as
    wave partners, and a completed movement shows as (prev, color+1). Each
    activation performs at most one state transition, so arbitrary fair
    interleavings serialize cleanly; staggered meetings finish with a pin at
    distance exactly 1 from the partner that moved first. Robots whose
    neighbors all moved on without them resynchronize by incrementing their
    counter. The line never drifts.
    """
    if not snap.collinear():
        # off-column: the oblivious phase-1 hop; movement lights reset
        lights = Lights(c=own.c, mov=False, prev=False, final=own.final)
        if snap.rightmost_not_leftmost():
            target = Point2(snap.x_l, 0.0)
            if snap.occupied(target):
                target = Point2(snap.x_l,
                                LocalSnapshot.y_min_of(snap.column_set()) / 3.0)
            return Move(target, lights)
        return Move(Point2(0.0, 0.0), lights)

    above = snap.closest_above()
    below = snap.closest_below()
    stay = Point2(0.0, 0.0)
    if above is None and below is None:
        return Move(stay, own)

    def bump(prev: bool = False) -> Lights:
        return Lights(c=(own.c + 1) % 3, mov=False, prev=prev, final=own.final)

    if above is None or below is None:
        inward = above if below is None else below
        y_c = inward.rel.y
        if own.mov:
            if _armed(own, inward):
                return Move(Point2(0.0, _meeting_target(y_c)), bump(prev=True))
            if _passed(own, inward):
                return Move(Point2(0.0, _pin_target(y_c)), bump(prev=True))
            if _quiet(own, inward):
                return Move(Point2(0.0, _pin_target(y_c)), bump(prev=True))
            return Move(stay, bump())  # out-of-protocol view: resynchronize
        if own.prev:
            rel = _rel(own, inward.lights)
            if rel == 0:
                # neighbor's counter reached ours: the hand-over completed
                return Move(stay, Lights(c=own.c, final=own.final))
            if rel == 1 and not inward.lights.mov:
                return Move(stay, bump())  # neighbor moved past: catch up
            # rel == 2 means the neighbor has not acted on the mark yet
            return Move(stay, own)
        if _quiet(own, inward):
            return Move(stay, Lights(c=own.c, mov=True, final=own.final))
        if _rel(own, inward.lights) == 1 and not inward.lights.mov:
            return Move(stay, bump())
        return Move(stay, own)

    # interior robot
    sides = (above, below)
    if own.mov:
        passed = [e for e in sides if _passed(own, e)]
        if len(passed) == 2:
            # Either an absorbed center (both sides pinned this robot's gaps
            # to exactly 1 already) or a staggered meeting where the partner
            # moved first. A completed giver always sits at distance exactly
            # 1, so the side that does not is the meeting partner to finish
            # against.
            off = [e for e in sides if abs(abs(e.rel.y) - 1.0) > TAU_GEO]
            if len(off) == 1:
                return Move(Point2(0.0, _pin_target(off[0].rel.y)), bump(prev=True))
            return Move(stay, bump(prev=True))
        if len(passed) == 1:
            away = below if passed[0] is above else above
            if _armed(own, away):
                return Move(Point2(0.0, _meeting_target(away.rel.y)), bump(prev=True))
            if _quiet(own, away):
                return Move(Point2(0.0, _pin_target(away.rel.y)), bump(prev=True))
            return Move(stay, bump())
        return Move(stay, bump())
    rel_a = _rel(own, above.lights)
    rel_b = _rel(own, below.lights)
    # Counter-ladder resync: only ever bump to CATCH UP with a neighbor that
    # is strictly one color ahead. A neighbor one color behind (rel 2) has
    # simply not acted on this robot's state yet, so bumping past it would
    # race the hand-over it is about to perform.
    lagging = (rel_a == 1 or rel_b == 1) and rel_a != 0 and rel_b != 0
    if own.prev:
        if (rel_a == 0 and rel_b in (0, 1)) or (rel_b == 0 and rel_a in (0, 1)):
            return Move(stay, Lights(c=own.c, final=own.final))
        if lagging and not above.lights.mov and not below.lights.mov:
            return Move(stay, bump())
        return Move(stay, own)
    passed = [e for e in sides if _passed(own, e)]
    if len(passed) == 1:
        other = below if passed[0] is above else above
        if _quiet(own, other) or _armed(own, other):
            return Move(stay, Lights(c=own.c, mov=True, final=own.final))
    if lagging and not above.lights.mov and not below.lights.mov:
        return Move(stay, bump())
    return Move(stay, own)

from __future__ import annotations

import pytest

from swarmline.geometry import Point2, RangeModel
from swarmline.maxline import (
    _meeting_target,
    _pin_target,
    lumi_fsync_compute,
    lumi_fsync_stationary_compute,
    lumi_ssync_compute,
)
from swarmline.runner import RunConfig, SourceSpec, simulate
from swarmline.world import (
    GlobalConfiguration,
    Lights,
    RobotState,
    config_to_dict,
    take_snapshot,
)


def test_movement_targets():
    assert _pin_target(0.6) == pytest.approx(-0.4)
    assert _pin_target(-0.6) == pytest.approx(0.4)
    assert _meeting_target(0.6) == pytest.approx(-0.2)
    assert _meeting_target(-0.6) == pytest.approx(0.2)
    # a gap of exactly 1 is a fixed point of both moves
    assert _pin_target(1.0) == pytest.approx(0.0)
    assert _meeting_target(-1.0) == pytest.approx(0.0)


def _pair(own: Lights, other: Lights, gap: float = 1.0):
    """Snapshot of a bottom endpoint at (0,0) with one robot ``gap`` above."""
    cfg = GlobalConfiguration(robots=(
        RobotState(id=0, pos=Point2(0.0, 0.0), lights=own),
        RobotState(id=1, pos=Point2(0.0, gap), lights=other),
    ))
    return take_snapshot(cfg, 0)


# -- fully synchronous ------------------------------------------------------

def test_fsync_endpoint_arms_on_counter_two():
    snap = _pair(Lights(c=2), Lights(c=2), gap=0.4)
    mv = lumi_fsync_compute(snap, Lights(c=2))
    assert mv.lights.mov and not mv.lights.prev
    assert mv.lights.c == 0
    # the whole line drifts left one unit per round
    assert mv.target == Point2(-1.0, 0.0)


def test_fsync_armed_endpoint_pins_inward_gap():
    snap = _pair(Lights(c=0, mov=True), Lights(c=0), gap=0.4)
    mv = lumi_fsync_compute(snap, Lights(c=0, mov=True))
    assert mv.target.y == pytest.approx(-0.6)   # neighbor gap becomes exactly 1
    assert mv.lights.prev and not mv.lights.mov


def test_fsync_two_armed_robots_meet():
    snap = _pair(Lights(c=0, mov=True), Lights(c=0, mov=True), gap=0.4)
    mv = lumi_fsync_compute(snap, Lights(c=0, mov=True))
    assert mv.target.y == pytest.approx(-0.3)   # half a unit from the midpoint
    assert mv.lights.prev


def test_fsync_interior_frontier_served_by_geometry():
    # both neighbors carry stale marks; the side not yet at distance 1 is the
    # one still owed a movement
    cfg = GlobalConfiguration(robots=(
        RobotState(id=0, pos=Point2(0.0, -1.0), lights=Lights(c=0, prev=True)),
        RobotState(id=1, pos=Point2(0.0, 0.0), lights=Lights(c=0, mov=True)),
        RobotState(id=2, pos=Point2(0.0, 0.7), lights=Lights(c=0, prev=True)),
    ))
    mv = lumi_fsync_compute(take_snapshot(cfg, 1), Lights(c=0, mov=True))
    assert mv.target.y == pytest.approx(-0.3)   # pin the 0.7 gap up to 1
    assert mv.lights.prev


def test_fsync_pair_example():
    start = GlobalConfiguration(robots=(
        RobotState(id=0, pos=Point2(0.0, 0.0)),
        RobotState(id=1, pos=Point2(0.4, 0.3)),
    ))
    cfg = RunConfig(algorithm="maxline-lumi-fsync", scheduler="fsync",
                    chirality="plus",
                    source=SourceSpec(kind="inline",
                                      inline=config_to_dict(start)))
    res = simulate(cfg)
    assert res.converged
    ys = sorted(r.pos.y for r in res.final.robots)
    assert ys[1] - ys[0] == pytest.approx(1.0, abs=1e-9)
    xs = {r.pos.x for r in res.final.robots}
    assert len(xs) == 1


def test_fsync_column_run_frozen():
    start = GlobalConfiguration(robots=tuple(
        RobotState(id=i, pos=Point2(0.0, y))
        for i, y in enumerate([0.0, 0.4, 1.1, 1.4])))
    cfg = RunConfig(algorithm="maxline-lumi-fsync", scheduler="fsync",
                    chirality="as-is",
                    source=SourceSpec(kind="inline",
                                      inline=config_to_dict(start)))
    res = simulate(cfg)
    assert res.converged and res.rounds == 7
    assert res.light_states <= 9
    ys = sorted(r.pos.y for r in res.final.robots)
    assert ys == pytest.approx([-0.75, 0.25, 1.25, 2.25])
    assert all(r.pos.x == pytest.approx(-7.0) for r in res.final.robots)


# -- stationary refinement --------------------------------------------------

def test_stationary_wave_collision_turns_final():
    snap = _pair(Lights(c=0, mov=True), Lights(c=0, mov=True), gap=0.4)
    mv = lumi_fsync_stationary_compute(snap, Lights(c=0, mov=True))
    assert mv.lights.final
    assert mv.target.x == 0.0                    # freezes instead of drifting


def test_stationary_final_spreads_and_stops_drift():
    snap = _pair(Lights(c=0), Lights(c=0, final=True), gap=1.0)
    mv = lumi_fsync_stationary_compute(snap, Lights(c=0))
    assert mv.lights.final
    assert mv.target.x == 0.0


def test_stationary_realigns_wave_holder():
    own = Lights(c=0, mov=True, final=True)
    cfg = GlobalConfiguration(robots=(
        RobotState(id=0, pos=Point2(0.0, 0.0), lights=own),
        RobotState(id=1, pos=Point2(1.0, 0.9), lights=Lights(c=0, final=True)),
    ))
    mv = lumi_fsync_stationary_compute(take_snapshot(cfg, 0), own)
    assert mv.target.x == pytest.approx(1.0)     # hops back onto the column
    assert mv.target.y == pytest.approx(-0.1)    # while serving the wave
    # ... but not when someone is still further left
    cfg2 = GlobalConfiguration(robots=(*cfg.robots,
        RobotState(id=2, pos=Point2(-1.0, -0.9), lights=Lights(c=0, final=True))))
    mv2 = lumi_fsync_stationary_compute(take_snapshot(cfg2, 0), own)
    assert mv2.target.x == 0.0


def test_stationary_run_all_final():
    cfg = RunConfig(algorithm="maxline-lumi-fsync-stationary",
                    scheduler="fsync", n=6, seed=2)
    res = simulate(cfg)
    assert res.converged and res.rounds == 10
    assert all(r.lights.final for r in res.final.robots)


# -- semi-synchronous -------------------------------------------------------

def test_ssync_giver_holds_until_takeover():
    # completed giver (prev, counter 1) next to a neighbor whose counter is
    # one *behind*: that neighbor has not consumed the mark yet, so the giver
    # must keep it
    own = Lights(c=1, prev=True)
    mv = lumi_ssync_compute(_pair(own, Lights(c=0)), own)
    assert mv.lights == own
    assert mv.target == Point2(0.0, 0.0)


def test_ssync_giver_drops_when_neighbor_catches_up():
    own = Lights(c=1, prev=True)
    mv = lumi_ssync_compute(_pair(own, Lights(c=1)), own)
    assert mv.lights == Lights(c=1)              # mark dropped, counter kept


def test_ssync_giver_catches_up_when_left_behind():
    own = Lights(c=1, prev=True)
    mv = lumi_ssync_compute(_pair(own, Lights(c=2)), own)
    assert mv.lights == Lights(c=2)              # bump, mark dropped
    # ... unless that neighbor is itself mid-movement
    held = lumi_ssync_compute(_pair(own, Lights(c=2, mov=True)), own)
    assert held.lights == own


def test_ssync_quiet_endpoint_arms():
    own = Lights(c=0)
    mv = lumi_ssync_compute(_pair(own, Lights(c=0)), own)
    assert mv.lights == Lights(c=0, mov=True)
    assert mv.target == Point2(0.0, 0.0)         # arming round does not move


def test_ssync_armed_endpoint_pins_quiet_neighbor():
    own = Lights(c=0, mov=True)
    mv = lumi_ssync_compute(_pair(own, Lights(c=0), gap=0.6), own)
    assert mv.target.y == pytest.approx(-0.4)
    assert mv.lights == Lights(c=1, prev=True)


def test_ssync_staggered_meeting_finishes_with_pin():
    # partner already moved (prev, counter ahead): finish at distance 1
    own = Lights(c=0, mov=True)
    mv = lumi_ssync_compute(_pair(own, Lights(c=1, prev=True), gap=0.7), own)
    assert mv.target.y == pytest.approx(-0.3)
    assert mv.lights == Lights(c=1, prev=True)


def test_ssync_interior_receiver_arms_after_pass():
    own = Lights(c=0)
    cfg = GlobalConfiguration(robots=(
        RobotState(id=0, pos=Point2(0.0, -0.6), lights=Lights(c=0)),
        RobotState(id=1, pos=Point2(0.0, 0.0), lights=own),
        RobotState(id=2, pos=Point2(0.0, 1.0), lights=Lights(c=1, prev=True)),
    ))
    mv = lumi_ssync_compute(take_snapshot(cfg, 1), own)
    assert mv.lights == Lights(c=0, mov=True)


def test_ssync_interior_holder_pins_away_side():
    own = Lights(c=0, mov=True)
    cfg = GlobalConfiguration(robots=(
        RobotState(id=0, pos=Point2(0.0, -0.6), lights=Lights(c=0)),
        RobotState(id=1, pos=Point2(0.0, 0.0), lights=own),
        RobotState(id=2, pos=Point2(0.0, 1.0), lights=Lights(c=1, prev=True)),
    ))
    mv = lumi_ssync_compute(take_snapshot(cfg, 1), own)
    assert mv.target.y == pytest.approx(0.4)     # lands 1 above the quiet side
    assert mv.lights == Lights(c=1, prev=True)


@pytest.mark.parametrize("n", [4, 6, 9])
def test_ssync_protocol_survives_full_synchrony(n):
    # fair SSYNC includes the all-active schedule; the hand-over logic must
    # not race itself when every robot acts every round
    cfg = RunConfig(algorithm="maxline-lumi-ssync", scheduler="fsync",
                    n=n, seed=1)
    res = simulate(cfg)
    assert res.converged, res.reason
    ys = sorted(r.pos.y for r in res.final.robots)
    for a, b in zip(ys, ys[1:]):
        assert b - a == pytest.approx(1.0, abs=1e-9)

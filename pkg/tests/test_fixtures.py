from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from swarmline.fixtures import (
    alpha_column_ends,
    diagonal_span_config,
    make_fixture,
    random_connected,
    stuck_check,
    vertical_line,
)
from swarmline.geometry import Point2, RangeModel, diameter_stats, is_connected
from swarmline.world import take_snapshot


def test_c1_shape():
    cfg = make_fixture("C1", c=2.0)
    assert cfg.n == 3
    assert cfg.positions() == [Point2(0, 0), Point2(1.0, 0.6), Point2(2.0, 0)]
    assert cfg.range_model == RangeModel("square", 2.0)
    assert cfg.connected()


def test_c2_shape_and_corner_views():
    cfg = make_fixture("C2")
    assert cfg.n == 7
    assert cfg.range_model.kind == "circular"
    assert cfg.connected()
    # each column corner sees exactly one robot: the column middle at
    # vertical distance exactly the radius
    for rid, expect_dy in [(0, -1.0), (2, 1.0), (4, -1.0), (6, 1.0)]:
        snap = take_snapshot(cfg, rid)
        others = snap.entries[1:]
        assert len(others) == 1
        assert others[0].rel.coincides(Point2(0.0, expect_dy))
    # the bridge robot sees both column middles and nothing else
    bridge = take_snapshot(cfg, 3)
    rels = sorted((e.rel.x, e.rel.y) for e in bridge.entries[1:])
    assert rels == [(-1.0, 0.0), (1.0, 0.0)]


def test_c2_circular_interior_is_stuck_square_is_not():
    cfg = make_fixture("C2")
    circ = stuck_check(cfg, cfg.range_model)
    assert circ.stuck_ids == [1, 3, 5]
    assert not circ.is_stuck(0)
    # the same shape under a square range frees the column middles: the
    # corners stay adjacent while the middle slides sideways
    sq = stuck_check(cfg, RangeModel("square", 1.0))
    rightward = {round(p.x, 10) for p in sq.escapes[1] if p.y == 0.0 and p.x > 0}
    assert {round(0.1 * k, 10) for k in range(1, 11)} <= rightward
    leftward = {round(-p.x, 10) for p in sq.escapes[5] if p.y == 0.0 and p.x < 0}
    assert rightward == leftward


def test_alpha_fixture_all_but_column_ends_stuck():
    cfg = make_fixture("alpha", alpha=2.0)
    assert cfg.n == 12
    assert cfg.connected()
    ends = alpha_column_ends(2.0)
    assert ends == (0, 4, 5, 9)
    rep = stuck_check(cfg, cfg.range_model)
    assert rep.stuck_ids == sorted(set(range(12)) - set(ends))
    assert all(not rep.is_stuck(e) for e in ends)


def test_fixture_validation():
    with pytest.raises(ValueError):
        make_fixture("C1", c=0.0)
    with pytest.raises(ValueError):
        make_fixture("alpha", alpha=1.0)
    with pytest.raises(ValueError):
        make_fixture("C9")


def test_stuck_check_validation():
    cfg = make_fixture("C2")
    with pytest.raises(ValueError):
        stuck_check(cfg, cfg.range_model, probe_grid=1)
    with pytest.raises(ValueError):
        stuck_check(cfg, cfg.range_model, path_samples=0)
    apart = vertical_line(2, c=3.0)
    with pytest.raises(ValueError):
        stuck_check(apart, RangeModel("square", 1.0))


def test_stuck_probe_rejects_motions_that_break_connectivity_mid_flight():
    # the C2 bridge can *land* between the right column's corners (both at
    # distance exactly 1 from there), but the straight motion to that point
    # leaves everyone's range on the way
    cfg = make_fixture("C2")
    trial = [p for p in cfg.positions()]
    trial[3] = Point2(0.0, 1.0)
    assert is_connected(trial, cfg.range_model)
    endpoint_only = stuck_check(cfg, cfg.range_model, path_samples=1)
    assert not endpoint_only.is_stuck(3)
    assert Point2(0.0, 1.0) in endpoint_only.escapes[3]
    assert stuck_check(cfg, cfg.range_model).is_stuck(3)


def test_vertical_line():
    cfg = vertical_line(4, c=0.5, x=2.0)
    assert cfg.positions() == [Point2(2.0, 0.0), Point2(2.0, 0.5),
                               Point2(2.0, 1.0), Point2(2.0, 1.5)]
    assert cfg.range_model.radius == 0.5
    assert cfg.connected()


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=1, max_value=25),
       st.integers(min_value=0, max_value=10 ** 6),
       st.sampled_from(["square", "circular"]))
def test_random_connected_is_connected_and_separated(n, seed, kind) -> None:
    model = RangeModel(kind, 1.0)
    cfg = random_connected(n, model, seed)
    assert cfg.n == n
    assert is_connected(cfg.positions(), model)
    pts = cfg.positions()
    for i in range(n):
        for j in range(i + 1, n):
            assert pts[i].euclidean(pts[j]) >= 1e-3
    assert random_connected(n, model, seed) == cfg   # same seed, same cluster


@pytest.mark.parametrize("delta", [4.0, 8.0, 16.0])
def test_diagonal_span_has_exact_diameter(delta):
    cfg = diagonal_span_config(24, seed=1, delta=delta)
    d, _, _ = diameter_stats(cfg.positions())
    assert d == pytest.approx(delta, abs=1e-9)
    assert cfg.connected()


def test_diagonal_span_rejects_impossible_spread():
    with pytest.raises(ValueError):
        diagonal_span_config(3, seed=0, delta=16.0)

import math

import pytest

from hypercop.capture import (
    BisectorCapture,
    FiveCopCatch,
    angular_order,
    bisector_annotation,
    bisector_target,
    enclosed,
    parallel_angle,
    wedge,
)
from hypercop.config import GameConfig
from hypercop.evaders import RandomWalk
from hypercop.exceptions import BadParameters, NotEnclosed
from hypercop.game import run
from hypercop.geometry import ORIGIN, Point, bisector, dist, geodesic_through, move_toward, perpendicular, point_in_direction
from hypercop.policy import StayRobber


def ring(n, radius, center=ORIGIN, phase=0.0):
    return [point_in_direction(center, phase + 2 * math.pi * i / n, radius) for i in range(n)]


def test_parallel_angle():
    assert parallel_angle(0.0) == pytest.approx(math.pi / 2)
    assert parallel_angle(1.0) < parallel_angle(0.5)
    assert math.tan(parallel_angle(2.0) / 2) == pytest.approx(math.exp(-2.0))


def test_angular_order():
    cops = [point_in_direction(ORIGIN, a, 1.0) for a in (2.0, -1.0, 0.5)]
    assert angular_order(ORIGIN, cops) == [1, 2, 0]


def test_enclosed():
    assert enclosed(ORIGIN, ring(3, 1.0))
    assert enclosed(ORIGIN, ring(4, 1.0))
    # far cops leave gaps between their bisectors
    assert not enclosed(ORIGIN, ring(3, 4.0))
    assert not enclosed(ORIGIN, ring(1, 0.5))
    assert not enclosed(ORIGIN, [])
    # a cop on the robber encloses trivially
    assert enclosed(ORIGIN, [ORIGIN])


def test_wedge():
    b1 = geodesic_through(ORIGIN, Point(0.0, 0.5))
    b2 = geodesic_through(ORIGIN, Point(0.5, 0.0))
    corner, alpha = wedge(b1, b2)
    assert dist(corner, ORIGIN) < 1e-9
    assert alpha == pytest.approx(math.pi / 2)

    axis = geodesic_through(ORIGIN, Point(0.5, 0.0))
    left = perpendicular(axis, Point(-0.5, 0.0))
    right = perpendicular(axis, Point(0.5, 0.0))
    assert wedge(left, right) is None


def test_bisector_target_closes_in():
    cop = point_in_direction(ORIGIN, 0.0, 1.0)
    target = bisector_target(cop, ORIGIN, ORIGIN, 0.1)
    assert dist(cop, target) == pytest.approx(0.1)
    assert dist(target, ORIGIN) == pytest.approx(0.9)


def test_bisector_target_mirrors_step():
    cop = point_in_direction(ORIGIN, 0.0, 1.0)
    robber = point_in_direction(ORIGIN, math.pi / 2, 0.1)
    target = bisector_target(cop, ORIGIN, robber, 0.1)
    assert dist(cop, target) <= 0.1 + 1e-12
    # the robber stays on its side of the new bisector
    assert dist(robber, target) >= dist(robber, ORIGIN)


def test_bisector_annotation_regular_triangle():
    cops = ring(3, 1.0)
    initial = [bisector(c, ORIGIN) for c in cops]
    note = bisector_annotation(ORIGIN, cops, [0, 1, 2], initial)
    assert note["kind"] == "bisector"
    assert len(note["pairs"]) == 3
    for beta in note["betas"]:
        assert beta == pytest.approx(2 * math.pi / 3)
    for alpha, low in zip(note["alphas"], note["beta_lower"]):
        assert alpha < math.pi / 3
        assert low is not None
    assert note["in_polygon"]
    assert note["midpoint_error"] < 1e-9

    assert bisector_annotation(ORIGIN, [ORIGIN, *cops[1:]], [0, 1, 2], initial) is None


def test_bisector_annotation_square_has_no_lower_bound():
    cops = ring(4, 1.0)
    note = bisector_annotation(ORIGIN, cops, [0, 1, 2, 3], [])
    assert note["beta_lower"] == [None] * 4


def test_bisector_capture_parameters(plane):
    with pytest.raises(BadParameters):
        BisectorCapture(n=2)
    with pytest.raises(NotEnclosed):
        run(plane, StayRobber(cop_distance=4.0), [BisectorCapture(n=3)], stop=GameConfig(max_rounds=5))


def test_bisector_capture_static_robber(plane):
    trace = run(plane, StayRobber(tau=0.1, cop_distance=1.0), [BisectorCapture(n=4)], stop=GameConfig(max_rounds=50))
    assert trace.capture
    assert trace.capture_round == 10


def test_bisector_polygon_holds_robber(plane):
    trace = run(
        plane,
        RandomWalk(tau=0.05, cop_distance=1.0),
        [BisectorCapture(n=4)],
        stop=GameConfig(max_rounds=100),
        seed=9,
    )
    notes = trace.annotations_of("bisector")
    assert notes
    assert all(note["in_polygon"] for note in notes)
    assert max(note["midpoint_error"] for note in notes) < 1e-7


def test_five_cop_catch_needs_orientable_surface(plane, n3):
    for arena in (plane, n3):
        with pytest.raises(BadParameters, match="S\\(g\\)"):
            run(arena, StayRobber(), [FiveCopCatch()], stop=GameConfig(max_rounds=1))


def test_five_cop_catch_on_s2(s2):
    robber = move_toward(ORIGIN, s2.polygon.edge_midpoint(1), 0.5)
    trace = run(
        s2,
        StayRobber(tau=0.1),
        [FiveCopCatch()],
        initial=(robber, [ORIGIN] * 5),
        stop=GameConfig(max_rounds=300),
    )
    assert trace.capture
    assert trace.capture_round <= 300

    stages = [note["stage"] for note in trace.annotations_of("five-cop")]
    assert stages[0] == "guard"
    assert {"localize", "split", "enclose"} <= set(stages)
    split = next(note for note in trace.annotations_of("five-cop") if note["stage"] == "split")
    assert split["block"] == 0
    assert sorted(split["paths"].values()) == [1, 2, 3, 4, 5]


def test_five_cop_catch_locates_robber(s2):
    policy = FiveCopCatch()
    robber = move_toward(ORIGIN, s2.polygon.edge_midpoint(3), 0.5)
    trace = run(s2, StayRobber(tau=0.1), [policy], initial=(robber, [ORIGIN] * 5), stop=GameConfig(max_rounds=1))
    assert trace.rounds == 1
    assert policy.stage == "guard"
    assert policy.paths == {0: 1, 1: 5}

import math

import pytest

from hypercop.config import ControllerConfig, GameConfig
from hypercop.controller import CHART_REACH, PursuitPhase, TwoCopController, worst_end_distance
from hypercop.evaders import GreedyFlee, RandomWalk, TowardB
from hypercop.exceptions import BadParameters, NumericalDomain
from hypercop.game import Game, run
from hypercop.geometry import (
    ORIGIN,
    Isometry,
    angle,
    dist,
    geodesic_through,
    param_on,
    point_at,
    signed_distance,
    translation_along,
)
from hypercop.lemmas import verify
from hypercop.policy import StayRobber

ROUNDS = 250


@pytest.fixture(scope="module")
def controller_trace(s2):
    return run(s2, RandomWalk(tau=0.2), [TwoCopController(eps=0.1)], stop=GameConfig(max_rounds=ROUNDS), seed=11)


def test_controller_parameters():
    with pytest.raises(BadParameters):
        TwoCopController(eps=0.0)

    policy = TwoCopController(config={"phase_multiplier": 16.0})
    assert policy.phase_multiplier == 16.0
    assert policy.config.anchor_multiplier == 3.0
    assert TwoCopController(config=ControllerConfig.conservative()).phase_multiplier == 32.0


def test_controller_sets_phase_window(s2):
    game = Game(s2, RandomWalk(tau=0.2), [TwoCopController()])
    assert game.phase_multiplier == 8.0
    assert game.schedule is not None


def test_controller_needs_compact_surface(plane):
    with pytest.raises(BadParameters, match="compact"):
        run(plane, StayRobber(), [TwoCopController()], stop=GameConfig(max_rounds=1))


def test_worst_end_distance():
    assert worst_end_distance(2.0, 1.0, 1.0) == pytest.approx(0.0)
    w, x, y = math.cosh(3.0), 1.0, 2.5
    assert worst_end_distance(w, x, y) == pytest.approx(math.acosh(w * math.cosh(y)) - math.acosh(w * math.cosh(x)))
    # never more than the change in the leg
    assert 0.0 < worst_end_distance(w, x, y) < y - x


def test_phase_annotations(controller_trace):
    phases = controller_trace.annotations_of("phase")
    assert controller_trace.phases >= 2
    assert len(phases) == controller_trace.phases
    assert [note["phase"] for note in phases] == list(range(len(phases)))

    for note in phases:
        D, a = note["D"], note["anchor_multiplier"]
        assert note["d_HB"] == pytest.approx(note["guard_multiplier"] * D)
        assert note["d_HB_prime"] == pytest.approx(note["guard_multiplier"] * D)
        assert note["angle_H"] == pytest.approx(math.pi / 2, abs=1e-6)
        assert note["d_anchor_H"] <= D + 1e-9
        assert (a - 1.0) * D - 1e-9 <= note["d_RH"] <= (a + 1.0) * D + 1e-9


def test_phase_end_annotations(controller_trace):
    ends = controller_trace.annotations_of("phase-end")
    assert len(ends) == controller_trace.phases - 1
    for note in ends:
        assert note["end_dist"] >= 0.0
        assert note["crossing_round"] is None or note["crossing_round"] > 0


def test_phase_start_events(controller_trace):
    starts = [r for r in controller_trace.records_of("robber") if "phase-start" in r.events]
    assert len(starts) == controller_trace.phases


def test_condition_annotations(controller_trace):
    notes = controller_trace.annotations_of("condition-2")
    assert notes
    assert {note["rule"] for note in notes} <= {"a", "b", "direct"}
    assert all({"holds", "mirrored", "margin", "phase"} <= set(note) for note in notes)


def test_condition_annotations_off(s2):
    trace = run(
        s2,
        RandomWalk(tau=0.2),
        [TwoCopController(condition_annotations=False)],
        stop=GameConfig(max_rounds=20),
        seed=11,
    )
    assert not trace.annotations_of("condition-2")
    assert len(trace.annotations_of("phase")) == 1


def test_controller_deterministic(s2):
    first = run(s2, RandomWalk(tau=0.2), [TwoCopController()], stop=GameConfig(max_rounds=40), seed=4)
    second = run(s2, RandomWalk(tau=0.2), [TwoCopController()], stop=GameConfig(max_rounds=40), seed=4)
    assert [r.to_dict() for r in first.records] == [r.to_dict() for r in second.records]


@pytest.mark.slow
def test_controller_gets_eps_close(s2):
    trace = run(
        s2,
        RandomWalk(tau=0.2),
        [TwoCopController(eps=0.1)],
        stop=GameConfig(eps=0.1, stop_on_eps=True, max_rounds=5000),
        seed=1,
    )
    assert trace.eps_close_round is not None


def test_conservative_preset_rejected(s2):
    config = ControllerConfig.conservative()
    assert (config.anchor_multiplier + config.guard_multiplier) * s2.diameter_bound > CHART_REACH
    with pytest.raises(BadParameters, match="float64"):
        run(s2, RandomWalk(tau=0.05), [TwoCopController(config=config)], stop=GameConfig(max_rounds=5))


@pytest.fixture
def open_phase(s2):
    policy = TwoCopController(eps=0.01)
    run(s2, RandomWalk(tau=0.2), [policy], stop=GameConfig(max_rounds=5), seed=11)
    assert policy.phase is not None
    return policy


def test_recenter_mid_phase(open_phase):
    old = open_phase.phase
    m = translation_along(geodesic_through(old.H, ORIGIN), 6.0)
    open_phase.recenter(m)
    new = open_phase.phase

    assert not new.released
    assert new.side == old.side
    assert dist(new.H, m(old.H)) < 1e-9
    assert dist(new.anchor, m(old.anchor)) < 1e-9
    assert signed_distance(new.g0, new.H) == pytest.approx(0.0, abs=1e-7)
    for p in (new.H, new.b_left, new.b_right):
        assert signed_distance(new.h, p) == pytest.approx(0.0, abs=1e-7)
    assert dist(new.H, new.b_left) == pytest.approx(dist(old.H, old.b_left))
    assert dist(new.anchor, new.H) == pytest.approx(dist(old.anchor, old.H))
    along = point_at(new.g0, param_on(new.g0, new.H) + 1.0)
    assert angle(new.H, along, new.b_left) == pytest.approx(math.pi / 2, abs=1e-6)
    # the orientation of both geodesics is kept
    assert math.copysign(1.0, signed_distance(new.g0, new.anchor)) == math.copysign(
        1.0, signed_distance(old.g0, old.anchor)
    )
    assert param_on(new.h, new.b_left) > param_on(new.h, new.b_right)


def test_phase_released_when_geometry_leaves_chart(open_phase, monkeypatch):
    def lost(self, m):
        raise NumericalDomain("Arc parameter beyond double precision")

    monkeypatch.setattr(PursuitPhase, "transformed", lost)
    open_phase.recenter(Isometry.identity())
    assert open_phase.phase.released
    assert open_phase.stage == "follow"


@pytest.mark.slow
@pytest.mark.parametrize("robber", [RandomWalk, GreedyFlee, TowardB], ids=["random_walk", "greedy_flee", "toward_b"])
def test_controller_beats_adversaries(s2, robber):
    trace = run(
        s2,
        robber(tau=0.05),
        [TwoCopController(eps=0.1)],
        stop=GameConfig(eps=0.1, stop_on_eps=True, max_rounds=10_000),
        seed=3,
    )
    assert trace.eps_close_round is not None
    assert verify("P15", trace=trace).passed

    starts = {note["phase"]: note for note in trace.annotations_of("phase")}
    for end in trace.annotations_of("phase-end"):
        start = starts[end["phase"]]
        if end["crossing_round"] is None and not end["released"]:
            assert end["end_dist"] <= start["worst_end"] + 1e-6
            assert start["worst_end"] < start["start_dist"]

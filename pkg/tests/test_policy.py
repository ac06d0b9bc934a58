import math

import pytest

from hypercop.config import ControllerConfig, PolicySpec
from hypercop.controller import TwoCopController
from hypercop.exceptions import ConfigInvalid
from hypercop.game import Game
from hypercop.geometry import ORIGIN, dist, point_in_direction
from hypercop.policy import (
    CopPolicy,
    GreedyPursuit,
    PolicyRegistry,
    RobberPolicy,
    StayCop,
    StayRobber,
    build_policy,
    cop_lifts_near,
    robber_lift_near,
    step_toward,
)


def test_registry_names():
    assert {"stay", "random_walk", "greedy_flee", "toward_b", "flee_one_cop", "flee_two_cops"} <= set(
        PolicyRegistry.names("robber"),
    )
    assert {
        "stay",
        "greedy_pursuit",
        "guard_segment",
        "ball_guard",
        "two_cop_controller",
        "bisector_capture",
        "five_cop_catch",
    } <= set(PolicyRegistry.names("cop"))
    assert PolicyRegistry.get("cop", "stay") is StayCop
    assert PolicyRegistry.get("robber", "stay") is StayRobber
    assert PolicyRegistry.get("cop", "missing") is None


def test_register_requires_name():
    class Nameless(CopPolicy):
        pass

    with pytest.raises(TypeError):
        PolicyRegistry.register(Nameless)


def test_build_policy_params():
    robber = build_policy("robber", {"policy": "stay", "tau": 0.3, "cop_distance": 2.0})
    assert isinstance(robber, StayRobber)
    assert robber.tau == 0.3
    assert robber.cop_distance == 2.0

    cops = build_policy("cop", PolicySpec(policy="greedy_pursuit", n=3))
    assert isinstance(cops, GreedyPursuit)
    assert cops.n_cops == 3


def test_build_policy_passes_controller_config():
    config = ControllerConfig.conservative()
    policy = build_policy("cop", {"policy": "two_cop_controller"}, config)
    assert isinstance(policy, TwoCopController)
    assert policy.phase_multiplier == 32.0


def test_build_policy_errors():
    with pytest.raises(ConfigInvalid, match="Unknown cop policy"):
        build_policy("cop", {"policy": "teleport"})
    with pytest.raises(ConfigInvalid, match="stay"):
        build_policy("robber", {"policy": "stay", "speed": 1})
    with pytest.raises(ConfigInvalid):
        build_policy("cop", {"policy": "stay", "n": 0})
    with pytest.raises(ConfigInvalid):
        build_policy("robber", {"policy": "stay", "tau": -1.0})


def test_step_toward():
    q = point_in_direction(ORIGIN, 0.5, 0.3)
    assert step_toward(ORIGIN, q, 0.5) == q
    p = step_toward(ORIGIN, q, 0.1)
    assert dist(ORIGIN, p) == pytest.approx(0.1)
    assert dist(p, q) == pytest.approx(0.2)
    # coincident points stay put
    assert step_toward(q, q, 0.1) == q


def test_robber_initial_positions(plane):
    robber = RobberPolicy(tau=0.2, cop_distance=1.5)
    r, cops = robber.initial_positions(plane, 4)
    assert r == ORIGIN
    assert len(cops) == 4
    for c in cops:
        assert dist(ORIGIN, c) == pytest.approx(1.5)
    assert dist(cops[0], cops[2]) == pytest.approx(3.0)
    assert robber.agility(plane)(1) == 0.2


def test_lifts_near_on_surface(s2):
    robber = point_in_direction(ORIGIN, 0.2, 0.5)
    cop = point_in_direction(ORIGIN, math.pi / 8, 1.2)
    game = Game(s2, StayRobber(), [StayCop()], initial=(robber, [cop]))
    far = s2.side_maps[1](cop)
    view = game.view([0])
    view.cops = [far]

    # the lift nearest the robber is back in the central polygon
    near = cop_lifts_near(view, robber)[0]
    assert dist(near, robber) == pytest.approx(s2.surface_dist(s2.project(robber), s2.project(cop)), abs=1e-9)
    assert dist(robber_lift_near(view, far), far) <= dist(robber, far) + 1e-12


def test_greedy_pursuit_moves_full_budget(plane):
    game = Game(plane, StayRobber(tau=0.1, cop_distance=1.0), [GreedyPursuit(n=2)])
    game.submit_move("robber", ORIGIN)
    decision = GreedyPursuit(n=2).moves(game.view([0, 1]))
    assert len(decision.targets) == 2
    for cop, target in zip(game.cop_lifts, decision.targets):
        assert dist(cop, target) == pytest.approx(0.1)
        assert dist(ORIGIN, target) == pytest.approx(0.9)


def test_stay_cop():
    decision = StayCop(n=3).moves(None)
    assert decision.targets == [None, None, None]

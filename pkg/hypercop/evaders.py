"""Robber strategies: the systole-scale evaders and the test adversaries."""

import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from .exceptions import BadParameters, DegenerateConfiguration
from .game import AgilityFunction, GameView
from .geometry import (
    COINCIDENT_TOL,
    GEOM_TOL,
    Point,
    dist,
    dist_many,
    geodesic_through,
    move_toward,
    param_on,
    perpendicular,
    point_at,
    point_in_direction,
    signed_distance,
)
from .policy import PolicyRegistry, Proposal, RobberPolicy, cop_lifts_near, step_toward
from .surface import Arena

logger = logging.getLogger(__name__)


def _nearest(r: Point, lifts: List[Point]) -> Tuple[Point, float]:
    best = min(lifts, key=lambda c: dist(c, r))
    return best, dist(best, r)


def flee_from(cop: Point, r: Point, d: float, budget: float) -> Point:
    """Walk ``budget`` from ``r`` along the extension of the cop-to-robber geodesic."""
    if d <= COINCIDENT_TOL:
        return point_in_direction(r, 0.0, budget)
    return move_toward(cop, r, d + budget)


class SystoleEvader(RobberPolicy):
    """Base of the systole-scale evaders, which keep their distance from the cops.

    Cops start ``s / 4`` away. The subclasses move ``s / 16`` or ``s / 10`` per
    round and only react to cops that come close on that scale.

    ``s`` defaults to the arena's systole; on the plane it must be given.
    """

    divisor: float = 16.0

    def __init__(self, s: Optional[float] = None, cop_distance: Optional[float] = None):
        if s is not None and not s > 0:
            raise BadParameters(f"Systole scale must be positive, got {s}")
        self.s = s
        super().__init__(tau=1.0, cop_distance=cop_distance or 1.0)
        self._cop_distance = cop_distance

    def scale(self, arena: Arena) -> float:
        s = self.s if self.s is not None else arena.systole
        if not 0 < s < math.inf:
            raise BadParameters(f"{self.name} needs a finite systole scale, got {s}")
        return s

    def agility(self, arena: Arena) -> AgilityFunction:
        return AgilityFunction.constant(self.scale(arena) / self.divisor)

    def initial_positions(self, arena: Arena, n_cops: int) -> Tuple[Point, List[Point]]:
        self.cop_distance = self._cop_distance or self.scale(arena) / 4.0
        return super().initial_positions(arena, n_cops)


@PolicyRegistry.register
class FleeOneCop(SystoleEvader):
    """Stay while the cop is at least ``3s/16`` away, otherwise step straight away from it."""

    name = "flee_one_cop"
    divisor = 16.0

    def move(self, view: GameView) -> Proposal:
        s = self.scale(view.arena)
        r = view.robber
        cop, d = _nearest(r, cop_lifts_near(view, r))
        if d >= 3.0 * s / 16.0 - GEOM_TOL:
            return None
        return flee_from(cop, r, d, view.budget)


@PolicyRegistry.register
class FleeTwoCops(SystoleEvader):
    """Two-cop evader with ``tau = s/10``.

    Cops farther than ``s/5`` are ignored; one near cop is fled as by the
    one-cop evader; with both near the robber walks off the geodesic through
    them along its orthogonal.
    """

    name = "flee_two_cops"
    divisor = 10.0

    def _away_from_line(self, c1: Point, c2: Point, r: Point, budget: float) -> Point:
        if dist(c1, c2) <= COINCIDENT_TOL:
            raise DegenerateConfiguration("The two near cops share a position")
        h = geodesic_through(c1, c2)
        o = perpendicular(h, r)
        side = 1.0 if signed_distance(h, r) >= -GEOM_TOL else -1.0
        return point_at(o, param_on(o, r) + side * budget)

    def move(self, view: GameView) -> Proposal:
        s = self.scale(view.arena)
        r = view.robber
        lifts = sorted(cop_lifts_near(view, r), key=lambda c: dist(c, r))
        near = [c for c in lifts if dist(c, r) < s / 5.0]
        if not near:
            return None
        if len(near) >= 2:
            try:
                return self._away_from_line(near[0], near[1], r, view.budget)
            except DegenerateConfiguration as e:
                logger.debug(f"Falling back to the one-cop rule: {e}")
        return flee_from(near[0], r, dist(near[0], r), view.budget)


@PolicyRegistry.register
class RandomWalk(RobberPolicy):
    """Step ``step_fraction * tau`` in a uniformly random direction."""

    name = "random_walk"

    def __init__(self, step_fraction: float = 1.0, tau: float = 0.1, cop_distance: float = 1.0):
        super().__init__(tau=tau, cop_distance=cop_distance)
        if not 0.0 <= step_fraction <= 1.0:
            raise BadParameters(f"step_fraction must lie in [0, 1], got {step_fraction}")
        self.step_fraction = step_fraction

    def move(self, view: GameView) -> Proposal:
        length = self.step_fraction * view.budget
        if length <= COINCIDENT_TOL:
            return None
        return point_in_direction(view.robber, float(self.rng.uniform(0.0, 2.0 * math.pi)), length)


@PolicyRegistry.register
class GreedyFlee(RobberPolicy):
    """Pick, among staying and ``directions`` full steps, the spot farthest from the nearest cop."""

    name = "greedy_flee"

    def __init__(self, directions: int = 64, tau: float = 0.1, cop_distance: float = 1.0):
        super().__init__(tau=tau, cop_distance=cop_distance)
        if directions < 1:
            raise BadParameters(f"directions must be positive, got {directions}")
        self.directions = directions

    def candidates(self, r: Point, budget: float) -> np.ndarray:
        angles = 2.0 * math.pi * np.arange(self.directions) / self.directions
        steps = [point_in_direction(r, float(a), budget).z for a in angles]
        return np.array([r.z, *steps], dtype=complex)

    def move(self, view: GameView) -> Proposal:
        r = view.robber
        zs = self.candidates(r, view.budget)
        cover = np.full(len(zs), np.inf)
        for cop in cop_lifts_near(view, r):
            cover = np.minimum(cover, dist_many(cop.z, zs))
        best = int(np.argmax(cover))
        if best == 0:
            return None
        return Point.from_complex(complex(zs[best]))


@PolicyRegistry.register
class TowardB(GreedyFlee):
    """Walk at the two-cop controller's current ``B`` (the worst case for the pursuer).

    Without a published ``B`` the robber flees greedily.
    """

    name = "toward_b"

    def move(self, view: GameView) -> Proposal:
        b = view.hints.get("B")
        if not isinstance(b, Point):
            return super().move(view)
        if dist(view.robber, b) <= COINCIDENT_TOL:
            return None
        return step_toward(view.robber, b, view.budget)


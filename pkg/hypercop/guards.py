"""Guarding strategies: a cop shadowing the robber on a segment, and the disk guard."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exceptions import BadParameters
from .game import GameView
from .geometry import (
    COINCIDENT_TOL,
    GEOM_TOL,
    SAMPLE_TOL,
    Isometry,
    Point,
    Segment,
    dist,
    geodesic_through,
    intersection,
    move_toward,
    on_segment,
    param_on,
    perpendicular,
    point_at,
    safe_acosh,
    segments_cross,
    signed_distance,
)
from .policy import CopDecision, CopPolicy, PolicyRegistry, step_toward

logger = logging.getLogger(__name__)

MEASURES = ("cover", "surface")


@dataclass(frozen=True)
class GuardAssignment:
    """A cop guarding ``segment`` from ``segment.a`` to ``segment.b``.

    The guard's target is the shadow: the point of the segment at distance
    ``min(d(robber, A), len)`` from ``A``. ``adjustment`` is how far the guard
    still is from its shadow after its last step; once it reaches zero the
    guard is ``adjusted`` and keeps the shadow from then on.
    """

    segment: Segment
    adjustment: float = math.inf
    adjusted: bool = False

    def shadow_param(self, robber_to_a: float) -> float:
        return min(max(robber_to_a, 0.0), self.segment.length)

    def shadow(self, robber_to_a: float) -> Point:
        return self.segment.point_at(self.shadow_param(robber_to_a))

    def entry(self, cop: Point) -> Point:
        """The point of the segment closest to ``cop``."""
        if self.segment.length <= COINCIDENT_TOL:
            return self.segment.a
        return self.segment.point_at(self.segment.param_of(cop))

    def step(self, cop: Point, robber_to_a: float, budget: float) -> Tuple[Point, "GuardAssignment"]:
        """Move ``cop`` toward its shadow, entering the segment first if it is off it."""
        target = self.shadow(robber_to_a)
        if not self.segment.contains(cop, SAMPLE_TOL):
            entry = self.entry(cop)
            d = dist(cop, entry)
            if d > budget:
                moved = move_toward(cop, entry, budget)
                return moved, replace(self, adjustment=dist(moved, target), adjusted=False)
            cop, budget = entry, budget - d
        moved = step_toward(cop, target, budget)
        gap = dist(moved, target)
        return moved, replace(self, adjustment=gap, adjusted=gap <= SAMPLE_TOL)

    def transformed(self, m: Isometry) -> "GuardAssignment":
        return replace(self, segment=Segment(m(self.segment.a), m(self.segment.b)))

    def crossing(self, a: Point, b: Point) -> Optional[Point]:
        """Where the robber step ``a -> b`` crosses the segment, if it does."""
        if self.segment.length <= COINCIDENT_TOL:
            return None
        return segments_cross(a, b, self.segment.a, self.segment.b)


def robber_to(view: GameView, a: Point, measure: str) -> float:
    """Distance from the robber to ``a`` in the cover or on the surface."""
    if measure == "cover":
        return dist(view.robber, a)
    return view.surface_dist(view.robber, a)


def guard_annotation(index: int, assignment: GuardAssignment, cop: Point, robber_to_a: float) -> Dict[str, Any]:
    seg = assignment.segment
    param = seg.param_of(cop) if seg.length > COINCIDENT_TOL else 0.0
    return {
        "kind": "guard",
        "cop": index,
        "param": param,
        "shadow": assignment.shadow_param(robber_to_a),
        "offset": dist(cop, assignment.entry(cop)),
        "adjusted": assignment.adjusted,
    }


@PolicyRegistry.register
class GuardSegment(CopPolicy):
    """One cop guarding the segment from ``a`` to ``b``.

    Robber steps are split where they cross the segment, so a robber that
    crosses it after the guard has adjusted ends a substep on the guard's
    shadow and is caught there.
    """

    name = "guard_segment"

    def __init__(
        self,
        a: Sequence[float] = (0.0, 0.0),
        b: Sequence[float] = (0.5, 0.0),
        measure: str = "cover",
    ):
        super().__init__()
        if measure not in MEASURES:
            raise BadParameters(f"Unknown distance measure {measure!r}, expected one of {MEASURES}")
        self.assignment = GuardAssignment(Segment(Point(*a), Point(*b)))
        self.measure = measure

    def recenter(self, m: Isometry) -> None:
        if self.measure == "cover":
            self.assignment = self.assignment.transformed(m)

    def split(self, view: GameView, path: Sequence[Point]) -> List[Point]:
        splits = []
        for a, b in zip(path, path[1:]):
            x = self.assignment.crossing(a, b)
            if x is not None:
                splits.append(x)
        return splits

    def moves(self, view: GameView) -> CopDecision:
        index = view.own[0]
        d = robber_to(view, self.assignment.segment.a, self.measure)
        target, self.assignment = self.assignment.step(view.cops[index], d, view.budget)
        return CopDecision(
            targets=[target],
            annotations=[guard_annotation(index, self.assignment, target, d)],
        )


def disk_entry(a: Point, b: Point, center: Point, radius: float) -> Optional[Point]:
    """The first point of segment ``ab`` at distance ``radius`` from ``center``.

    Returns ``a`` when ``a`` already lies in the closed disk and None when the
    segment misses it.
    """
    if dist(center, a) <= radius + GEOM_TOL:
        return a
    if dist(a, b) <= COINCIDENT_TOL:
        return None
    g = geodesic_through(a, b)
    h = abs(signed_distance(g, center))
    if h >= radius:
        return None
    s = param_on(g, center) - safe_acosh(math.cosh(radius) / math.cosh(h))
    s_a = param_on(g, a)
    if not s_a <= s <= s_a + dist(a, b):
        return None
    return point_at(g, s)


def right_angle_point(a: Point, b: Point, center: Point) -> Optional[Point]:
    """The point of segment ``ab`` where the angle at ``center`` from ``a`` reaches pi/2."""
    if dist(a, center) <= COINCIDENT_TOL or dist(a, b) <= COINCIDENT_TOL:
        return None
    wall = perpendicular(geodesic_through(center, a), center)
    x = intersection(geodesic_through(a, b), wall)
    if x is None or not on_segment(a, b, x) or dist(a, x) <= GEOM_TOL:
        return None
    return x


@PolicyRegistry.register
class BallGuard(CopPolicy):
    """One cop guarding a growing disk around ``center``.

    The cop walks to the center first. From there it stays on the segment
    from the center to the robber and keeps
    ``d(O, c') - d(O, c) >= d(O, r) - d(O, r')``; a robber step that enters
    the disk of radius ``(d(O, c) + d(O, r)) / 2`` is cut at the entry point
    and intercepted.
    """

    name = "ball_guard"
    geometric = ("center",)

    def __init__(self, center: Sequence[float] = (0.0, 0.0)):
        super().__init__()
        self.center = Point(*center)
        self.stage = "approach"

    def start(self, view: GameView) -> None:
        if dist(view.cops[view.own[0]], self.center) <= SAMPLE_TOL:
            self.stage = "guard"

    def radius(self, cop_radius: float, robber: Point) -> float:
        return (cop_radius + dist(self.center, robber)) / 2.0

    def split(self, view: GameView, path: Sequence[Point]) -> List[Point]:
        if self.stage != "guard":
            return []
        o = self.center
        rho = dist(o, view.cops[view.own[0]])
        splits: List[Point] = []
        for a, b in zip(path, path[1:]):
            while True:
                entry = disk_entry(a, b, o, self.radius(rho, a))
                if entry is not None:
                    if dist(entry, a) > GEOM_TOL:
                        splits.append(entry)
                    return splits
                turn = right_angle_point(a, b, o)
                end = turn if turn is not None else b
                if turn is not None:
                    splits.append(turn)
                rho += max(0.0, dist(o, a) - dist(o, end))
                a = end
                if turn is None:
                    break
        return splits

    def moves(self, view: GameView) -> CopDecision:
        index = view.own[0]
        cop, o = view.cops[index], self.center
        r_before, r = view.robber_before, view.robber

        if self.stage == "approach":
            target = step_toward(cop, o, view.budget)
            if dist(target, o) <= SAMPLE_TOL:
                self.stage = "guard"
                logger.debug(f"Ball guard c{index + 1} reached the center")
            return CopDecision(targets=[target])

        rho = dist(o, cop)
        d_k = self.radius(rho, r_before)
        intercept = dist(o, r) <= d_k + SAMPLE_TOL or disk_entry(r_before, r, o, d_k) is not None
        if intercept:
            target = step_toward(cop, r, view.budget)
        else:
            wanted = rho + max(0.0, dist(o, r_before) - dist(o, r))
            on_ray = move_toward(o, r, wanted) if wanted > COINCIDENT_TOL else o
            target = step_toward(cop, on_ray, view.budget)

        new_rho = dist(o, target)
        annotation = {
            "kind": "ball-guard",
            "cop": index,
            "radius": self.radius(new_rho, r),
            "cop_radius": new_rho,
            "robber_radius": dist(o, r),
            "slack": (new_rho - rho) - (dist(o, r_before) - dist(o, r)),
            "intercept": intercept,
        }
        return CopDecision(targets=[target], annotations=[annotation])

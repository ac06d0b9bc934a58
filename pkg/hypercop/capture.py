"""Capture strategies: the n-cop bisector strategy in the plane and the five-cop pipeline on S(g)."""

import cmath
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .exceptions import BadParameters, LocalizationLost, NotEnclosed
from .game import GameView
from .geometry import (
    COINCIDENT_TOL,
    GEOM_TOL,
    ORIGIN,
    SAMPLE_TOL,
    Geodesic,
    Point,
    Segment,
    angle,
    bisector,
    closest_reachable_on,
    dist,
    foot,
    geodesic_through,
    intersection,
    param_on,
    perpendicular,
    point_at,
    segments_cross,
    signed_distance,
    to_origin,
)
from .guards import GuardAssignment, guard_annotation
from .policy import CopDecision, CopPolicy, PolicyRegistry, robber_lift_near, step_toward
from .surface import SurfacePoint

logger = logging.getLogger(__name__)


def parallel_angle(x: float) -> float:
    """Angle of parallelism: ``tan(a / 2) = exp(-x)``."""
    return 2.0 * math.atan(math.exp(-x))


def angular_order(robber: Point, cops: Sequence[Point]) -> List[int]:
    """Indices of ``cops`` sorted by their direction as seen from ``robber``."""
    t = to_origin(robber)
    return sorted(range(len(cops)), key=lambda i: cmath.phase(t.apply_z(cops[i].z)))


def enclosed(robber: Point, cops: Sequence[Point]) -> bool:
    """Whether the robber-side half-planes of the bisectors form a bounded polygon.

    From the robber, the bisector with cop ``j`` is seen under the directions
    within ``parallel_angle(d_j / 2)`` of the cop's direction; the polygon is
    bounded exactly when these open arcs cover the circle.
    """
    if not cops:
        return False
    t = to_origin(robber)
    arcs: List[Tuple[float, float]] = []
    for c in cops:
        d = dist(robber, c)
        if d <= COINCIDENT_TOL:
            return True
        arcs.append((cmath.phase(t.apply_z(c.z)), parallel_angle(d / 2.0)))

    def covered(theta: float) -> bool:
        for phi, half in arcs:
            gap = abs(math.remainder(theta - phi, 2.0 * math.pi))
            if gap < half - GEOM_TOL:
                return True
        return False

    return all(covered(phi + sign * (half + GEOM_TOL)) for phi, half in arcs for sign in (-1.0, 1.0))


def bisector_target(cop: Point, robber_before: Point, robber: Point, budget: float) -> Point:
    """Mirror the robber's step in the cop's bisector, then close in with what budget is left.

    The cop ends on the orthogonal through the robber to its previous
    bisector, at the reachable point nearest the robber.
    """
    if dist(cop, robber_before) <= COINCIDENT_TOL:
        return step_toward(cop, robber, budget)
    normal = perpendicular(bisector(cop, robber_before), robber)
    target = closest_reachable_on(normal, cop, budget, robber)
    if target is None:
        logger.debug("Mirrored step out of reach, moving straight at the robber")
        return step_toward(cop, robber, budget)
    return target


def wedge(b1: Geodesic, b2: Geodesic) -> Optional[Tuple[Point, float]]:
    """Corner and interior angle of the robber-side wedge of two bisectors.

    The robber lies on the right of every bisector; None when the two do not meet.
    """
    p = intersection(b1, b2)
    if p is None:
        return None
    s1, s2 = param_on(b1, p), param_on(b2, p)
    x1 = point_at(b1, s1 + 1.0)
    if signed_distance(b2, x1) > 0.0:
        x1 = point_at(b1, s1 - 1.0)
    x2 = point_at(b2, s2 + 1.0)
    if signed_distance(b1, x2) > 0.0:
        x2 = point_at(b2, s2 - 1.0)
    return p, angle(p, x1, x2)


def bisector_annotation(
    robber: Point,
    cops: Sequence[Point],
    indices: Sequence[int],
    initial: Sequence[Geodesic],
) -> Optional[Dict[str, Any]]:
    """Angles of the bisector polygon after a cop turn.

    ``alphas`` are the wedge angles at the corners of consecutive bisectors,
    ``betas`` the angles at the robber between consecutive cops. For three
    cops ``beta_lower`` holds the lower bound on beta wherever alpha is below
    the regular-polygon angle. Returns None once a cop sits on the robber.
    """
    n = len(cops)
    if any(dist(c, robber) <= COINCIDENT_TOL for c in cops):
        return None
    order = angular_order(robber, cops)
    bisectors = [bisector(c, robber) for c in cops]
    regular = (n - 2) * math.pi / n

    pairs, alphas, betas, lower, upper_applies = [], [], [], [], []
    for pos in range(n):
        j, k = order[pos], order[(pos + 1) % n]
        pairs.append([indices[j], indices[k]])
        corner = wedge(bisectors[j], bisectors[k])
        alpha = corner[1] if corner is not None else None
        alphas.append(alpha)
        betas.append(angle(robber, cops[j], cops[k]))

        bound = None
        if n == 3 and corner is not None and alpha < regular:
            bound = math.atan(1.0 / (math.tan(regular) * math.cosh(dist(corner[0], robber))))
        lower.append(bound)

        applies = False
        if corner is not None:
            mid_j, mid_k = foot(bisectors[j], robber), foot(bisectors[k], robber)
            applies = signed_distance(bisectors[k], mid_j) <= GEOM_TOL and signed_distance(bisectors[j], mid_k) <= GEOM_TOL
        upper_applies.append(applies)

    midpoint_error = max(abs(dist(foot(b, robber), robber) - dist(c, robber) / 2.0) for b, c in zip(bisectors, cops))
    return {
        "kind": "bisector",
        "pairs": pairs,
        "alphas": alphas,
        "betas": betas,
        "beta_lower": lower,
        "upper_applies": upper_applies,
        "in_polygon": all(signed_distance(g, robber) <= SAMPLE_TOL for g in initial),
        "midpoint_error": midpoint_error,
    }


@PolicyRegistry.register
class BisectorCapture(CopPolicy):
    """``n`` cops whose bisectors with the robber enclose it.

    Each cop copies the robber's step mirrored in its bisector and spends the
    rest of its budget closing in, so the polygon only ever shrinks.
    """

    name = "bisector_capture"
    geometric = ("initial",)

    def __init__(self, n: int = 4):
        super().__init__()
        if n < 3:
            raise BadParameters(f"Bisector capture needs at least three cops, got {n}")
        self.n_cops = n
        self.initial: List[Geodesic] = []

    def start(self, view: GameView) -> None:
        robber, cops = view.robber, view.mine
        if not enclosed(robber, cops):
            raise NotEnclosed(f"The bisectors of {self.n_cops} cops do not enclose the robber")
        self.initial = [bisector(c, robber) for c in cops if dist(c, robber) > COINCIDENT_TOL]

    def moves(self, view: GameView) -> CopDecision:
        targets = [bisector_target(c, view.robber_before, view.robber, view.budget) for c in view.mine]
        annotation = bisector_annotation(view.robber, targets, view.own, self.initial)
        return CopDecision(targets=list(targets), annotations=[annotation] if annotation else [])


GUARD_STAGES = ("guard", "localize", "split", "enclose")


@PolicyRegistry.register
class FiveCopCatch(CopPolicy):
    """Five cops catching the robber on S(g).

    Stages: ``guard`` puts c1, c2 (and c3 when g > 2) on the center-to-vertex
    paths to v1, v5, v9; ``localize`` slides the spare guard four vertices at
    a time until two adjusted guards bound the block of four triangles holding
    the robber; ``split`` guards the three inner paths of that block; once the
    robber's region (its triangle and the partner triangle) is known, the four
    guards around it are re-lifted onto a quadrilateral of the cover and hand
    over to the bisector strategy while the fifth cop pursues.
    """

    name = "five_cop_catch"
    n_cops = 5
    geometric = ("initial",)

    def __init__(self) -> None:
        super().__init__()
        self.stage = "guard"
        self.paths: Dict[int, int] = {}
        self.assignments: Dict[int, GuardAssignment] = {}
        self.local: Dict[int, Point] = {}
        self.block: Optional[int] = None
        self.region: Optional[Tuple[int, int]] = None
        self.enclosing: List[int] = []
        self.free: Optional[int] = None
        self.initial: List[Geodesic] = []
        self._notes: List[Dict[str, Any]] = []

    def start(self, view: GameView) -> None:
        arena = view.arena
        if getattr(arena, "family", None) != "S" or getattr(arena, "g", 0) < 2:
            raise BadParameters(f"five_cop_catch plays on S(g) with g >= 2, not {getattr(arena, 'name', arena)}")
        self.arena = arena
        self.k = arena.polygon.k
        self.g = arena.g
        self._assign(0, 1)
        self._assign(1, 5)
        if self.g > 2:
            self._assign(2, 9)
        self._note("guard")

    # Paths and stages

    def vertex(self, i: int) -> int:
        return (i - 1) % self.k + 1

    def boundary(self, m: int) -> int:
        """Vertex index of the path between blocks ``m - 1`` and ``m``."""
        return self.vertex(4 * m + 1)

    def _assign(self, cop: int, path: int) -> None:
        path = self.vertex(path)
        self.paths[cop] = path
        self.assignments[cop] = GuardAssignment(Segment(ORIGIN, self.arena.polygon.vertex(path)))
        logger.debug(f"c{cop + 1} assigned to the path O-v{path}")

    def _note(self, stage: str, **extra: Any) -> None:
        self.stage = stage
        logger.info(f"Five-cop catch entering stage {stage!r}")
        self._notes.append(
            {
                "kind": "five-cop",
                "stage": stage,
                "block": self.block,
                "paths": {f"c{i + 1}": p for i, p in sorted(self.paths.items())},
                **extra,
            }
        )

    def _adjusted(self, cops: Optional[Sequence[int]] = None) -> bool:
        cops = self.paths if cops is None else cops
        return all(self.assignments[i].adjusted for i in cops)

    def locate(self, view: GameView) -> int:
        """Index ``j`` of the triangle O v_j v_{j+1} holding the robber.

        Raises:
            LocalizationLost: If the robber sits on (or within tolerance of) a triangle boundary.
        """
        rep = view.arena.project(view.robber).rep
        if rep.norm <= SAMPLE_TOL:
            raise LocalizationLost("The robber is at the center of the polygon")
        polygon = self.arena.polygon
        rays = [geodesic_through(ORIGIN, polygon.vertex(j)) for j in range(1, self.k + 1)]
        hits = [
            j
            for j in range(1, self.k + 1)
            if signed_distance(rays[j - 1], rep) >= -GEOM_TOL and signed_distance(rays[j % self.k], rep) <= GEOM_TOL
        ]
        if len(hits) != 1:
            raise LocalizationLost(f"The robber's triangle is ambiguous: {hits}")
        return hits[0]

    def _localize(self, view: GameView) -> None:
        b = (self.locate(view) - 1) // 4
        guarded = sorted((p - 1) // 4 for p in self.paths.values())
        below = max(m for m in guarded if m <= b)
        above = min((m for m in guarded if m > b), default=self.g)
        if below == b and above == b + 1:
            self.block = b
            bounds = {self.boundary(b), self.boundary(b + 1)}
            inner = [c for c in range(self.n_cops) if self.paths.get(c) not in bounds]
            for cop, offset in zip(inner, (2, 3, 4)):
                self._assign(cop, 4 * b + offset)
            self._note("split")
            return
        spare = next(c for c, p in self.paths.items() if (p - 1) // 4 not in (below, above % self.g))
        self._assign(spare, self.boundary(below + 1))
        self._note("localize", slide=f"c{spare + 1}")

    def _enclose(self, view: GameView) -> Optional[Dict[int, Point]]:
        """Re-lifts putting the four guards around the robber's region, or None if they do not enclose it."""
        arena = self.arena
        j = self.locate(view)
        partner = arena.partner[j]
        sides = {j, self.vertex(j + 1), partner, self.vertex(partner + 1)}
        self.region = (j, partner)
        self.enclosing = sorted(c for c, p in self.paths.items() if p in sides)
        self.free = next(c for c in range(self.n_cops) if c not in self.enclosing)

        to_game = arena.reduce(view.robber)[1].map
        across = arena.side_maps[j]
        lifts = {}
        for c in self.enclosing:
            x = self._chart(view, c)
            lifts[c] = to_game(x if self.paths[c] in (j, self.vertex(j + 1)) else across(x))
        if not enclosed(view.robber, list(lifts.values())):
            return None
        return lifts

    def _advance(self, view: GameView) -> Dict[int, Point]:
        if self.stage == "guard" and self._adjusted():
            self._note("localize")
        if self.stage == "localize" and self._adjusted():
            self._localize(view)
        if self.stage == "split" and self._adjusted():
            self._note("enclose")
        if self.stage == "enclose" and self._adjusted():
            lifts = self._enclose(view)
            if lifts is not None:
                self.initial = [bisector(c, view.robber) for c in lifts.values() if dist(c, view.robber) > COINCIDENT_TOL]
                self._note("bisector", region=list(self.region), enclosing=[f"c{c + 1}" for c in self.enclosing])
                return lifts
        return {}

    # Moves

    def _chart(self, view: GameView, cop: int) -> Point:
        """The cop's position in the polygon's own chart, tracked continuously."""
        x = view.arena.project(view.cops[view.own[cop]])
        pos = view.arena.nearest_lift(x, self.local.get(cop, x.rep))
        self.local[cop] = pos
        return pos

    def _guard_move(self, view: GameView, cop: int, robber_to_o: float) -> Tuple[SurfacePoint, Dict[str, Any]]:
        pos = self._chart(view, cop)
        new, self.assignments[cop] = self.assignments[cop].step(pos, robber_to_o, view.budget)
        self.local[cop] = new
        note = guard_annotation(view.own[cop], self.assignments[cop], new, robber_to_o)
        note["path"] = self.paths[cop]
        return view.arena.project(new), note

    def _pursue(self, view: GameView, cop: int) -> Point:
        c = view.cops[view.own[cop]]
        self.local.pop(cop, None)
        return step_toward(c, robber_lift_near(view, c), view.budget)

    def split(self, view: GameView, path: Sequence[Point]) -> List[Point]:
        if self.stage not in GUARD_STAGES or not self.paths:
            return []
        arena = self.arena
        to_game = arena.reduce(path[0])[1].map
        copies = [to_game] + [to_game.compose(arena.side_maps[e]) for e in range(1, self.k + 1)]
        segments = [
            (m(ORIGIN), m(arena.polygon.vertex(p))) for p in set(self.paths.values()) for m in copies
        ]
        splits = []
        for a, b in zip(path, path[1:]):
            for c, d in segments:
                x = segments_cross(a, b, c, d)
                if x is not None and dist(x, a) > GEOM_TOL and dist(x, b) > GEOM_TOL:
                    splits.append(x)
        return splits

    def moves(self, view: GameView) -> CopDecision:
        relifts: Dict[int, Point] = {}
        if self.stage != "bisector":
            try:
                relifts = self._advance(view)
            except LocalizationLost as e:
                logger.debug(f"Deferring localization: {e}")

        annotations, self._notes = self._notes, []
        targets: List[Optional[Any]] = [None] * self.n_cops

        if relifts:
            targets[self.free] = self._pursue(view, self.free)
            return CopDecision(
                targets=targets,
                annotations=annotations,
                events=["handoff"],
                relifts=relifts,
                phase_start=True,
            )

        if self.stage == "bisector":
            cops = [view.cops[view.own[c]] for c in self.enclosing]
            moved = [bisector_target(c, view.robber_before, view.robber, view.budget) for c in cops]
            for c, target in zip(self.enclosing, moved):
                targets[c] = target
            targets[self.free] = self._pursue(view, self.free)
            note = bisector_annotation(view.robber, moved, [view.own[c] for c in self.enclosing], self.initial)
            if note is not None:
                annotations.append(note)
            return CopDecision(targets=targets, annotations=annotations)

        robber_to_o = view.surface_dist(view.robber, ORIGIN)
        for cop in range(self.n_cops):
            if self.stage == "enclose" and cop == self.free:
                targets[cop] = self._pursue(view, cop)
            elif cop in self.paths:
                targets[cop], note = self._guard_move(view, cop, robber_to_o)
                annotations.append(note)
            else:
                pos = self._chart(view, cop)
                new = step_toward(pos, ORIGIN, view.budget)
                self.local[cop] = new
                targets[cop] = view.arena.project(new)
        return CopDecision(targets=targets, annotations=annotations)

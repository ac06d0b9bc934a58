"""The two-cop controller for compact surfaces.

Play is organised in phases of agility sum ``phase_multiplier * D``. At each
phase start the first cop takes the lift ``C1`` nearest the robber's lift
``R`` and the second cop is re-lifted next to the point ``P`` of the geodesic
``g0 = C1 R`` lying ``anchor_multiplier * D`` beyond ``R``. The second cop
guards the segment ``B B'`` of the orthogonal ``h`` to ``g0`` through its
lift, ``guard_multiplier * D`` to either side of ``H = g0 ∩ h``. The first
cop climbs towards ``B`` so that the robber and ``B`` stay on the same side
of the orthogonal to ``h`` through the cop; once the robber crosses ``C1 B``
(or ``C1 B'``) the first cop just follows it until the phase ends.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import backoff

from .config import ControllerConfig
from .exceptions import BadParameters, HypercopError, PhaseConstructionFailed
from .game import GameView, transform
from .geometry import (
    COINCIDENT_TOL,
    GEOM_TOL,
    SAMPLE_TOL,
    Geodesic,
    Isometry,
    Point,
    Segment,
    angle,
    closest_reachable_on,
    dist,
    eta_bound,
    foot,
    geodesic_through,
    intersection,
    on_segment,
    param_on,
    perpendicular,
    point_at,
    point_in_direction,
    reflect,
    safe_acosh,
    segments_cross,
    signed_distance,
)
from .guards import GuardAssignment
from .policy import CopDecision, CopPolicy, PolicyRegistry, robber_lift_near, step_toward

logger = logging.getLogger(__name__)

# Points farther than this from the origin of the chart lose their float64
# coordinates to the unit circle; the phase geometry must stay well inside.
CHART_REACH = 30.0


@dataclass
class PursuitPhase:
    """Geometry fixed at the start of a phase, in the game chart."""

    index: int
    start_round: int
    g0: Geodesic
    h: Geodesic
    H: Point
    b_left: Point
    b_right: Point
    anchor: Point
    guard: GuardAssignment
    start_dist: float
    side: Optional[int] = None
    crossing_round: Optional[int] = None
    released: bool = False

    @property
    def B(self) -> Point:
        """The end of ``h`` on the side of ``g0`` the robber left to (left until decided)."""
        return self.b_right if self.side == -1 else self.b_left

    @property
    def B_prime(self) -> Point:
        return self.b_left if self.side == -1 else self.b_right

    def transformed(self, m: Isometry) -> "PursuitPhase":
        return PursuitPhase(
            index=self.index,
            start_round=self.start_round,
            g0=transform(m, self.g0),
            h=transform(m, self.h),
            H=m(self.H),
            b_left=m(self.b_left),
            b_right=m(self.b_right),
            anchor=m(self.anchor),
            guard=self.guard.transformed(m),
            start_dist=self.start_dist,
            side=self.side,
            crossing_round=self.crossing_round,
            released=self.released,
        )


def worst_end_distance(w: float, x: float, y: float) -> float:
    """``acosh(w cosh y) - acosh(w cosh x)``: the largest phase-end distance left to the robber."""
    return safe_acosh(w * math.cosh(y)) - safe_acosh(w * math.cosh(x))


@PolicyRegistry.register
class TwoCopController(CopPolicy):
    """Two cops bringing the first cop within ``eps`` of the robber on a compact surface."""

    name = "two_cop_controller"
    n_cops = 2
    accepts_controller_config = True

    def __init__(
        self,
        eps: float = 0.1,
        config: Union[ControllerConfig, Dict[str, Any], None] = None,
        condition_annotations: bool = True,
    ):
        super().__init__()
        if not eps > 0:
            raise BadParameters(f"eps must be positive, got {eps}")
        if isinstance(config, dict):
            config = ControllerConfig(**config)
        self.config = config or ControllerConfig()
        self.eps = eps
        self.condition_annotations = condition_annotations
        self.phase_multiplier = self.config.phase_multiplier
        self.phase: Optional[PursuitPhase] = None
        self.stage = "idle"
        self.widened = 0.0
        self._pending: List[Dict[str, Any]] = []
        self._resolution = 0.0
        self._build = backoff.on_exception(
            backoff.constant,
            PhaseConstructionFailed,
            max_tries=self.config.anchor_retries,
            interval=0,
            jitter=None,
            on_backoff=self._widen,
            logger=logger,
        )(self._build_phase)

    def _widen(self, details: Dict[str, Any]) -> None:
        self.widened += self._resolution
        logger.warning(f"Anchor lift not found; retrying with D widened by {self.widened:.3g}")

    def start(self, view: GameView) -> None:
        """Check the arena before the first phase.

        Raises:
            BadParameters: On a non-compact arena, or when the guard segment
                would reach beyond ``CHART_REACH`` from the robber.
        """
        if not math.isfinite(view.diameter):
            raise BadParameters(f"{self.name} needs a compact surface, got {view.arena.name}")
        reach = (self.config.anchor_multiplier + self.config.guard_multiplier) * view.diameter
        if reach > CHART_REACH:
            raise BadParameters(
                f"Phase geometry would reach {reach:.3g} from the robber with D = {view.diameter:.3g}; "
                f"beyond the {CHART_REACH:g} units that float64 disk coordinates resolve",
            )

    def recenter(self, m: Isometry) -> None:
        phase = self.phase
        if phase is None:
            return
        try:
            self.phase = phase.transformed(m)
        except HypercopError as e:
            logger.warning(f"Phase {phase.index} geometry left the chart ({e}); c1 follows the robber")
            phase.released = True
            self.stage = "follow"

    def diameter(self, view: GameView) -> float:
        return view.diameter + self.widened

    def _build_phase(self, view: GameView) -> Tuple[PursuitPhase, Dict[int, Point]]:
        cfg = self.config
        D = self.diameter(view)
        arena = view.arena
        c1, c2 = (view.cops[i] for i in view.own)
        R = view.robber
        C1 = arena.nearest_lift(arena.project(c1), R)
        # a cop sitting on the robber gives no direction; any geodesic through R serves
        toward = C1 if dist(C1, R) > COINCIDENT_TOL else point_in_direction(R, math.pi, 1.0)
        g0 = geodesic_through(toward, R)
        P = point_at(g0, param_on(g0, R) + cfg.anchor_multiplier * D)

        lifts = arena.lifts_near(arena.project(c2), P, D)
        if not lifts:
            raise PhaseConstructionFailed(f"No lift of c2 within {D:.6g} of the anchor point")
        anchor = lifts[0]

        h = perpendicular(g0, anchor)
        H = foot(g0, anchor)
        s_H = param_on(h, H)
        half = cfg.guard_multiplier * D
        b_left, b_right = point_at(h, s_H + half), point_at(h, s_H - half)
        phase = PursuitPhase(
            index=view.phase_index,
            start_round=view.round,
            g0=g0,
            h=h,
            H=H,
            b_left=b_left,
            b_right=b_right,
            anchor=anchor,
            guard=GuardAssignment(Segment(b_left, b_right)),
            start_dist=dist(C1, R),
        )
        return phase, {0: C1, 1: anchor}

    def _phase_note(self, view: GameView, phase: PursuitPhase, C1: Point) -> Dict[str, Any]:
        D = self.diameter(view)
        R = view.robber
        w = math.cosh(self.config.guard_multiplier * D)
        x, y = dist(R, phase.H), dist(C1, phase.H)
        along = point_at(phase.g0, param_on(phase.g0, phase.H) + 1.0)
        eta_eps = eta_bound(w, x, y) * self.eps if y > x + GEOM_TOL else None
        return {
            "kind": "phase",
            "phase": phase.index,
            "D": D,
            "anchor_multiplier": self.config.anchor_multiplier,
            "guard_multiplier": self.config.guard_multiplier,
            "d_RH": x,
            "d_anchor_H": dist(phase.anchor, phase.H),
            "d_HB": dist(phase.H, phase.b_left),
            "d_HB_prime": dist(phase.H, phase.b_right),
            "angle_H": angle(phase.H, along, phase.b_left),
            "start_dist": phase.start_dist,
            "worst_end": worst_end_distance(w, x, y),
            "eta_eps": eta_eps,
        }

    def on_phase_start(self, view: GameView) -> Dict[int, Point]:
        self._resolution = getattr(view.arena, "diameter_resolution", 0.0)
        if self.phase is not None:
            c1 = view.cops[view.own[0]]
            end = dist(robber_lift_near(view, c1), c1)
            self._pending.append(
                {
                    "kind": "phase-end",
                    "phase": self.phase.index,
                    "start_dist": self.phase.start_dist,
                    "end_dist": end,
                    "crossing_round": self.phase.crossing_round,
                    "released": self.phase.released,
                },
            )
        phase, relifts = self._build(view)
        self.phase = phase
        self.stage = "pursue"
        self._choose_side(view, view.robber)
        self._pending.append(self._phase_note(view, phase, relifts[0]))
        logger.debug(f"Phase {phase.index}: robber {phase.start_dist:.4g} from c1")
        return relifts

    def _choose_side(self, view: GameView, R: Point) -> None:
        phase = self.phase
        if phase is None or phase.side is not None or phase.released:
            return
        sd = signed_distance(phase.g0, R)
        if abs(sd) > GEOM_TOL:
            phase.side = 1 if sd > 0 else -1
        view.hints["B"] = phase.B

    def _crossed(self, phase: PursuitPhase, c1: Point, a: Point, b: Point) -> bool:
        if dist(a, b) <= COINCIDENT_TOL:
            return False
        for end in (phase.B, phase.B_prime):
            if dist(c1, end) > COINCIDENT_TOL and segments_cross(a, b, c1, end) is not None:
                return True
        return False

    def split(self, view: GameView, path: Sequence[Point]) -> List[Point]:
        phase = self.phase
        if phase is None or self.stage != "pursue":
            return []
        c1 = view.cops[view.own[0]]
        g = perpendicular(phase.h, c1)
        splits: List[Point] = []
        for a, b in zip(path, path[1:]):
            if dist(a, b) <= COINCIDENT_TOL:
                continue
            x = intersection(geodesic_through(a, b), g)
            if x is not None and on_segment(a, b, x):
                splits.append(x)
            for end in (phase.B, phase.B_prime):
                if dist(c1, end) > COINCIDENT_TOL:
                    y = segments_cross(a, b, c1, end)
                    if y is not None:
                        splits.append(y)
            z = phase.guard.crossing(a, b)
            if z is not None:
                splits.append(z)
        return splits

    def climb(
        self,
        phase: PursuitPhase,
        c1: Point,
        r_before: Point,
        r: Point,
        budget: float,
    ) -> Tuple[Point, Dict[str, Any]]:
        """The first cop's move while the robber has not crossed ``C1 B``.

        A robber on the far side of the orthogonal ``g`` to ``h`` through the
        cop is reflected in ``g``; the cop moves in the reflected picture and
        the result is reflected back.
        """
        B = phase.B
        if dist(c1, B) <= SAMPLE_TOL:
            target = step_toward(c1, r, budget)
            return target, {"kind": "condition-2", "rule": "direct", "holds": True, "mirrored": False, "margin": 0.0}

        g = perpendicular(phase.h, c1)
        s_B = signed_distance(g, B)
        probe = r if abs(signed_distance(g, r)) > GEOM_TOL else r_before
        mirrored = signed_distance(g, probe) * s_B < 0.0
        rf = reflect(g, r) if mirrored else r

        seg = Segment(c1, B)
        o = perpendicular(phase.h, rf)
        x = intersection(o, seg.carrier)
        moved: Optional[Point] = None
        rule = "a"
        if x is not None and seg.contains(x, SAMPLE_TOL) and dist(x, c1) < budget:
            moved = closest_reachable_on(o, c1, budget, rf)
            rule = "b"
        if moved is None:
            moved, rule = seg.point_at(budget), "a"

        g_next = perpendicular(phase.h, moved)
        sign = 1.0 if signed_distance(g_next, B) >= 0.0 else -1.0
        margin = sign * signed_distance(g_next, rf)
        note = {
            "kind": "condition-2",
            "rule": rule,
            "holds": margin >= -GEOM_TOL,
            "mirrored": mirrored,
            "margin": margin,
        }
        return (reflect(g, moved) if mirrored else moved), note

    def moves(self, view: GameView) -> CopDecision:
        annotations, self._pending = self._pending, []
        i1, i2 = view.own
        c1, c2 = view.cops[i1], view.cops[i2]
        r, r_before, budget = view.robber, view.robber_before, view.budget
        phase = self.phase
        if phase is None:
            target = step_toward(c1, robber_lift_near(view, c1), budget)
            return CopDecision(targets=[target, None], annotations=annotations)

        self._choose_side(view, r)
        events: List[str] = []
        if self.stage == "pursue" and self._crossed(phase, c1, r_before, r):
            self.stage = "follow"
            phase.crossing_round = view.round
            events.append("crossing")
            annotations.append({"kind": "crossing", "phase": phase.index, "dist": dist(c1, r)})
            logger.debug(f"Robber crossed the climbing segment in round {view.round}")

        if self.stage == "follow":
            target = step_toward(c1, robber_lift_near(view, c1), budget)
            return CopDecision(targets=[target, None], events=events, annotations=annotations)

        target1, note = self.climb(phase, c1, r_before, r, budget)
        target2, phase.guard = phase.guard.step(c2, dist(r, phase.guard.segment.a), budget)
        if self.condition_annotations:
            annotations.append({**note, "phase": phase.index})
        return CopDecision(targets=[target1, target2], events=events, annotations=annotations)

"""Numerical checks of the trigonometric lemmas and of the strategy invariants.

Every check samples configurations with a seeded generator, measures how far
each one is from satisfying its inequality and keeps the worst case as a
witness. Identity checks use a tolerance of 1e-9, sampled-extremum checks
1e-7. Checks marked ``trace`` read annotations from a recorded ``Trace`` and
run a short canned game when none is given.
"""

import logging
import math
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Any, Callable, ClassVar, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .config import AtlasConfig, GameConfig
from .exceptions import BadParameters, UnknownCheck
from .game import AgilityFunction, Trace, run
from .geometry import (
    ORIGIN,
    Isometry,
    Point,
    angle,
    dist,
    dist_many,
    eta_bound,
    foot,
    geodesic_through,
    move_toward,
    param_on,
    point_at,
    point_in_direction,
    reflection_in,
    rotation_about,
    to_origin,
    translation_along,
)
from .surface import Surface, make_surface

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-9
SAMPLED_TOL = 1e-7
SIDE_RANGE = (1e-2, 5.0)
GRID = 65
CROSSING_POINTS = 1000


@dataclass
class CheckReport:
    """Outcome of one check: the worst violation found and where."""

    id: str
    samples: int
    max_violation: float
    witness: Dict[str, Any]
    passed: bool
    tolerance: float
    note: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CheckReport":
        return cls(
            id=str(data["id"]),
            samples=int(data["samples"]),
            max_violation=float(data["max_violation"]),
            witness=dict(data.get("witness", {})),
            passed=bool(data["passed"]),
            tolerance=float(data["tolerance"]),
            note=str(data.get("note", "")),
        )


@dataclass
class _Worst:
    """Running maximum of the violation with the configuration that produced it."""

    value: float = 0.0
    witness: Dict[str, Any] = field(default_factory=dict)
    count: int = 0

    def update(self, violation: float, **witness: Any) -> None:
        self.count += 1
        if violation > self.value or not self.witness:
            self.value = max(self.value, violation)
            self.witness = {k: _plain(v) for k, v in witness.items()}


def _plain(value: Any) -> Any:
    if isinstance(value, Point):
        return value.to_list()
    if isinstance(value, Isometry):
        return value.to_list()
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


CheckFunc = Callable[[np.random.Generator, int, Optional[Trace], Optional[Surface]], Tuple[_Worst, str]]


@dataclass(frozen=True)
class Check:
    id: str
    func: CheckFunc
    tolerance: float
    samples: int
    description: str
    trace: bool = False


class CheckRegistry:
    """Registry of the available checks by id."""

    _checks: ClassVar[Dict[str, Check]] = {}

    @classmethod
    def register(
        cls, check_id: str, tolerance: float, samples: int, trace: bool = False
    ) -> Callable[[CheckFunc], CheckFunc]:
        def decorator(func: CheckFunc) -> CheckFunc:
            description = (func.__doc__ or "").strip().splitlines()[0] if func.__doc__ else ""
            cls._checks[check_id] = Check(check_id, func, tolerance, samples, description, trace)
            return func

        return decorator

    @classmethod
    def get(cls, check_id: str) -> Check:
        try:
            return cls._checks[check_id]
        except KeyError:
            known = ", ".join(cls._checks)
            raise UnknownCheck(f"Unknown check {check_id!r} (known: {known})") from None

    @classmethod
    def ids(cls) -> List[str]:
        return list(cls._checks)


def _log_uniform(rng: np.random.Generator, lo: float = SIDE_RANGE[0], hi: float = SIDE_RANGE[1]) -> float:
    return float(math.exp(rng.uniform(math.log(lo), math.log(hi))))


def _on_axis(t: np.ndarray) -> np.ndarray:
    """Points of the positive real axis at distances ``t`` from O."""
    return np.tanh(np.asarray(t, dtype=float) / 2.0).astype(complex)


def _right_triangle(a: float, b: float) -> Tuple[Point, Point, Point]:
    """``(A, B, C)`` with the right angle at ``C = O``, ``d(B, C) = a`` and ``d(A, C) = b``."""
    return Point(math.tanh(b / 2.0), 0.0), Point(0.0, math.tanh(a / 2.0)), ORIGIN


def _random_point(rng: np.random.Generator, max_radius: float = 3.0) -> Point:
    return point_in_direction(ORIGIN, float(rng.uniform(0.0, 2.0 * math.pi)), float(rng.uniform(0.0, max_radius)))


def _along(p: Point, q: Point, ts: np.ndarray) -> np.ndarray:
    """Points of the geodesic ray from ``p`` through ``q`` at distances ``ts``."""
    chart = to_origin(p)
    w = chart.apply_z(q.z)
    return chart.inverse().apply_many(np.tanh(ts / 2.0) * (w / abs(w)))


@lru_cache(maxsize=None)
def default_surface() -> Surface:
    """S(2) with the default atlas settings, built once per process."""
    return make_surface("S", 2, AtlasConfig())


# Trigonometric lemmas


@CheckRegistry.register("L5", tolerance=SAMPLED_TOL, samples=10_000)
def check_closer_together(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """Endpoint gap on a leg dominates every sub-segment gap."""
    worst = _Worst()
    for _ in range(samples):
        a, b = _log_uniform(rng), _log_uniform(rng)
        _, B, _ = _right_triangle(a, b)
        x1 = float(rng.uniform(0.0, b))
        target = float(dist_many(B.z, _on_axis([b, b - x1])) @ np.array([1.0, -1.0]))
        grid = dist_many(B.z, _on_axis(b - np.linspace(0.0, x1, GRID)))
        worst.update(float(grid.max() - grid.min()) - target, a=a, b=b, x1=x1, target=target)
    return worst, f"grid of {GRID} points per leg"


@CheckRegistry.register("L6", tolerance=SAMPLED_TOL, samples=10_000)
def check_shift_to_right(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """Sliding a fixed-length window toward the right angle shrinks the gap; d(X, B) is convex in d(X, C)."""
    worst = _Worst()
    for _ in range(samples):
        a, b = _log_uniform(rng), _log_uniform(rng)
        _, B, _ = _right_triangle(a, b)
        length = float(rng.uniform(0.0, b))
        near = dist_many(B.z, _on_axis(b - np.linspace(0.0, b - length, GRID)))
        far = dist_many(B.z, _on_axis(b - length - np.linspace(0.0, b - length, GRID)))
        windows = near - far
        gap = float(windows.max() - windows[0])

        curve = dist_many(B.z, _on_axis(np.linspace(0.0, b, GRID)))
        bend = float(-(curve[:-2] - 2.0 * curve[1:-1] + curve[2:]).min())
        worst.update(max(gap, bend), a=a, b=b, window=length, gap=gap, bend=bend)
    return worst, f"{GRID} windows and second differences per triangle"


@CheckRegistry.register("L7", tolerance=IDENTITY_TOL, samples=10_000)
def check_side_monotone(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """With two sides fixed, a smaller angle at C gives a longer side AC."""
    worst = _Worst()
    attempts = 0
    while worst.count < samples and attempts < 20 * samples:
        attempts += 1
        a, b = _log_uniform(rng), _log_uniform(rng)
        gamma = float(rng.uniform(0.05, math.pi - 0.05))
        B = point_in_direction(ORIGIN, 0.0, a)
        A = point_in_direction(ORIGIN, gamma, b)
        if angle(A, B, ORIGIN) >= math.pi / 2.0:
            continue
        c = dist(A, B)
        smaller = float(rng.uniform(0.0, gamma))
        p, q = math.cosh(a), math.sinh(a) * math.cos(smaller)
        width = math.sqrt(p * p - q * q)
        if math.cosh(c) < width:
            continue
        other = math.atanh(q / p) + math.acosh(math.cosh(c) / width)
        if other <= 0.0 or angle(point_in_direction(ORIGIN, smaller, other), B, ORIGIN) >= math.pi / 2.0:
            continue
        worst.update(b - other, a=a, b=b, gamma=gamma, smaller=smaller, c=c, other=other)
    return worst, f"{attempts} triangles drawn, acute branch only"


@CheckRegistry.register("L8", tolerance=IDENTITY_TOL, samples=10_000)
def check_eta(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """The closed-form eta bounds the slope of acosh(w cosh x) from below."""
    worst = _Worst()
    for _ in range(samples):
        w = 1.0 + _log_uniform(rng, 1e-2, 50.0)
        t1 = _log_uniform(rng)
        t2 = t1 + _log_uniform(rng)
        x, y = sorted(rng.uniform(t1, t2, size=2))
        eta = eta_bound(w, t1, t2)
        gain = math.acosh(w * math.cosh(y)) - math.acosh(w * math.cosh(x))
        worst.update(eta * (y - x) - gain, w=w, t1=t1, t2=t2, x=x, y=y, eta=eta)
    return worst, "increasing orientation"


@CheckRegistry.register("C16", tolerance=SAMPLED_TOL, samples=1000)
def check_crossing_optimum(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """Inside the climbing triangle, the far corner B maximizes d(C, x) - d(R, x) on the hypotenuse."""
    worst = _Worst()
    for _ in range(samples):
        p, q = _log_uniform(rng), _log_uniform(rng)
        C, B, foot_point = _right_triangle(q, p)
        edge_point = move_toward(foot_point, B, float(rng.uniform(0.0, q)))
        R = move_toward(C, edge_point, float(rng.uniform(0.05, 0.95)) * dist(C, edge_point))
        xs = _along(C, B, np.linspace(0.0, dist(C, B), CROSSING_POINTS, endpoint=False))
        f = dist_many(C.z, xs) - dist_many(R.z, xs)
        f_b = dist(C, B) - dist(R, B)
        worst.update(float(f.max()) - f_b, C=C, B=B, R=R, f_B=f_b)
    return worst, f"{CROSSING_POINTS} crossing points per triangle"


@CheckRegistry.register("PY", tolerance=IDENTITY_TOL, samples=10_000)
def check_pythagoras(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """Right triangles built with ``foot`` satisfy cosh c = cosh a cosh b; angles match the law of cosines."""
    worst = _Worst()
    for _ in range(samples):
        g = geodesic_through(_random_point(rng), _random_point(rng))
        p = _random_point(rng)
        f = foot(g, p)
        q = point_at(g, param_on(g, f) + float(rng.uniform(-3.0, 3.0)))
        c = math.cosh(dist(p, q))
        right = abs(c - math.cosh(dist(p, f)) * math.cosh(dist(f, q))) / c

        u, v, w = _random_point(rng), _random_point(rng), _random_point(rng)
        a, b, side = dist(w, u), dist(w, v), dist(u, v)
        law = math.cosh(a) * math.cosh(b) - math.sinh(a) * math.sinh(b) * math.cos(angle(w, u, v))
        cosines = abs(math.cosh(side) - law) / math.cosh(side)
        worst.update(max(right, cosines), p=p, q=q, foot=f, triangle=[u, v, w])
    return worst, "relative error of the cosh identities"


@CheckRegistry.register("ISO", tolerance=IDENTITY_TOL, samples=10_000)
def check_isometries(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """Random compositions of translations, rotations and reflections preserve distances."""
    worst = _Worst()
    for _ in range(samples):
        maps = [
            translation_along(geodesic_through(_random_point(rng), _random_point(rng)), float(rng.uniform(-2.0, 2.0))),
            rotation_about(_random_point(rng), float(rng.uniform(0.0, 2.0 * math.pi))),
            reflection_in(geodesic_through(_random_point(rng), _random_point(rng))),
        ]
        order = rng.permutation(len(maps))
        m = maps[order[0]].compose(maps[order[1]]).compose(maps[order[2]])
        p, q = _random_point(rng, 2.0), _random_point(rng, 2.0)
        stretch = abs(dist(m(p), m(q)) - dist(p, q))
        chained = dist(m(p), maps[order[0]](maps[order[1]](maps[order[2]](p))))
        back = dist(m.inverse()(m(p)), p)
        worst.update(max(stretch, chained, back), map=m, p=p, q=q)
    return worst, "distance, composition and inverse errors"


@CheckRegistry.register("L3", tolerance=SAMPLED_TOL, samples=10_000)
def check_embedded_disk(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """Disks of radius below s/4 embed isometrically in the surface."""
    surface = surface or default_surface()
    radius = 0.9 * surface.systole / 4.0
    worst = _Worst()
    for _ in range(samples):
        center = _random_point(rng, surface.polygon.inradius)
        x = point_in_direction(center, float(rng.uniform(0.0, 2.0 * math.pi)), float(rng.uniform(0.0, radius)))
        y = point_in_direction(center, float(rng.uniform(0.0, 2.0 * math.pi)), float(rng.uniform(0.0, radius)))
        on_surface = surface.surface_dist(surface.project(x), surface.project(y))
        worst.update(abs(on_surface - dist(x, y)), center=center, x=x, y=y, radius=radius)
    return worst, f"{surface.name}, disk radius {radius:.6f}"


# Strategy invariants read from traces


def _canned_guard(seed: int, rounds: int) -> Trace:
    from .evaders import RandomWalk
    from .guards import GuardSegment
    from .surface import HyperbolicPlane

    return run(
        HyperbolicPlane(),
        RandomWalk(tau=0.1),
        [GuardSegment(a=(0.0, 0.0), b=(0.5, 0.0))],
        initial=(point_in_direction(ORIGIN, 0.5, 0.3), [point_in_direction(ORIGIN, 0.0, 0.8)]),
        stop=GameConfig(max_rounds=rounds),
        seed=seed,
    )


def _canned_controller(seed: int, rounds: int, surface: Optional[Surface]) -> Trace:
    from .controller import TwoCopController
    from .evaders import RandomWalk

    return run(
        surface or default_surface(),
        RandomWalk(tau=0.2),
        [TwoCopController(eps=0.1)],
        stop=GameConfig(max_rounds=rounds),
        seed=seed,
    )


def _canned_bisector(seed: int, rounds: int, n: int) -> Trace:
    from .capture import BisectorCapture
    from .evaders import RandomWalk
    from .surface import HyperbolicPlane

    return run(
        HyperbolicPlane(),
        RandomWalk(tau=0.05, cop_distance=1.0),
        [BisectorCapture(n=n)],
        stop=GameConfig(max_rounds=rounds),
        seed=seed,
    )


def _canned_ball(seed: int, rounds: int) -> Trace:
    from .evaders import RandomWalk
    from .guards import BallGuard
    from .surface import HyperbolicPlane

    return run(
        HyperbolicPlane(),
        RandomWalk(tau=0.1),
        [BallGuard()],
        tau=AgilityFunction.constant(0.1),
        initial=(point_in_direction(ORIGIN, 1.0, 1.5), [ORIGIN]),
        stop=GameConfig(max_rounds=rounds),
        seed=seed,
    )


@CheckRegistry.register("L2", tolerance=SAMPLED_TOL, samples=1000, trace=True)
def check_guard_shadow(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """An adjusted segment guard sits on the robber's shadow after every turn."""
    trace = trace or _canned_guard(int(rng.integers(1 << 31)), samples)
    worst = _Worst()
    for note in trace.annotations_of("guard"):
        if note["adjusted"]:
            worst.update(abs(note["param"] - note["shadow"]) + note["offset"], **note)
    return worst, "adjusted guard turns"


@CheckRegistry.register("C12", tolerance=SAMPLED_TOL, samples=400, trace=True)
def check_phase_geometry(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """At every phase start H lies (a - 1)D to (a + 1)D from the robber and within D of the anchor."""
    trace = trace or _canned_controller(int(rng.integers(1 << 31)), samples, surface)
    worst = _Worst()
    for note in trace.annotations_of("phase"):
        D, a = note["D"], note["anchor_multiplier"]
        excess = max((a - 1.0) * D - note["d_RH"], note["d_RH"] - (a + 1.0) * D, note["d_anchor_H"] - D)
        worst.update(excess, **note)
    return worst, "phase starts"


@CheckRegistry.register("P15", tolerance=1e-6, samples=400, trace=True)
def check_phase_decrease(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """A phase that keeps its geometry and sees no crossing ends within the worst-case end distance."""
    trace = trace or _canned_controller(int(rng.integers(1 << 31)), samples, surface)
    starts = {note["phase"]: note for note in trace.annotations_of("phase")}
    worst = _Worst()
    for end in trace.annotations_of("phase-end"):
        start = starts.get(end["phase"])
        if start is None or end["crossing_round"] is not None or end.get("released"):
            continue
        worst.update(end["end_dist"] - start["worst_end"], **end, worst_end=start["worst_end"])
    return worst, "completed phases without a crossing"


def _alpha_drops(notes: Sequence[Dict[str, Any]]) -> _Worst:
    worst = _Worst()
    last: Dict[Tuple[int, int], float] = {}
    for note in notes:
        for pair, alpha in zip(note["pairs"], note["alphas"]):
            key = tuple(sorted(pair))
            if alpha is None:
                continue
            if key in last:
                worst.update(last[key] - alpha, pair=list(key), before=last[key], after=alpha, round=note.get("round"))
            last[key] = alpha
    return worst


@CheckRegistry.register("C20", tolerance=IDENTITY_TOL, samples=2000, trace=True)
def check_alpha_monotone(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """Corner angles of the bisector polygon never decrease."""
    trace = trace or _canned_bisector(int(rng.integers(1 << 31)), samples, n=4)
    return _alpha_drops(trace.annotations_of("bisector")), "consecutive corner angles per cop pair"


@CheckRegistry.register("C21", tolerance=IDENTITY_TOL, samples=2000, trace=True)
def check_beta_bounds(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """beta <= pi - alpha where the right-angled quadrilateral exists; the three-cop lower bound where defined."""
    trace = trace or _canned_bisector(int(rng.integers(1 << 31)), samples, n=3)
    worst = _Worst()
    degenerate = False
    for note in trace.annotations_of("bisector"):
        if len(note["pairs"]) > 3:
            degenerate = True
        for alpha, beta, low, applies in zip(note["alphas"], note["betas"], note["beta_lower"], note["upper_applies"]):
            if alpha is None:
                continue
            if applies:
                worst.update(beta - (math.pi - alpha), alpha=alpha, beta=beta, bound="upper")
            if low is not None:
                worst.update(low - beta, alpha=alpha, beta=beta, lower=low, bound="lower")
    note = "lower bound not checked for four or more cops (degenerate formula)" if degenerate else "bisector turns"
    return worst, note


@CheckRegistry.register("B23", tolerance=IDENTITY_TOL, samples=2000, trace=True)
def check_ball_guard(
    rng: np.random.Generator, samples: int, trace: Optional[Trace], surface: Optional[Surface]
) -> Tuple[_Worst, str]:
    """The ball guard gains radius at least as fast as the robber closes in; guarded radii never shrink."""
    trace = trace or _canned_ball(int(rng.integers(1 << 31)), samples)
    worst = _Worst()
    radius = None
    for note in trace.annotations_of("ball-guard"):
        if note["intercept"]:
            break
        shrink = radius - note["radius"] if radius is not None else 0.0
        worst.update(max(-note["slack"], shrink), **note)
        radius = note["radius"]
    return worst, "guard turns before the interception"


def verify(
    check_id: str,
    samples: Optional[int] = None,
    seed: int = 7,
    trace: Optional[Trace] = None,
    surface: Optional[Surface] = None,
) -> CheckReport:
    """Run one check.

    Args:
        check_id: One of ``CheckRegistry.ids()``.
        samples: Sample count (rounds of the canned game for trace checks).
        seed: Seed of the sampling generator.
        trace: Recorded trace for the trace checks.
        surface: Surface for the surface checks; S(2) by default.

    Raises:
        UnknownCheck: For an id that is not registered.
    """
    check = CheckRegistry.get(check_id)
    samples = check.samples if samples is None else samples
    if samples < 1:
        raise BadParameters(f"{check_id} needs at least one sample, got {samples}")
    rng = np.random.default_rng(seed)
    worst, note = check.func(rng, samples, trace, surface)
    if worst.count == 0:
        note = f"{note}; nothing to evaluate"
    report = CheckReport(
        id=check.id,
        samples=worst.count,
        max_violation=worst.value,
        witness=worst.witness,
        passed=worst.value <= check.tolerance,
        tolerance=check.tolerance,
        note=note,
    )
    level = logging.INFO if report.passed else logging.WARNING
    logger.log(level, f"{check.id}: max violation {report.max_violation:.3g} over {report.samples} samples")
    return report


def verify_all(
    ids: Optional[Sequence[str]] = None,
    samples: Optional[int] = None,
    seed: int = 7,
    surface: Optional[Surface] = None,
) -> Dict[str, Any]:
    """Run several checks and collect ``{passed, reports}``."""
    reports = [verify(i, samples, seed, surface=surface) for i in (ids or CheckRegistry.ids())]
    return {"passed": all(r.passed for r in reports), "reports": [r.to_dict() for r in reports]}

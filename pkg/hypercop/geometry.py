"""Numerical primitives for the Poincare disk (curvature -1).

Points are stored as Euclidean coordinates inside the open unit disk and handled
internally as Python ``complex`` numbers. Geodesics are stored by their ordered
ideal endpoints on the unit circle; the diameter/arc description is derived
from them. Every geodesic carries an isometric *frame* mapping the real
diameter onto it with -1 -> tail and +1 -> head, so that most constructions
reduce to the real axis.

Isometries use the unit-determinant disk form ``z -> (a z + b) / (conj(b) z + conj(a))``
with ``|a|^2 - |b|^2 = 1``, optionally preceded by complex conjugation for
orientation-reversing maps.
"""

import cmath
import logging
import math
from dataclasses import dataclass
from functools import cached_property
from typing import List, Optional, Sequence

import numpy as np

from .exceptions import BadParameters, CoincidentPoints, NumericalDomain, OutsideDisk

logger = logging.getLogger(__name__)

GEOM_TOL = 1e-9
ANGLE_TOL = 1e-6
SAMPLE_TOL = 1e-7
COINCIDENT_TOL = 1e-12
SNAP_TOL = 1e-12
DOMAIN_TOL = 1e-9
# |tail + head| below this reports the carrier as a diameter (arc center beyond 1e6)
DIAMETER_SNAP = 2e-6


def safe_acosh(x: float) -> float:
    """acosh with rounding guard.

    Arguments within ``DOMAIN_TOL`` below 1 are snapped to 1.

    Raises:
        NumericalDomain: If ``x`` is below 1 by more than ``DOMAIN_TOL``.
    """
    if x < 1.0:
        if 1.0 - x > DOMAIN_TOL:
            raise NumericalDomain(f"acosh argument {x!r} is below 1")
        if 1.0 - x > SNAP_TOL:
            logger.debug(f"Snapping acosh argument {x!r} to 1")
        return 0.0
    return math.acosh(x)


def safe_atanh(x: float) -> float:
    """atanh with rounding guard.

    Raises:
        NumericalDomain: If ``|x|`` exceeds 1 by more than ``DOMAIN_TOL``.
    """
    if abs(x) >= 1.0:
        if abs(x) - 1.0 > DOMAIN_TOL:
            raise NumericalDomain(f"atanh argument {x!r} is outside (-1, 1)")
        logger.debug(f"Snapping atanh argument {x!r} into the open interval")
        x = math.copysign(1.0 - SNAP_TOL, x)
    return math.atanh(x)


@dataclass(frozen=True)
class Point:
    """A point of the open unit disk."""

    x: float
    y: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        # written so that NaN coordinates are rejected too
        if not self.x * self.x + self.y * self.y < 1.0:
            raise OutsideDisk(f"({self.x}, {self.y}) is not inside the unit disk")

    @classmethod
    def from_complex(cls, z: complex) -> "Point":
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @property
    def norm(self) -> float:
        return math.hypot(self.x, self.y)

    def to_list(self) -> List[float]:
        return [self.x, self.y]


ORIGIN = Point(0.0, 0.0)


@dataclass(frozen=True)
class Isometry:
    """Disk isometry ``z -> (a w + b) / (conj(b) w + conj(a))`` with ``w = conj(z)`` if ``conj``."""

    alpha: complex = 1 + 0j
    beta: complex = 0j
    conj: bool = False

    @classmethod
    def identity(cls) -> "Isometry":
        return cls()

    def apply_z(self, z: complex) -> complex:
        if self.conj:
            z = z.conjugate()
        return (self.alpha * z + self.beta) / (self.beta.conjugate() * z + self.alpha.conjugate())

    def __call__(self, p: Point) -> Point:
        return Point.from_complex(self.apply_z(p.z))

    def apply_many(self, zs: np.ndarray) -> np.ndarray:
        """Apply the map to an array of complex coordinates."""
        if self.conj:
            zs = np.conj(zs)
        return (self.alpha * zs + self.beta) / (np.conj(self.beta) * zs + np.conj(self.alpha))

    def compose(self, other: "Isometry") -> "Isometry":
        """Return ``self o other`` (apply ``other`` first)."""
        a2, b2 = other.alpha, other.beta
        if self.conj:
            a2, b2 = a2.conjugate(), b2.conjugate()
        alpha = self.alpha * a2 + self.beta * b2.conjugate()
        beta = self.alpha * b2 + self.beta * a2.conjugate()
        return Isometry(alpha, beta, self.conj != other.conj).normalized()

    def inverse(self) -> "Isometry":
        if self.conj:
            return Isometry(self.alpha, -self.beta.conjugate(), True)
        return Isometry(self.alpha.conjugate(), -self.beta, False)

    def normalized(self) -> "Isometry":
        """Rescale so that ``|alpha|^2 - |beta|^2 = 1``."""
        det = abs(self.alpha) ** 2 - abs(self.beta) ** 2
        if det <= 0.0:
            raise NumericalDomain(f"Isometry lost its determinant: {det!r}")
        s = math.sqrt(det)
        return Isometry(self.alpha / s, self.beta / s, self.conj)

    def is_identity(self, tol: float = GEOM_TOL) -> bool:
        return (
            not self.conj
            and abs(self.beta) <= tol
            and abs(self.alpha.imag) <= tol
            and abs(abs(self.alpha.real) - 1.0) <= tol
        )

    @property
    def translation_length(self) -> float:
        """Minimal displacement ``inf_p dist(p, m(p))``; 0 for elliptic maps."""
        if self.conj:
            return math.acosh(max(abs(abs(self.alpha) ** 2 + (self.beta * self.beta).real), 1.0))
        return 2.0 * math.acosh(max(abs(self.alpha.real), 1.0))

    def to_list(self) -> List[object]:
        return [self.alpha.real, self.alpha.imag, self.beta.real, self.beta.imag, self.conj]

    @classmethod
    def from_list(cls, data: Sequence[object]) -> "Isometry":
        a_re, a_im, b_re, b_im, conj = data
        return cls(
            complex(float(a_re), float(a_im)),  # type: ignore[arg-type]
            complex(float(b_re), float(b_im)),  # type: ignore[arg-type]
            bool(conj),
        ).normalized()


CONJUGATION = Isometry(1 + 0j, 0j, True)


def _to_origin_z(z: complex) -> Isometry:
    s = math.sqrt(1.0 - abs(z) ** 2)
    return Isometry(complex(1.0 / s, 0.0), -z / s, False)


def to_origin(p: Point) -> Isometry:
    """The translation along the geodesic through ``p`` and O sending ``p`` to O."""
    return _to_origin_z(p.z)


def rotation(theta: float) -> Isometry:
    """Rotation about O by ``theta``."""
    return Isometry(cmath.exp(0.5j * theta), 0j, False)


def _axis_translation(t: float) -> Isometry:
    return Isometry(complex(math.cosh(t / 2.0), 0.0), complex(math.sinh(t / 2.0), 0.0), False)


def _dist_z(z: complex, w: complex) -> float:
    den = math.sqrt((1.0 - abs(z) ** 2) * (1.0 - abs(w) ** 2))
    return 2.0 * math.asinh(abs(z - w) / den)


def dist(p: Point, q: Point) -> float:
    """Hyperbolic distance, ``2 asinh(|p - q| / sqrt((1 - |p|^2)(1 - |q|^2)))``.

    This equals ``acosh(1 + 2|p - q|^2 / ((1 - |p|^2)(1 - |q|^2)))`` and stays
    accurate for nearby points.
    """
    return _dist_z(p.z, q.z)


def dist_many(z0: complex, zs: np.ndarray) -> np.ndarray:
    """Distances from one complex coordinate to an array of them."""
    den = np.sqrt((1.0 - abs(z0) ** 2) * (1.0 - np.abs(zs) ** 2))
    return 2.0 * np.arcsinh(np.abs(zs - z0) / den)


def _require_distinct(p: Point, q: Point) -> float:
    d = dist(p, q)
    if d <= COINCIDENT_TOL:
        raise CoincidentPoints(f"{p} and {q} coincide")
    return d


def _frame_foot(w: complex) -> float:
    """Real coordinate of the foot of ``w`` on the real diameter."""
    x = w.real
    s = 1.0 + abs(w) ** 2
    return 2.0 * x / (s + math.sqrt(max(s * s - 4.0 * x * x, 0.0)))


@dataclass(frozen=True)
class Geodesic:
    """An oriented complete geodesic, stored by its ideal endpoints."""

    tail: complex
    head: complex

    def __post_init__(self) -> None:
        tail, head = complex(self.tail), complex(self.head)
        if abs(tail) == 0.0 or abs(head) == 0.0:
            raise BadParameters("Geodesic endpoints must lie on the unit circle")
        tail, head = tail / abs(tail), head / abs(head)
        if abs(tail - head) < COINCIDENT_TOL:
            raise BadParameters("Geodesic endpoints coincide")
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "head", head)

    @classmethod
    def diameter(cls, angle: float) -> "Geodesic":
        """The diameter running from ``-e^{i angle}`` to ``e^{i angle}``."""
        u = cmath.exp(1j * angle)
        return cls(-u, u)

    @cached_property
    def frame(self) -> Isometry:
        """Isometry taking the real diameter onto this geodesic (-1 -> tail, 1 -> head)."""
        m = (self.tail + self.head) / (2.0 + abs(self.tail - self.head))
        to_m = _to_origin_z(m)
        psi = cmath.phase(to_m.apply_z(self.head))
        return to_m.inverse().compose(rotation(psi))

    @cached_property
    def frame_inverse(self) -> Isometry:
        return self.frame.inverse()

    @property
    def kind(self) -> str:
        return "diameter" if abs(self.tail + self.head) < DIAMETER_SNAP else "arc"

    @property
    def center(self) -> Optional[complex]:
        """Euclidean center of the carrying circle (None for a diameter)."""
        if self.kind == "diameter":
            return None
        return (self.tail + self.head) / (1.0 + (self.tail * self.head.conjugate()).real)

    @property
    def radius(self) -> Optional[float]:
        if self.kind == "diameter":
            return None
        return abs(self.tail - self.head) / abs(self.tail + self.head)

    @property
    def direction(self) -> Optional[complex]:
        """Unit direction of a diameter (None for an arc)."""
        if self.kind == "diameter":
            return self.head
        return None

    def reversed(self) -> "Geodesic":
        return Geodesic(self.head, self.tail)

    def contains(self, p: Point, tol: float = GEOM_TOL) -> bool:
        return abs(signed_distance(self, p)) <= tol


def param_on(g: Geodesic, p: Point) -> float:
    """Signed arc parameter of the foot of ``p`` along ``g`` (0 at the frame origin)."""
    return 2.0 * safe_atanh(_frame_foot(g.frame_inverse.apply_z(p.z)))


def point_at(g: Geodesic, s: float) -> Point:
    """The point of ``g`` at arc parameter ``s``."""
    r = math.tanh(s / 2.0)
    if abs(r) >= 1.0:
        raise NumericalDomain(f"Arc parameter {s!r} is beyond double precision")
    return Point.from_complex(g.frame.apply_z(complex(r, 0.0)))


def signed_distance(g: Geodesic, p: Point) -> float:
    """Distance from ``p`` to ``g``, positive on the left of the oriented geodesic."""
    w = g.frame_inverse.apply_z(p.z)
    return math.asinh(2.0 * w.imag / (1.0 - abs(w) ** 2))


def geodesic_through(p: Point, q: Point) -> Geodesic:
    """The geodesic through ``p`` and ``q``, oriented from ``p`` towards ``q``.

    Raises:
        CoincidentPoints: If ``dist(p, q) <= 1e-12``.
    """
    _require_distinct(p, q)
    t = to_origin(p)
    u = t.apply_z(q.z)
    u /= abs(u)
    back = t.inverse()
    return Geodesic(back.apply_z(-u), back.apply_z(u))


def move_toward(p: Point, q: Point, t: float) -> Point:
    """Walk distance ``t`` from ``p`` along the geodesic towards ``q``.

    ``t`` may exceed ``dist(p, q)``; the walk then continues past ``q``.

    Raises:
        CoincidentPoints: If ``p`` and ``q`` coincide.
        NumericalDomain: If the destination is beyond double precision.
    """
    if t < 0:
        raise BadParameters(f"Negative walking distance: {t}")
    _require_distinct(p, q)
    to_p = to_origin(p)
    u = to_p.apply_z(q.z)
    u /= abs(u)
    r = math.tanh(t / 2.0)
    if r >= 1.0:
        raise NumericalDomain(f"Walking distance {t!r} is beyond double precision")
    return Point.from_complex(to_p.inverse().apply_z(u * r))


def point_in_direction(p: Point, angle: float, t: float) -> Point:
    """Walk distance ``t`` from ``p`` in the direction making ``angle`` with the O-ray chart."""
    r = math.tanh(t / 2.0)
    if r >= 1.0:
        raise NumericalDomain(f"Walking distance {t!r} is beyond double precision")
    return Point.from_complex(to_origin(p).inverse().apply_z(cmath.exp(1j * angle) * r))


def foot(g: Geodesic, p: Point) -> Point:
    """Orthogonal projection of ``p`` onto ``g``."""
    f = _frame_foot(g.frame_inverse.apply_z(p.z))
    return Point.from_complex(g.frame.apply_z(complex(f, 0.0)))


def reflect(g: Geodesic, p: Point) -> Point:
    """Reflection of ``p`` in ``g``."""
    w = g.frame_inverse.apply_z(p.z)
    return Point.from_complex(g.frame.apply_z(w.conjugate()))


def perpendicular(g: Geodesic, p: Point) -> Geodesic:
    """The geodesic through ``p`` orthogonal to ``g``, heading to the left of ``g``."""
    f = _frame_foot(g.frame_inverse.apply_z(p.z))
    low = (-1j + f) / (1.0 - 1j * f)
    high = (1j + f) / (1.0 + 1j * f)
    return Geodesic(g.frame.apply_z(low), g.frame.apply_z(high))


def midpoint(p: Point, q: Point) -> Point:
    d = _require_distinct(p, q)
    return move_toward(p, q, d / 2.0)


def bisector(p: Point, q: Point) -> Geodesic:
    """Perpendicular bisector of ``p`` and ``q``; ``p`` lies on its left."""
    return perpendicular(geodesic_through(p, q), midpoint(p, q))


def intersection(g1: Geodesic, g2: Geodesic) -> Optional[Point]:
    """The crossing point of two geodesics, or None if they do not cross."""
    inv = g1.frame_inverse
    a = inv.apply_z(g2.tail)
    b = inv.apply_z(g2.head)
    if a.imag * b.imag >= 0.0:
        return None
    s = a + b
    q = 1.0 + (a * b.conjugate()).real
    if q < 1e-12:
        x = 0.0
    else:
        den = s.real + math.copysign(math.sqrt(max(s.real * s.real - q * q, 0.0)), s.real)
        x = q / den if den != 0.0 else 0.0
    return Point.from_complex(g1.frame.apply_z(complex(x, 0.0)))


def on_segment(a: Point, b: Point, p: Point, tol: float = GEOM_TOL) -> bool:
    return dist(a, p) + dist(p, b) <= dist(a, b) + tol


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> Optional[Point]:
    """Crossing point of segments ``ab`` and ``cd``, or None."""
    if dist(a, b) <= COINCIDENT_TOL or dist(c, d) <= COINCIDENT_TOL:
        return None
    x = intersection(geodesic_through(a, b), geodesic_through(c, d))
    if x is None or not on_segment(a, b, x) or not on_segment(c, d, x):
        return None
    return x


def closest_reachable_on(g: Geodesic, origin: Point, budget: float, goal: Point) -> Optional[Point]:
    """Point of ``g`` within ``budget`` of ``origin`` that is closest to ``goal``.

    Returns None when ``g`` is farther than ``budget`` from ``origin``.
    """
    a = abs(signed_distance(g, origin))
    if a > budget + GEOM_TOL:
        return None
    s_f = param_on(g, origin)
    half = safe_acosh(math.cosh(budget) / math.cosh(a)) if budget > a else 0.0
    s = min(max(param_on(g, goal), s_f - half), s_f + half)
    return point_at(g, s)


@dataclass(frozen=True)
class Segment:
    """The geodesic segment from ``a`` to ``b``."""

    a: Point
    b: Point

    @cached_property
    def length(self) -> float:
        return dist(self.a, self.b)

    @cached_property
    def carrier(self) -> Geodesic:
        return geodesic_through(self.a, self.b)

    def point_at(self, s: float) -> Point:
        """Point at distance ``s`` from ``a``, clamped to the segment."""
        if s <= 0.0 or self.length <= COINCIDENT_TOL:
            return self.a
        if s >= self.length:
            return self.b
        return move_toward(self.a, self.b, s)

    def param_of(self, p: Point) -> float:
        """Arc parameter (from ``a``) of the projection of ``p`` onto the carrier."""
        return param_on(self.carrier, p) - param_on(self.carrier, self.a)

    def contains(self, p: Point, tol: float = GEOM_TOL) -> bool:
        return on_segment(self.a, self.b, p, tol)


def angle(at: Point, p: Point, q: Point) -> float:
    """Angle at ``at`` between the geodesics towards ``p`` and ``q``, in [0, pi]."""
    _require_distinct(at, p)
    _require_distinct(at, q)
    t = to_origin(at)
    return abs(cmath.phase(t.apply_z(q.z) / t.apply_z(p.z)))


def apply(m: Isometry, p: Point) -> Point:
    return m(p)


def compose(m1: Isometry, m2: Isometry) -> Isometry:
    return m1.compose(m2)


def inverse(m: Isometry) -> Isometry:
    return m.inverse()


def translation_along(g: Geodesic, t: float) -> Isometry:
    """Hyperbolic translation moving every point of ``g`` by ``t`` towards its head."""
    return g.frame.compose(_axis_translation(t)).compose(g.frame_inverse)


def rotation_about(p: Point, theta: float) -> Isometry:
    to_p = to_origin(p)
    return to_p.inverse().compose(rotation(theta)).compose(to_p)


def reflection_in(g: Geodesic) -> Isometry:
    return g.frame.compose(CONJUGATION).compose(g.frame_inverse)


def isometry_between(
    p1: Point,
    p2: Point,
    q1: Point,
    q2: Point,
    orientation_preserving: bool = True,
) -> Isometry:
    """An isometry with ``p1 -> q1`` and ``p2`` onto the ray from ``q1`` through ``q2``.

    When ``dist(p1, p2) == dist(q1, q2)`` this sends ``p2`` to ``q2``; the
    orientation flag selects between the two such maps.
    """

    def pointed(a: Point, b: Point) -> Isometry:
        t = to_origin(a)
        return rotation(-cmath.phase(t.apply_z(b.z))).compose(t)

    src = pointed(p1, p2)
    dst = pointed(q1, q2).inverse()
    if orientation_preserving:
        return dst.compose(src)
    return dst.compose(CONJUGATION).compose(src)


def right_hyp(a: float, b: float) -> float:
    """Hypotenuse of a right triangle with legs ``a`` and ``b``: ``cosh c = cosh a cosh b``."""
    return safe_acosh(math.cosh(a) * math.cosh(b))


def triangle_angle(opposite: float, side1: float, side2: float) -> float:
    """Angle opposite ``opposite`` by the hyperbolic law of cosines."""
    num = math.cosh(side1) * math.cosh(side2) - math.cosh(opposite)
    c = num / (math.sinh(side1) * math.sinh(side2))
    return math.acos(min(1.0, max(-1.0, c)))


def eta_bound(w: float, t1: float, t2: float) -> float:
    """Lower bound of the slope of ``x -> acosh(w cosh x)`` on ``[t1, t2]``.

    ``eta = w sinh(t1) / sqrt(w^2 - 1 + w^2 sinh(t2)^2)``; for ``t1 <= x < y <= t2``,
    ``acosh(w cosh y) - acosh(w cosh x) >= eta (y - x)``.

    Raises:
        BadParameters: If ``w <= 1``, ``t1 <= 0`` or ``t2 <= t1``.
    """
    if not w > 1.0 or not t1 > 0.0 or not t2 > t1:
        raise BadParameters(f"eta_bound needs w > 1 and 0 < t1 < t2, got {w}, {t1}, {t2}")
    return w * math.sinh(t1) / math.sqrt(w * w - 1.0 + w * w * math.sinh(t2) ** 2)


def min_advance(beta: float, step: float) -> float:
    """Guaranteed advance ``atanh(cos(pi/2 - beta/2) tanh(step))`` of a bisector."""
    if not 0.0 < beta < math.pi or step < 0.0:
        raise BadParameters(f"min_advance needs 0 < beta < pi and step >= 0, got {beta}, {step}")
    return safe_atanh(math.cos(math.pi / 2.0 - beta / 2.0) * math.tanh(step))

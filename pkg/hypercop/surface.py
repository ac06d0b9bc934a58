"""Fundamental polygons, compact surfaces and their deck groups.

A surface is the quotient of the Poincare disk by the group generated by the
side pairings of a regular polygon centred at the origin. Points of the
surface are represented by a canonical lift inside the polygon
(``SurfacePoint``); arbitrary disk points are brought there by ``reduce``.
"""

import logging
import math
import re
from dataclasses import dataclass, field
from functools import wraps
from threading import RLock
from typing import (
    Any,
    Callable,
    Dict,
    List,
    Optional,
    Protocol,
    Sequence,
    Tuple,
    TypeVar,
    runtime_checkable,
)

import numpy as np

from .config import AtlasConfig
from .exceptions import (
    BadGenus,
    BadParameters,
    BallTooLarge,
    NotHyperbolic,
    PairingMismatch,
    ReductionDiverged,
)
from .geometry import (
    GEOM_TOL,
    ORIGIN,
    Geodesic,
    Isometry,
    Point,
    Segment,
    _dist_z,
    dist,
    dist_many,
    geodesic_through,
    isometry_between,
    midpoint,
    signed_distance,
)

logger = logging.getLogger(__name__)

R = TypeVar("R")

FAMILIES = ("S", "S'", "N")
PAIRING_TOL = 1e-7
CYCLE_TOL = 1e-6
# orbit points are deduplicated on a grid of this Euclidean cell size
DEDUPE_CELL = 1e-8


def synchronized(func: Callable[..., R]) -> Callable[..., R]:
    """Serialize access to the lazily grown deck-group cache."""

    @wraps(func)
    def wrapper(self: "Surface", *args: Any, **kwargs: Any) -> R:
        with self._lock:
            return func(self, *args, **kwargs)

    return wrapper


def halton(n: int, base: int, start: int = 1) -> np.ndarray:
    """First ``n`` terms of the van der Corput sequence in ``base`` from index ``start``."""
    index = np.arange(start, start + n, dtype=np.int64)
    result = np.zeros(n)
    f = 1.0
    while np.any(index > 0):
        f /= base
        result += f * (index % base)
        index //= base
    return result


@dataclass(frozen=True)
class FundamentalPolygon:
    """Regular ``k``-gon centred at O with interior angle ``theta``.

    Vertex ``i`` (1-based) sits at polar angle ``2 pi i / k``. Edge ``a_i`` runs
    from ``v_i`` to ``v_{i+1}`` with the interior on its left.
    """

    k: int
    theta: float
    vertices: Tuple[Point, ...]
    circumradius: float
    inradius: float
    center: Point = ORIGIN

    def vertex(self, i: int) -> Point:
        return self.vertices[(i - 1) % self.k]

    def edge(self, i: int) -> Segment:
        return Segment(self.vertex(i), self.vertex(i + 1))

    def edge_geodesic(self, i: int) -> Geodesic:
        return geodesic_through(self.vertex(i), self.vertex(i + 1))

    def edge_midpoint(self, i: int) -> Point:
        return midpoint(self.vertex(i), self.vertex(i + 1))

    @property
    def side_length(self) -> float:
        return dist(self.vertices[0], self.vertices[1])

    def contains(self, p: Point, tol: float = GEOM_TOL) -> bool:
        """Whether ``p`` lies in the closed polygon, up to ``tol``."""
        return all(signed_distance(self.edge_geodesic(i), p) >= -tol for i in range(1, self.k + 1))

    def contains_many(self, zs: np.ndarray, tol: float = GEOM_TOL) -> np.ndarray:
        """Vectorized ``contains`` over complex coordinates."""
        inside = np.ones(zs.shape, dtype=bool)
        for i in range(1, self.k + 1):
            w = self.edge_geodesic(i).frame_inverse.apply_many(zs)
            # the sign of Im(w) is the side; the slack is converted to the frame chart
            inside &= w.imag >= -tol * (1.0 - np.abs(w) ** 2) / 2.0
        return inside


def build_polygon(k: int, theta: float) -> FundamentalPolygon:
    """Build the regular hyperbolic ``k``-gon with interior angle ``theta``.

    Args:
        k: Number of vertices.
        theta: Interior angle at every vertex, in radians.

    Returns:
        FundamentalPolygon: Vertices counter-clockwise at the circumradius
        ``acosh(cot(pi/k) cot(theta/2))``; the inradius satisfies
        ``cosh r = cos(theta/2) / sin(pi/k)``.

    Raises:
        NotHyperbolic: If ``(k - 2) pi - k theta <= 0``.
        BadParameters: If ``k < 3`` or ``theta <= 0``.
    """
    if k < 3 or not theta > 0.0:
        raise BadParameters(f"A polygon needs k >= 3 and theta > 0, got k={k}, theta={theta}")
    if (k - 2) * math.pi - k * theta <= 0.0:
        raise NotHyperbolic(f"P({k}, {theta}) has non-negative curvature")

    circumradius = math.acosh(1.0 / (math.tan(math.pi / k) * math.tan(theta / 2.0)))
    inradius = math.acosh(math.cos(theta / 2.0) / math.sin(math.pi / k))
    r = math.tanh(circumradius / 2.0)
    vertices = tuple(
        Point(r * math.cos(2.0 * math.pi * i / k), r * math.sin(2.0 * math.pi * i / k))
        for i in range(1, k + 1)
    )
    return FundamentalPolygon(k, theta, vertices, circumradius, inradius)


@dataclass(frozen=True)
class SidePairing:
    """Isometry carrying edge ``a_edge`` of the polygon onto edge ``a_partner``."""

    edge: int
    partner: int
    map: Isometry
    orientation_preserving: bool

    @property
    def conjugates_first(self) -> bool:
        return self.map.conj


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the surface, held by its canonical lift in the fundamental polygon."""

    rep: Point

    def to_list(self) -> List[float]:
        return self.rep.to_list()


@dataclass(frozen=True)
class DeckElement:
    """A deck transformation as a freely reduced word in the pairing generators.

    Letter ``+p`` is the map of pairing ``p`` (1-based), ``-p`` its inverse.
    """

    word: Tuple[int, ...] = ()
    map: Isometry = field(default_factory=Isometry.identity)

    def then(self, letter: int, generator: Isometry) -> "DeckElement":
        """Return ``self o generator``, where ``generator`` is the map of ``letter``."""
        word = self.word[:-1] if self.word and self.word[-1] == -letter else (*self.word, letter)
        return DeckElement(word, self.map.compose(generator))

    def inverse(self) -> "DeckElement":
        return DeckElement(tuple(-x for x in reversed(self.word)), self.map.inverse())

    def __len__(self) -> int:
        return len(self.word)


IDENTITY = DeckElement()


@runtime_checkable
class Arena(Protocol):
    """What the game engine and the strategies need from a playing field."""

    name: str
    recenters: bool
    systole: float
    diameter: float
    diameter_bound: float

    def project(self, p: Point) -> SurfacePoint: ...

    def reduce(self, p: Point) -> Tuple[SurfacePoint, DeckElement]: ...

    def surface_dist(self, x: SurfacePoint, y: SurfacePoint) -> float: ...

    def lifts_near(self, x: SurfacePoint, center: Point, radius: float) -> List[Point]: ...

    def nearest_lift(self, x: SurfacePoint, near: Point) -> Point: ...

    def to_dict(self) -> Dict[str, Any]: ...


@dataclass
class _Ball:
    radius: float
    elements: List[DeckElement]
    alphas: np.ndarray
    betas: np.ndarray
    conj: np.ndarray
    centers: np.ndarray
    dists: np.ndarray


class Surface:
    """A compact hyperbolic surface ``D / Gamma`` with ``Gamma`` generated by side pairings.

    Systole and diameter are computed when the surface is built and cached;
    the enumerated part of the deck group grows on demand behind a lock, so a
    surface may be shared between concurrent readers.
    """

    recenters = True

    def __init__(
        self,
        family: str,
        g: int,
        polygon: FundamentalPolygon,
        pairings: Sequence[SidePairing],
        config: Optional[AtlasConfig] = None,
    ):
        """Initialize the surface and compute its cached constants."""
        self.family = family
        self.g = g
        self.polygon = polygon
        self.pairings = tuple(pairings)
        self.config = config or AtlasConfig()
        self.name = f"{family}({g})"
        self._lock = RLock()
        self._ball_cache: Optional[_Ball] = None

        k = polygon.k
        self.partner: Dict[int, int] = {}
        self.side_maps: Dict[int, Isometry] = {}
        self.edge_letters: Dict[int, int] = {}
        for index, pairing in enumerate(self.pairings, start=1):
            i, j = pairing.edge, pairing.partner
            self.partner[i], self.partner[j] = j, i
            self.side_maps[j] = pairing.map
            self.side_maps[i] = pairing.map.inverse()
            self.edge_letters[j] = index
            self.edge_letters[i] = -index
        if sorted(self.side_maps) != list(range(1, k + 1)):
            raise PairingMismatch(f"{self.name}: pairings do not cover every edge once")

        self._side_inverses = {e: m.inverse() for e, m in self.side_maps.items()}
        self.neighbor_centers = np.array(
            [self.side_maps[e].apply_z(0j) for e in range(1, k + 1)],
            dtype=complex,
        )
        self._edge_geodesics = {e: polygon.edge_geodesic(e) for e in range(1, k + 1)}
        self._vertex_z = np.array([v.z for v in polygon.vertices], dtype=complex)

        self.vertex_classes: List[List[int]] = []
        # vertex index -> deck element G with G(v) = class representative
        self._corner_maps: Dict[int, DeckElement] = {}
        self._walk_corner_cycles()

        self.orientable = all(p.orientation_preserving for p in self.pairings)
        self.systole = self._compute_systole()
        self.diameter, self.diameter_resolution = self._estimate_diameter()
        self.diameter_bound = self.diameter + self.diameter_resolution
        logger.info(
            f"Built {self.name}: systole={self.systole:.6f}, diameter~{self.diameter:.6f} "
            f"(+{self.diameter_resolution:.3g})",
        )

    def generator(self, letter: int) -> Isometry:
        pairing = self.pairings[abs(letter) - 1]
        return pairing.map if letter > 0 else pairing.map.inverse()

    def element(self, word: Sequence[int]) -> DeckElement:
        """The deck element spelled by ``word``."""
        result = IDENTITY
        for letter in word:
            result = result.then(letter, self.generator(letter))
        return result

    def _cross(self, element: DeckElement, edge: int) -> DeckElement:
        return element.then(self.edge_letters[edge], self.side_maps[edge])

    def _nearest_vertex(self, z: complex) -> Tuple[int, float]:
        d = dist_many(z, self._vertex_z)
        i = int(np.argmin(d))
        return i + 1, float(d[i])

    def _walk_corner_cycles(self) -> None:
        k = self.polygon.k
        for start in range(1, k + 1):
            if start in self._corner_maps:
                continue
            base = self.polygon.vertex(start).z
            members = [start]
            self._corner_maps[start] = IDENTITY
            element, edge = IDENTITY, start
            for _ in range(k + 1):
                element = self._cross(element, edge)
                w, error = self._nearest_vertex(element.map.inverse().apply_z(base))
                if error > CYCLE_TOL:
                    raise PairingMismatch(f"{self.name}: corner walk left the vertex set ({error:.3g})")
                if w == start:
                    if not element.map.is_identity(CYCLE_TOL):
                        raise PairingMismatch(f"{self.name}: corner cycle at v{start} does not close")
                    break
                if w in self._corner_maps:
                    raise PairingMismatch(f"{self.name}: vertex v{w} reached twice")
                members.append(w)
                self._corner_maps[w] = element
                crossed = self.partner[edge]
                edge = w if crossed != w else (w - 2) % k + 1
            else:
                raise PairingMismatch(f"{self.name}: corner cycle at v{start} does not close")
            self.vertex_classes.append(sorted(members))
        logger.debug(f"{self.name}: vertex classes {self.vertex_classes}")

    def corner_cycle_error(self) -> float:
        """Largest deviation from the identity over the closed corner cycles."""
        worst = 0.0
        for members in self.vertex_classes:
            start = members[0]
            base = self.polygon.vertex(start).z
            element, edge = IDENTITY, start
            for _ in members:
                element = self._cross(element, edge)
                w, _ = self._nearest_vertex(element.map.inverse().apply_z(base))
                crossed = self.partner[edge]
                edge = w if crossed != w else (w - 2) % self.polygon.k + 1
            m = element.map
            worst = max(worst, abs(m.beta), abs(m.alpha.imag), abs(abs(m.alpha.real) - 1.0))
        return worst

    def reduce(self, p: Point) -> Tuple[SurfacePoint, DeckElement]:
        """Find the canonical lift of ``p`` and the deck element carrying it back.

        Returns:
            Tuple[SurfacePoint, DeckElement]: ``(x, G)`` with ``G.map(x.rep) = p``.

        Raises:
            ReductionDiverged: If no reducing word within the step limit exists.
        """
        z = p.z
        element = IDENTITY
        for _ in range(self.config.reduce_max_steps):
            d = dist_many(z, self.neighbor_centers)
            e = int(np.argmin(d)) + 1
            if d[e - 1] < _dist_z(z, 0j) - 1e-12:
                z = self._side_inverses[e].apply_z(z)
                element = self._cross(element, e)
            else:
                break
        else:
            raise ReductionDiverged(f"{p} did not reduce in {self.config.reduce_max_steps} steps")

        w, error = self._nearest_vertex(z)
        if error <= GEOM_TOL:
            corner = self._corner_maps[w]
            z = corner.map.apply_z(z)
            inv = corner.inverse()
            for letter in inv.word:
                element = element.then(letter, self.generator(letter))
        else:
            for e, carrier in self._edge_geodesics.items():
                if e > self.partner[e] and abs(signed_distance(carrier, Point.from_complex(z))) <= GEOM_TOL:
                    z = self._side_inverses[e].apply_z(z)
                    element = self._cross(element, e)
                    break
        return SurfacePoint(Point.from_complex(z)), element

    def project(self, p: Point) -> SurfacePoint:
        return self.reduce(p)[0]

    @synchronized
    def _ball(self, radius: float) -> _Ball:
        if self._ball_cache is not None and self._ball_cache.radius >= radius:
            return self._ball_cache

        # copies meeting a segment from O stay within one circumradius of it
        limit = radius + self.polygon.circumradius
        cap = self.config.ball_cap
        generators = [(self.edge_letters[e], self.side_maps[e]) for e in range(1, self.polygon.k + 1)]

        seen = {(0, 0)}
        found: List[Tuple[float, Tuple[int, ...], complex, complex, bool]] = [(0.0, (), 1 + 0j, 0j, False)]
        f_alpha = np.array([1 + 0j])
        f_beta = np.array([0j])
        f_conj = np.array([False])
        f_last = np.array([0])
        f_words: List[Tuple[int, ...]] = [()]

        # breadth-first by word length, one numpy batch per generator
        while f_words:
            layer: List[Tuple[float, Tuple[int, ...], complex, complex, bool]] = []
            for letter, m in generators:
                parents = np.flatnonzero(f_last != -letter)
                if parents.size == 0:
                    continue
                a1, b1, c1 = f_alpha[parents], f_beta[parents], f_conj[parents]
                a2 = np.where(c1, np.conj(m.alpha), m.alpha)
                b2 = np.where(c1, np.conj(m.beta), m.beta)
                alpha = a1 * a2 + b1 * np.conj(b2)
                beta = a1 * b2 + b1 * np.conj(a2)
                scale = np.sqrt(np.abs(alpha) ** 2 - np.abs(beta) ** 2)
                alpha, beta = alpha / scale, beta / scale
                centers = beta / np.conj(alpha)
                d = 2.0 * np.arctanh(np.minimum(np.abs(centers), 1.0 - 1e-16))

                for i in np.flatnonzero(d <= limit):
                    z = centers[i]
                    cx, cy = round(z.real / DEDUPE_CELL), round(z.imag / DEDUPE_CELL)
                    if any((cx + dx, cy + dy) in seen for dx in (-1, 0, 1) for dy in (-1, 0, 1)):
                        continue
                    seen.add((cx, cy))
                    word = (*f_words[parents[i]], letter)
                    layer.append((float(d[i]), word, complex(alpha[i]), complex(beta[i]), bool(c1[i] != m.conj)))
                if len(found) + len(layer) > cap:
                    raise BallTooLarge(f"Ball of radius {radius} on {self.name} exceeds {cap} elements")

            found.extend(layer)
            f_alpha = np.array([item[2] for item in layer], dtype=complex)
            f_beta = np.array([item[3] for item in layer], dtype=complex)
            f_conj = np.array([item[4] for item in layer], dtype=bool)
            f_last = np.array([item[1][-1] for item in layer], dtype=int)
            f_words = [item[1] for item in layer]

        found.sort(key=lambda item: (item[0], len(item[1]), item[1]))
        alphas = np.array([item[2] for item in found], dtype=complex)
        betas = np.array([item[3] for item in found], dtype=complex)
        self._ball_cache = _Ball(
            radius=radius,
            elements=[DeckElement(item[1], Isometry(item[2], item[3], item[4])) for item in found],
            alphas=alphas,
            betas=betas,
            conj=np.array([item[4] for item in found], dtype=bool),
            centers=betas / np.conj(alphas),
            dists=np.array([item[0] for item in found]),
        )
        logger.debug(f"{self.name}: enumerated {len(found)} deck elements to radius {limit:.3f}")
        return self._ball_cache

    def enumerate_ball(self, radius: float) -> List[DeckElement]:
        """Every deck element ``m`` with ``dist(O, m(O)) <= radius``, nearest first.

        Raises:
            BallTooLarge: If the enumeration exceeds ``AtlasConfig.ball_cap``.
        """
        if radius < 0:
            raise BadParameters(f"Negative ball radius: {radius}")
        ball = self._ball(radius)
        count = int(np.searchsorted(ball.dists, radius + 1e-12, side="right"))
        return ball.elements[:count]

    def _apply_ball(self, ball: _Ball, selection: np.ndarray, zs: np.ndarray) -> np.ndarray:
        a = ball.alphas[selection][:, None]
        b = ball.betas[selection][:, None]
        ys = np.where(ball.conj[selection][:, None], np.conj(zs)[None, :], zs[None, :])
        return (a * ys + b) / (np.conj(b) * ys + np.conj(a))

    def _lift_distances(self, xz: complex, ys: np.ndarray) -> np.ndarray:
        """Surface distances from the canonical lift ``xz`` to many canonical lifts."""
        rc = self.polygon.circumradius
        x_norm = _dist_z(xz, 0j)
        y_norm = dist_many(0j, ys)

        ball = self._ball(x_norm + 2.0 * rc)
        selection = dist_many(xz, ball.centers) <= 2.0 * rc
        best = dist_many(xz, self._apply_ball(ball, selection, ys)).min(axis=0)

        # any improving lift m(y) has its copy centre within best + |y| of x
        reach = float(np.max(best + y_norm))
        if reach > 2.0 * rc:
            ball = self._ball(x_norm + reach)
            selection = dist_many(xz, ball.centers) <= reach
            best = dist_many(xz, self._apply_ball(ball, selection, ys)).min(axis=0)
        return best

    def surface_dist(self, x: SurfacePoint, y: SurfacePoint) -> float:
        """Quotient distance: the shortest distance between lifts of ``x`` and ``y``."""
        d0 = dist(x.rep, y.rep)
        if d0 < self.systole / 2.0:
            return d0
        return float(self._lift_distances(x.rep.z, np.array([y.rep.z]))[0])

    def lifts_near(self, x: SurfacePoint, center: Point, radius: float) -> List[Point]:
        """Lifts of ``x`` within ``radius`` of ``center``, nearest first.

        Ties are broken by word length, then lexicographically by word.
        """
        return [p for p, _ in self.lifts_near_elements(x, center, radius)]

    def lifts_near_elements(
        self,
        x: SurfacePoint,
        center: Point,
        radius: float,
    ) -> List[Tuple[Point, DeckElement]]:
        """Like ``lifts_near`` but also returns the deck element of each lift."""
        c, to_center = self.reduce(center)
        reach = radius + _dist_z(c.rep.z, 0j) + _dist_z(x.rep.z, 0j)
        ball = self._ball(reach)
        count = int(np.searchsorted(ball.dists, reach + 1e-12, side="right"))
        selection = np.zeros(len(ball.elements), dtype=bool)
        selection[:count] = True
        images = self._apply_ball(ball, selection, np.array([x.rep.z]))[:, 0]
        d = dist_many(c.rep.z, images)

        hits = []
        for index in np.flatnonzero(d <= radius):
            element = self.element(to_center.word + ball.elements[int(index)].word)
            hits.append((float(d[index]), element))
        hits.sort(key=lambda item: (item[0], len(item[1]), item[1].word))
        return [(Point.from_complex(m.map.apply_z(x.rep.z)), m) for _, m in hits]

    def nearest_lift(self, x: SurfacePoint, near: Point) -> Point:
        """The lift of ``x`` closest to ``near``."""
        hits = self.lifts_near(x, near, self.diameter_bound)
        if not hits:
            # the canonical lifts of both points lie within one circumradius of O
            hits = self.lifts_near(x, near, 2.0 * self.polygon.circumradius)
        return hits[0]

    def _compute_systole(self) -> float:
        radius = self.config.systole_factor * 2.0 * self.polygon.inradius
        ball = self._ball(radius)
        count = int(np.searchsorted(ball.dists, radius + 1e-12, side="right"))
        a, b, conj = ball.alphas[1:count], ball.betas[1:count], ball.conj[1:count]
        preserving = 2.0 * np.arccosh(np.maximum(np.abs(a.real), 1.0))
        reversing = np.arccosh(np.maximum(np.abs(np.abs(a) ** 2 + (b * b).real), 1.0))
        lengths = np.where(conj, reversing, preserving)
        return float(lengths.min())

    def _polygon_samples(self, n: int, bases: Tuple[int, int]) -> np.ndarray:
        """``n`` low-discrepancy points of the polygon, uniform in hyperbolic area."""
        rc = self.polygon.circumradius
        points: List[np.ndarray] = []
        total, start = 0, 1
        while total < n:
            batch = max(2 * (n - total), 64)
            u, v = halton(batch, bases[0], start), halton(batch, bases[1], start)
            start += batch
            rho = np.arccosh(1.0 + u * (math.cosh(rc) - 1.0))
            zs = np.tanh(rho / 2.0) * np.exp(2j * math.pi * v)
            zs = zs[self.polygon.contains_many(zs)]
            points.append(zs)
            total += len(zs)
        return np.concatenate(points)[:n]

    def _estimate_diameter(self) -> Tuple[float, float]:
        cfg = self.config
        fixed = np.array(
            [0j]
            + [v.z for v in self.polygon.vertices]
            + [self.polygon.edge_midpoint(i).z for i in range(1, self.polygon.k + 1)],
            dtype=complex,
        )
        samples = np.concatenate([fixed, self._polygon_samples(cfg.diameter_samples, (2, 3))])
        pivots = np.concatenate([fixed, self._polygon_samples(cfg.diameter_pivots, (5, 7))])

        estimate = 0.0
        for xz in pivots:
            for lo in range(0, len(samples), cfg.diameter_chunk):
                chunk = samples[lo : lo + cfg.diameter_chunk]
                estimate = max(estimate, float(self._lift_distances(complex(xz), chunk).max()))

        probes = self._polygon_samples(512, (11, 13))
        resolution = 0.0
        for cloud in (samples, pivots):
            gaps = [float(dist_many(complex(z), cloud).min()) for z in probes]
            resolution += max(gaps)
        return estimate, resolution

    def to_dict(self) -> Dict[str, Any]:
        """Describe the surface as a JSON-compatible document."""
        return {
            "family": self.family,
            "g": self.g,
            "k": self.polygon.k,
            "theta": self.polygon.theta,
            "orientable": self.orientable,
            "circumradius": self.polygon.circumradius,
            "inradius": self.polygon.inradius,
            "systole": self.systole,
            "diameter": self.diameter,
            "diameter_resolution": self.diameter_resolution,
            "vertex_classes": self.vertex_classes,
            "generators": [p.map.to_list() for p in self.pairings],
        }


class HyperbolicPlane:
    """The whole Poincare disk as an arena (trivial deck group)."""

    name = "plane"
    recenters = False
    systole = math.inf
    diameter = math.inf
    diameter_bound = math.inf
    diameter_resolution = 0.0
    orientable = True

    def project(self, p: Point) -> SurfacePoint:
        return SurfacePoint(p)

    def reduce(self, p: Point) -> Tuple[SurfacePoint, DeckElement]:
        return SurfacePoint(p), IDENTITY

    def surface_dist(self, x: SurfacePoint, y: SurfacePoint) -> float:
        return dist(x.rep, y.rep)

    def enumerate_ball(self, radius: float) -> List[DeckElement]:
        if radius < 0:
            raise BadParameters(f"Negative ball radius: {radius}")
        return [IDENTITY]

    def lifts_near(self, x: SurfacePoint, center: Point, radius: float) -> List[Point]:
        return [x.rep] if dist(x.rep, center) <= radius else []

    def nearest_lift(self, x: SurfacePoint, near: Point) -> Point:
        return x.rep

    def to_dict(self) -> Dict[str, Any]:
        return {"family": "plane", "g": 0}


def _pairing(
    polygon: FundamentalPolygon,
    i: int,
    j: int,
    reverse_edge: bool,
) -> SidePairing:
    """Pair edge ``i`` with edge ``j`` (reversed when ``reverse_edge``)."""
    p1, p2 = polygon.vertex(i), polygon.vertex(i + 1)
    if reverse_edge:
        q1, q2 = polygon.vertex(j + 1), polygon.vertex(j)
    else:
        q1, q2 = polygon.vertex(j), polygon.vertex(j + 1)
    m = isometry_between(p1, p2, q1, q2, orientation_preserving=reverse_edge)

    error = max(dist(m(p1), q1), dist(m(p2), q2))
    if error > PAIRING_TOL:
        raise PairingMismatch(f"Pairing a{i} -> a{j} misses its endpoints by {error:.3g}")
    if signed_distance(polygon.edge_geodesic(j), m(ORIGIN)) >= 0.0:
        raise PairingMismatch(f"Pairing a{i} -> a{j} does not carry the polygon across a{j}")
    return SidePairing(i, (j - 1) % polygon.k + 1, m, reverse_edge)


def make_surface(family: str, g: int, config: Optional[AtlasConfig] = None) -> Surface:
    """Build ``S(g)``, ``S'(g)`` or ``N(g)``.

    Args:
        family: ``"S"`` (orientable, 4g-gon), ``"S'"`` (orientable, (4g+2)-gon)
            or ``"N"`` (non-orientable, 2g-gon).
        g: Genus parameter, at least 2.
        config: Atlas settings (ball cap, diameter sampling).

    Raises:
        BadGenus: If ``g < 2``.
        NotHyperbolic: For ``N(2)``, whose polygon is Euclidean.
    """
    family = family.replace("′", "'")
    if family not in FAMILIES:
        raise BadParameters(f"Unknown surface family {family!r}, expected one of {FAMILIES}")
    if g < 2:
        raise BadGenus(f"{family}(g) needs g >= 2, got {g}")

    if family == "S":
        polygon = build_polygon(4 * g, 2.0 * math.pi / (4 * g))
        pairs = []
        for i in range(1, g + 1):
            pairs.append((4 * i - 3, 4 * i - 1))
            pairs.append((4 * i - 2, 4 * i))
        pairings = [_pairing(polygon, i, j, reverse_edge=True) for i, j in pairs]
    elif family == "S'":
        polygon = build_polygon(4 * g + 2, 2.0 * math.pi / (2 * g + 1))
        pairings = [
            _pairing(polygon, i, i + 2 * g + 1, reverse_edge=True) for i in range(1, 2 * g + 2)
        ]
    else:
        polygon = build_polygon(2 * g, 2.0 * math.pi / (2 * g))
        pairings = [
            _pairing(polygon, 2 * i, (2 * i) % (2 * g) + 1, reverse_edge=False)
            for i in range(1, g + 1)
        ]
    return Surface(family, g, polygon, pairings, config)


def make_arena(family: str, g: int = 0, config: Optional[AtlasConfig] = None) -> Any:
    """``make_surface`` extended with the ``"plane"`` family."""
    if family == "plane":
        return HyperbolicPlane()
    return make_surface(family, g, config)


def surface_from_dict(data: Dict[str, Any], config: Optional[AtlasConfig] = None) -> Any:
    """Rebuild an arena from its ``to_dict`` document, checking stored generators.

    Raises:
        PairingMismatch: If stored generators differ from the rebuilt ones by more than 1e-7.
        BadParameters: If the document does not name a family.
    """
    try:
        family, g = data["family"], int(data.get("g", 0))
    except (KeyError, TypeError, ValueError) as e:
        raise BadParameters(f"Invalid surface document: {e}") from None
    arena = make_arena(family, g, config)
    stored = data.get("generators")
    if stored is not None and isinstance(arena, Surface):
        if len(stored) != len(arena.pairings):
            raise PairingMismatch(f"Expected {len(arena.pairings)} generators, got {len(stored)}")
        for row, pairing in zip(stored, arena.pairings):
            other = Isometry.from_list(row)
            m = pairing.map
            close = min(
                abs(other.alpha - m.alpha) + abs(other.beta - m.beta),
                abs(other.alpha + m.alpha) + abs(other.beta + m.beta),
            )
            if other.conj != m.conj or close > PAIRING_TOL:
                raise PairingMismatch(f"Stored generator {row} does not match {arena.name}")
    return arena


_NAME = re.compile(r"^\s*(S'|S′|S|N)\s*\(?\s*(\d+)\s*\)?\s*$")


def arena_from_name(name: str, config: Optional[AtlasConfig] = None) -> Any:
    """Build the arena a trace summary names: ``"S(2)"``, ``"S'(3)"``, ``"N(3)"`` or ``"plane"``.

    Raises:
        BadParameters: If the name is not recognized.
    """
    if name.strip() == "plane":
        return HyperbolicPlane()
    match = _NAME.match(name)
    if match is None:
        raise BadParameters(f"Unrecognized surface name {name!r}")
    return make_surface(match.group(1), int(match.group(2)), config)

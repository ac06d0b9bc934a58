import itertools
import math

import numpy as np
import pytest

from hypercop import AtlasConfig
from hypercop.exceptions import (
    BadGenus,
    BadParameters,
    BallTooLarge,
    NotHyperbolic,
    PairingMismatch,
)
from hypercop.geometry import ORIGIN, Point, dist
from hypercop.surface import (
    IDENTITY,
    HyperbolicPlane,
    SurfacePoint,
    build_polygon,
    halton,
    make_arena,
    make_surface,
    surface_from_dict,
)

from .conftest import random_point

OCTAGON_INRADIUS = 1.528571
OCTAGON_CIRCUMRADIUS = 2.448452
S2_SYSTOLE = 2 * math.acosh(1 + math.sqrt(2))


def test_build_polygon_octagon():
    p = build_polygon(8, math.pi / 4)
    assert p.inradius == pytest.approx(OCTAGON_INRADIUS, abs=1e-6)
    assert p.circumradius == pytest.approx(OCTAGON_CIRCUMRADIUS, abs=1e-6)

    # every vertex at the circumradius
    for v in p.vertices:
        assert dist(ORIGIN, v) == pytest.approx(p.circumradius, abs=1e-9)

    # interior angle theta at each vertex
    from hypercop.geometry import angle

    for i in range(1, 9):
        assert angle(p.vertex(i), p.vertex(i - 1), p.vertex(i + 1)) == pytest.approx(math.pi / 4, abs=1e-6)

    # edge midpoints at the inradius, side from the central right triangle
    assert dist(ORIGIN, p.edge_midpoint(1)) == pytest.approx(p.inradius, abs=1e-9)
    expected_side = 2 * math.asinh(math.sinh(p.circumradius) * math.sin(math.pi / 8))
    assert p.side_length == pytest.approx(expected_side, abs=1e-9)


def test_build_polygon_errors():
    with pytest.raises(NotHyperbolic):
        build_polygon(4, math.pi / 2)
    with pytest.raises(NotHyperbolic):
        build_polygon(6, 2 * math.pi / 3)
    with pytest.raises(BadParameters):
        build_polygon(2, 0.1)


def test_polygon_contains():
    p = build_polygon(8, math.pi / 4)
    assert p.contains(ORIGIN)
    assert p.contains(p.vertex(3))
    assert not p.contains(Point(0.95, 0.0))
    zs = np.array([0j, p.vertex(2).z, 0.95 + 0j])
    assert p.contains_many(zs).tolist() == [True, True, False]


def test_halton():
    assert halton(4, 2).tolist() == [0.5, 0.25, 0.75, 0.125]
    assert halton(3, 3).tolist() == pytest.approx([1 / 3, 2 / 3, 1 / 9])


def test_make_surface_s2(s2):
    assert s2.polygon.k == 8
    assert len(s2.pairings) == 4
    assert s2.orientable
    assert s2.vertex_classes == [list(range(1, 9))]
    assert s2.corner_cycle_error() < 1e-6

    # pairing maps carry edge endpoints onto their partners and preserve lengths
    for pairing in s2.pairings:
        a = s2.polygon.edge(pairing.edge)
        b = s2.polygon.edge(pairing.partner)
        assert dist(pairing.map(a.a), b.b) < 1e-7
        assert dist(pairing.map(a.b), b.a) < 1e-7
        assert not pairing.conjugates_first


def test_make_surface_families(atlas_config):
    s_prime = make_surface("S'", 2, atlas_config)
    assert s_prime.polygon.k == 10
    assert s_prime.polygon.theta == pytest.approx(2 * math.pi / 5)
    assert len(s_prime.pairings) == 5
    assert len(s_prime.vertex_classes) == 2
    assert s_prime.corner_cycle_error() < 1e-6

    s3 = make_surface("S", 3, atlas_config)
    assert s3.polygon.k == 12
    assert s3.polygon.theta == pytest.approx(math.pi / 6)
    assert s3.corner_cycle_error() < 1e-6


def test_make_surface_non_orientable(n3):
    assert n3.polygon.k == 6
    assert len(n3.pairings) == 3
    assert not n3.orientable
    assert all(p.conjugates_first for p in n3.pairings)
    assert n3.corner_cycle_error() < 1e-6


def test_make_surface_errors():
    with pytest.raises(BadGenus):
        make_surface("S", 1)
    # N(2) would be built on the Euclidean square
    with pytest.raises(NotHyperbolic):
        make_surface("N", 2)
    with pytest.raises(BadParameters):
        make_surface("T", 2)
    with pytest.raises(BallTooLarge):
        make_surface("S", 2, AtlasConfig(ball_cap=5, diameter_samples=16, diameter_pivots=2))


def test_reduce_inside(s2):
    p = Point(0.1, -0.2)
    x, element = s2.reduce(p)
    assert x.rep == p
    assert element.word == ()


def test_reduce_orbit_of_center(s2):
    first = s2.pairings[0].map
    x, element = s2.reduce(first(ORIGIN))
    assert dist(x.rep, ORIGIN) < 1e-9
    assert element.word == (1,)


def test_reduce_round_trip(s2, rng):
    for _ in range(300):
        p = random_point(rng, 5.0)
        x, element = s2.reduce(p)
        assert s2.polygon.contains(x.rep, 1e-9)
        assert dist(element.map(x.rep), p) < 1e-7
        # the word spells the map
        assert dist(s2.element(element.word).map(x.rep), p) < 1e-7


def test_reduce_canonical_boundary(s2):
    # every vertex reduces to the class representative v1
    for v in s2.polygon.vertices:
        x, element = s2.reduce(v)
        assert dist(x.rep, s2.polygon.vertex(1)) < 1e-9
        assert dist(element.map(x.rep), v) < 1e-7

    # points on a pair's larger-index edge move to the smaller one
    pairing = s2.pairings[0]
    on_partner = s2.polygon.edge(pairing.partner).point_at(0.4)
    x, _ = s2.reduce(on_partner)
    assert abs(s2.polygon.edge(pairing.edge).param_of(x.rep) - (s2.polygon.side_length - 0.4)) < 1e-7


def test_enumerate_ball(s2):
    assert s2.enumerate_ball(0.0) == [IDENTITY]

    ball = s2.enumerate_ball(3.06)
    assert ball[0] == IDENTITY
    lengths = [m.map.translation_length for m in ball[1:]]
    assert min(lengths) == pytest.approx(S2_SYSTOLE, abs=1e-3)

    with pytest.raises(BadParameters):
        s2.enumerate_ball(-1.0)


def test_enumerate_ball_matches_word_search(s2):
    radius = 4.5
    letters = [1, -1, 2, -2, 3, -3, 4, -4]
    found = set()
    for n in range(5):
        for word in itertools.product(letters, repeat=n):
            z = s2.element(word).map.apply_z(0j)
            if 2 * math.atanh(abs(z)) <= radius:
                found.add((round(z.real, 7), round(z.imag, 7)))
    assert len(s2.enumerate_ball(radius)) == len(found)


def test_systole(s2, n3):
    assert s2.systole == pytest.approx(S2_SYSTOLE, abs=1e-3)
    assert n3.systole > 0


def test_diameter(s2):
    assert s2.diameter <= 3.0572
    assert s2.diameter >= s2.polygon.circumradius - 1e-9
    assert s2.diameter_bound >= s2.diameter
    assert s2.diameter_resolution > 0


def test_surface_dist(s2, rng):
    o = s2.project(ORIGIN)
    v = s2.project(s2.polygon.vertex(1))
    assert s2.surface_dist(o, o) == 0.0
    assert s2.surface_dist(o, v) == pytest.approx(OCTAGON_CIRCUMRADIUS, abs=1e-6)

    samples = [s2.project(random_point(rng, 2.4)) for _ in range(12)]
    for x, y in itertools.combinations(samples, 2):
        d = s2.surface_dist(x, y)
        assert d == pytest.approx(s2.surface_dist(y, x), abs=1e-9)
        assert d <= dist(x.rep, y.rep) + 1e-12
    for x, y, z in itertools.combinations(samples[:8], 3):
        assert s2.surface_dist(x, z) <= s2.surface_dist(x, y) + s2.surface_dist(y, z) + 1e-9


def test_surface_dist_deck_invariance(s2, rng):
    x = s2.project(random_point(rng, 2.0))
    y = s2.project(random_point(rng, 2.0))
    for m in s2.enumerate_ball(4.0)[:20]:
        x2 = s2.project(m.map(x.rep))
        y2 = s2.project(m.map(y.rep))
        assert s2.surface_dist(x2, y2) == pytest.approx(s2.surface_dist(x, y), abs=1e-9)


def test_lifts_near(s2, rng):
    x = s2.project(Point(0.2, 0.3))
    assert x.rep in s2.lifts_near(x, x.rep, 0.1)

    for _ in range(50):
        x = s2.project(random_point(rng, 2.4))
        center = random_point(rng, 3.0)
        lifts = s2.lifts_near(x, center, s2.diameter_bound)
        assert lifts
        distances = [dist(center, p) for p in lifts]
        assert distances == sorted(distances)
        assert distances[-1] <= s2.diameter_bound + 1e-9
        for p in lifts:
            assert dist(s2.project(p).rep, x.rep) < 1e-7

    nearest = s2.nearest_lift(x, center)
    assert dist(nearest, center) == pytest.approx(s2.surface_dist(x, s2.project(center)), abs=1e-7)


def test_surface_document_round_trip(s2, atlas_config):
    doc = s2.to_dict()
    assert doc["k"] == 8
    assert len(doc["generators"]) == 4
    rebuilt = surface_from_dict(doc, atlas_config)
    assert rebuilt.name == "S(2)"

    doc["generators"][0] = [1.0, 0.0, 0.0, 0.0, False]
    with pytest.raises(PairingMismatch):
        surface_from_dict(doc, atlas_config)
    with pytest.raises(BadParameters):
        surface_from_dict({"g": 2})


def test_plane_arena(plane):
    p, q = Point(0.1, 0.2), Point(-0.5, 0.3)
    assert plane.project(p) == SurfacePoint(p)
    assert plane.surface_dist(SurfacePoint(p), SurfacePoint(q)) == dist(p, q)
    assert plane.lifts_near(SurfacePoint(p), q, 0.1) == []
    assert plane.nearest_lift(SurfacePoint(p), q) == p
    assert plane.enumerate_ball(5.0) == [IDENTITY]
    assert math.isinf(plane.diameter_bound)
    assert isinstance(make_arena("plane"), HyperbolicPlane)

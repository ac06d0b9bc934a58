"""Shared test fixtures and configuration."""

import numpy as np
import pytest

from hypercop import AtlasConfig, HyperbolicPlane, Point, make_surface
from hypercop.surface import Surface

# surface construction is eager, so the shared surfaces use light diameter sampling
FAST_ATLAS = {"diameter_samples": 256, "diameter_pivots": 8}


@pytest.fixture(scope="session")
def atlas_config() -> AtlasConfig:
    """Atlas settings with light diameter sampling."""
    return AtlasConfig(**FAST_ATLAS)


@pytest.fixture(scope="session")
def s2(atlas_config: AtlasConfig) -> Surface:
    """The genus-2 surface S(2) built from the regular octagon."""
    return make_surface("S", 2, atlas_config)


@pytest.fixture(scope="session")
def n3(atlas_config: AtlasConfig) -> Surface:
    """The non-orientable surface N(3) built from a regular hexagon."""
    return make_surface("N", 3, atlas_config)


@pytest.fixture(scope="session")
def plane() -> HyperbolicPlane:
    """The whole Poincare disk as an arena."""
    return HyperbolicPlane()


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded random generator for sampling tests."""
    return np.random.default_rng(7)


def random_point(rng: np.random.Generator, max_radius: float = 3.0) -> Point:
    """A random disk point within hyperbolic distance ``max_radius`` of O."""
    rho = rng.uniform(0.0, max_radius)
    phi = rng.uniform(0.0, 2.0 * np.pi)
    r = np.tanh(rho / 2.0)
    return Point(r * np.cos(phi), r * np.sin(phi))

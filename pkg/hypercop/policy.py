"""Policy base classes, the policy registry and the simplest policies.

Policies are named in run configs (``{"policy": "greedy_pursuit", "n": 2}``)
and looked up through ``PolicyRegistry``. Robber policies propose a path per
round; cop policies control one or more cops and answer every robber substep
with a ``CopDecision``.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import (
    Any,
    ClassVar,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
    Type,
    TypeVar,
    Union,
)

import numpy as np

from .config import ControllerConfig, PolicySpec
from .exceptions import BadParameters, ConfigInvalid
from .game import AgilityFunction, GameView, transform
from .geometry import COINCIDENT_TOL, ORIGIN, Isometry, Point, dist, move_toward, point_in_direction
from .surface import Arena, SurfacePoint

logger = logging.getLogger(__name__)

ROLES = ("robber", "cop")

Proposal = Union[None, Point, SurfacePoint, Sequence[Union[Point, SurfacePoint]]]
P = TypeVar("P", bound="Policy")


class PolicyRegistry:
    """Registry mapping ``(role, name)`` to policy classes."""

    _registry: ClassVar[Dict[Tuple[str, str], Type["Policy"]]] = {}

    @classmethod
    def register(cls, policy_cls: Type[P]) -> Type[P]:
        """Class decorator registering a policy under its ``role`` and ``name``."""
        if policy_cls.role not in ROLES or not policy_cls.name:
            raise TypeError(f"{policy_cls.__name__} needs a role in {ROLES} and a name")
        cls._registry[(policy_cls.role, policy_cls.name)] = policy_cls
        return policy_cls

    @classmethod
    def get(cls, role: str, name: str) -> Optional[Type["Policy"]]:
        """Get a policy class by role and name."""
        return cls._registry.get((role, name))

    @classmethod
    def names(cls, role: str) -> List[str]:
        return sorted(name for r, name in cls._registry if r == role)


class Policy:
    """Common state of robber and cop policies.

    Attributes listed in ``geometric`` hold points (or geodesics, segments,
    containers of them) in the game chart; the default ``recenter`` maps them
    along with the players.
    """

    name: ClassVar[str] = ""
    role: ClassVar[str] = ""
    geometric: ClassVar[Tuple[str, ...]] = ()

    def __init__(self) -> None:
        self.rng = np.random.default_rng(0)

    def bind(self, rng: np.random.Generator) -> None:
        """Hand the policy its seeded random generator."""
        self.rng = rng

    def recenter(self, m: Isometry) -> None:
        for attr in self.geometric:
            setattr(self, attr, transform(m, getattr(self, attr)))


class RobberPolicy(Policy):
    """A robber strategy; it also picks the agility and the starting lifts."""

    role = "robber"

    def __init__(self, tau: float = 0.1, cop_distance: float = 1.0):
        super().__init__()
        if not tau > 0 or not cop_distance > 0:
            raise BadParameters(f"tau and cop_distance must be positive, got {tau}, {cop_distance}")
        self.tau = tau
        self.cop_distance = cop_distance

    def agility(self, arena: Arena) -> AgilityFunction:
        return AgilityFunction.constant(self.tau)

    def initial_positions(self, arena: Arena, n_cops: int) -> Tuple[Point, List[Point]]:
        """Robber at O, cops at equal angles around it at ``cop_distance``."""
        cops = [point_in_direction(ORIGIN, 2.0 * math.pi * i / n_cops, self.cop_distance) for i in range(n_cops)]
        return ORIGIN, cops

    def move(self, view: GameView) -> Proposal:
        """Return a target, a list of waypoints, or None to stay."""
        raise NotImplementedError


@dataclass
class CopDecision:
    """The answer of a cop policy to one robber substep.

    ``targets`` holds one entry per controlled cop (None = stay); ``relifts``
    maps local cop indices to replacement lifts and is only honoured together
    with ``phase_start``.
    """

    targets: List[Optional[Union[Point, SurfacePoint]]] = field(default_factory=list)
    events: List[str] = field(default_factory=list)
    annotations: List[Dict[str, Any]] = field(default_factory=list)
    relifts: Dict[int, Point] = field(default_factory=dict)
    phase_start: bool = False


class CopPolicy(Policy):
    """A strategy controlling ``n_cops`` cops."""

    role = "cop"
    n_cops: int = 1

    def start(self, view: GameView) -> None:
        """Called once before the first round."""

    def on_phase_start(self, view: GameView) -> Dict[int, Point]:
        """Called before the robber moves in the first round of a phase; may re-lift cops."""
        return {}

    def split(self, view: GameView, path: Sequence[Point]) -> List[Point]:
        """Points where the robber's path must be cut into substeps."""
        return []

    def moves(self, view: GameView) -> CopDecision:
        raise NotImplementedError


def step_toward(p: Point, q: Point, budget: float) -> Point:
    """``q`` if it is within ``budget`` of ``p``, else the point ``budget`` along ``pq``."""
    d = dist(p, q)
    if d <= budget or d <= COINCIDENT_TOL:
        return q
    return move_toward(p, q, budget)


def robber_lift_near(view: GameView, p: Point) -> Point:
    """The lift of the robber's surface position closest to ``p``."""
    return view.arena.nearest_lift(view.arena.project(view.robber), p)


def cop_lifts_near(view: GameView, p: Point) -> List[Point]:
    """For every cop, the lift of its surface position closest to ``p``."""
    return [view.arena.nearest_lift(view.arena.project(c), p) for c in view.cops]


@PolicyRegistry.register
class StayRobber(RobberPolicy):
    name = "stay"

    def move(self, view: GameView) -> Proposal:
        return None


@PolicyRegistry.register
class StayCop(CopPolicy):
    name = "stay"

    def __init__(self, n: int = 1):
        super().__init__()
        if n < 1:
            raise BadParameters(f"A policy controls at least one cop, got {n}")
        self.n_cops = n

    def moves(self, view: GameView) -> CopDecision:
        return CopDecision(targets=[None] * self.n_cops)


@PolicyRegistry.register
class GreedyPursuit(CopPolicy):
    """Every cop walks straight at the nearest lift of the robber with its full budget."""

    name = "greedy_pursuit"

    def __init__(self, n: int = 1):
        super().__init__()
        if n < 1:
            raise BadParameters(f"A policy controls at least one cop, got {n}")
        self.n_cops = n

    def moves(self, view: GameView) -> CopDecision:
        targets: List[Optional[Union[Point, SurfacePoint]]] = []
        for cop in view.mine:
            targets.append(step_toward(cop, robber_lift_near(view, cop), view.budget))
        return CopDecision(targets=targets)


def build_policy(
    role: str,
    spec: Union[PolicySpec, Dict[str, Any]],
    controller: Optional[ControllerConfig] = None,
) -> Policy:
    """Instantiate a registered policy from its run-config entry.

    Policies declaring ``accepts_controller_config`` receive ``controller``
    unless the entry sets ``config`` itself.

    Raises:
        ConfigInvalid: For unknown names or unusable parameters.
    """
    if isinstance(spec, dict):
        spec = PolicySpec.model_validate(spec)
    cls = PolicyRegistry.get(role, spec.policy)
    if cls is None:
        known = ", ".join(PolicyRegistry.names(role))
        raise ConfigInvalid(f"Unknown {role} policy {spec.policy!r} (known: {known})")
    params = spec.params
    if getattr(cls, "accepts_controller_config", False) and controller is not None:
        params.setdefault("config", controller)
    try:
        return cls(**params)
    except (TypeError, BadParameters) as e:
        raise ConfigInvalid(f"{role} policy {spec.policy!r}: {e}") from None


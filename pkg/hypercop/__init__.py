"""Cops and robbers on compact hyperbolic surfaces."""

from .capture import BisectorCapture, FiveCopCatch
from .config import AtlasConfig, Config, ControllerConfig, GameConfig, RunConfig
from .controller import TwoCopController
from .evaders import FleeOneCop, FleeTwoCops, GreedyFlee, RandomWalk, TowardB
from .game import AgilityFunction, Game, GameView, PhaseSchedule, Trace, TraceRecord, run
from .geometry import Geodesic, Isometry, Point, Segment, dist
from .guards import BallGuard, GuardSegment
from .lemmas import CheckReport, verify, verify_all
from .policy import (
    CopDecision,
    CopPolicy,
    GreedyPursuit,
    PolicyRegistry,
    RobberPolicy,
    StayCop,
    StayRobber,
    build_policy,
)
from .serializer import SerializableType, Serializer
from .surface import (
    FundamentalPolygon,
    HyperbolicPlane,
    Surface,
    SurfacePoint,
    arena_from_name,
    make_arena,
    make_surface,
    surface_from_dict,
)

__all__ = [
    "AgilityFunction",
    "AtlasConfig",
    "BallGuard",
    "BisectorCapture",
    "CheckReport",
    "Config",
    "ControllerConfig",
    "CopDecision",
    "CopPolicy",
    "FiveCopCatch",
    "FleeOneCop",
    "FleeTwoCops",
    "FundamentalPolygon",
    "Game",
    "GameConfig",
    "GameView",
    "Geodesic",
    "GreedyFlee",
    "GreedyPursuit",
    "GuardSegment",
    "HyperbolicPlane",
    "Isometry",
    "PhaseSchedule",
    "Point",
    "PolicyRegistry",
    "RandomWalk",
    "RobberPolicy",
    "RunConfig",
    "Segment",
    "SerializableType",
    "Serializer",
    "StayCop",
    "StayRobber",
    "Surface",
    "SurfacePoint",
    "TowardB",
    "Trace",
    "TraceRecord",
    "TwoCopController",
    "arena_from_name",
    "build_policy",
    "dist",
    "make_arena",
    "make_surface",
    "run",
    "surface_from_dict",
    "verify",
    "verify_all",
]

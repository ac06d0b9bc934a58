"""Configuration management for hypercop."""

import logging
import os
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Union

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .exceptions import ConfigInvalid
from .serializer import Serializer

logger = logging.getLogger(__name__)


@dataclass
class AtlasConfig:
    """Settings for surface construction and deck-group enumeration."""

    ball_cap: int = 1_000_000
    reduce_max_steps: int = 64
    diameter_samples: int = 10_000
    diameter_pivots: int = 64
    diameter_chunk: int = 2048
    systole_factor: float = 1.5

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        self.validate()

    def validate(self) -> None:
        """Validate configuration values."""
        if self.ball_cap < 1:
            raise ConfigInvalid(f"Invalid ball cap: {self.ball_cap}")

        if self.reduce_max_steps < 1:
            raise ConfigInvalid(f"Invalid reduction step limit: {self.reduce_max_steps}")

        if self.diameter_samples < 1 or self.diameter_pivots < 1:
            raise ConfigInvalid(
                f"Invalid diameter sampling: {self.diameter_samples} samples, "
                f"{self.diameter_pivots} pivots",
            )

        if self.diameter_chunk < 1:
            raise ConfigInvalid(f"Invalid diameter chunk: {self.diameter_chunk}")

        if self.systole_factor <= 1.0:
            raise ConfigInvalid(f"Invalid systole factor: {self.systole_factor}")


@dataclass
class GameConfig:
    """Stop conditions and engine tolerances."""

    capture_tol: float = 1e-6
    eps: Optional[float] = None
    stop_on_eps: bool = False
    max_rounds: int = 10_000
    move_tol: float = 1e-9
    recenter_radius: float = 4.0
    cap_agility_at_diameter: bool = True
    max_invalid_moves: int = 2

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        self.validate()

    def validate(self) -> None:
        """Validate configuration values."""
        if self.capture_tol < 0:
            raise ConfigInvalid(f"Invalid capture tolerance: {self.capture_tol}")

        if self.eps is not None and self.eps < 0:
            raise ConfigInvalid(f"Invalid eps: {self.eps}")

        if self.max_rounds < 0:
            raise ConfigInvalid(f"Invalid max rounds: {self.max_rounds}")

        if self.move_tol < 0:
            raise ConfigInvalid(f"Invalid move tolerance: {self.move_tol}")

        if self.recenter_radius <= 0:
            raise ConfigInvalid(f"Invalid recenter radius: {self.recenter_radius}")

        if self.max_invalid_moves < 1:
            raise ConfigInvalid(f"Invalid max invalid moves: {self.max_invalid_moves}")


@dataclass
class ControllerConfig:
    """Distance multipliers of the two-cop controller, in units of the diameter."""

    phase_multiplier: float = 8.0
    anchor_multiplier: float = 3.0
    guard_multiplier: float = 1.0
    anchor_retries: int = 2

    def __post_init__(self) -> None:
        """Validate configuration after initialization."""
        self.validate()

    @classmethod
    def conservative(cls) -> "ControllerConfig":
        """Return the (32, 10, 8) multipliers, slow but with wide margins."""
        return cls(phase_multiplier=32.0, anchor_multiplier=10.0, guard_multiplier=8.0)

    def validate(self) -> None:
        """Validate configuration values."""
        for name in ("phase_multiplier", "anchor_multiplier", "guard_multiplier"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigInvalid(f"Invalid {name}: {value}")

        if self.anchor_retries < 1:
            raise ConfigInvalid(f"Invalid anchor retries: {self.anchor_retries}")

        if self.anchor_multiplier < self.guard_multiplier + 2:
            logger.warning(
                f"anchor_multiplier {self.anchor_multiplier} < guard_multiplier + 2; "
                "the second cop may not reach its guard segment in time",
            )


def _env_number(name: str, default: Union[int, float], cast: type) -> Any:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise ConfigInvalid(f"Invalid value for {name}: {raw!r}") from None


@dataclass
class Config:
    """Global configuration container."""

    atlas: AtlasConfig = field(default_factory=AtlasConfig)
    game: GameConfig = field(default_factory=GameConfig)
    controller: ControllerConfig = field(default_factory=ControllerConfig)

    @classmethod
    def from_env(cls) -> "Config":
        """Create configuration from ``HYPERCOP_*`` environment variables."""
        atlas = AtlasConfig(
            ball_cap=_env_number("HYPERCOP_BALL_CAP", 1_000_000, int),
            diameter_samples=_env_number("HYPERCOP_DIAMETER_SAMPLES", 10_000, int),
            diameter_pivots=_env_number("HYPERCOP_DIAMETER_PIVOTS", 64, int),
        )
        game = GameConfig(
            capture_tol=_env_number("HYPERCOP_CAPTURE_TOL", 1e-6, float),
            max_rounds=_env_number("HYPERCOP_MAX_ROUNDS", 10_000, int),
            recenter_radius=_env_number("HYPERCOP_RECENTER_RADIUS", 4.0, float),
            cap_agility_at_diameter=os.getenv("HYPERCOP_CAP_AGILITY", "true").lower() == "true",
        )
        controller = ControllerConfig(
            phase_multiplier=_env_number("HYPERCOP_PHASE_MULTIPLIER", 8.0, float),
            anchor_multiplier=_env_number("HYPERCOP_ANCHOR_MULTIPLIER", 3.0, float),
            guard_multiplier=_env_number("HYPERCOP_GUARD_MULTIPLIER", 1.0, float),
        )
        return cls(atlas=atlas, game=game, controller=controller)

    @classmethod
    def from_yaml(cls, path: str) -> "Config":
        """Create configuration from YAML file."""
        try:
            with open(path) as f:
                config_data = yaml.safe_load(f) or {}

            return cls(
                atlas=AtlasConfig(**config_data.get("atlas", {})),
                game=GameConfig(**config_data.get("game", {})),
                controller=ControllerConfig(**config_data.get("controller", {})),
            )
        except ConfigInvalid:
            raise
        except Exception as e:
            raise ConfigInvalid(f"Failed to load configuration from {path}: {e}") from None

    def to_dict(self) -> Dict[str, Any]:
        """Convert configuration to dictionary."""
        return {
            "atlas": asdict(self.atlas),
            "game": asdict(self.game),
            "controller": asdict(self.controller),
        }

    def validate(self) -> bool:
        """Validate the entire configuration."""
        self.atlas.validate()
        self.game.validate()
        self.controller.validate()
        return True


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SurfaceSpec(_Strict):
    """Which arena to play on."""

    family: Literal["S", "S'", "N", "plane"] = "S"
    g: int = Field(default=2, ge=0)


class AgilitySpec(_Strict):
    """An agility function; omitted in a run config to let the robber choose."""

    kind: Literal["constant", "harmonic", "table"] = "constant"
    value: Optional[float] = Field(default=None, gt=0)
    table: Optional[List[float]] = None

    @model_validator(mode="after")
    def _check_kind(self) -> "AgilitySpec":
        if self.kind == "table":
            if not self.table or any(v <= 0 for v in self.table):
                raise ValueError("table agility needs a non-empty list of positive values")
        elif self.value is None:
            raise ValueError(f"{self.kind} agility needs a positive value")
        return self


class PolicySpec(BaseModel):
    """A named policy; every other key is passed to the policy as a parameter."""

    model_config = ConfigDict(extra="allow")

    policy: str

    @property
    def params(self) -> Dict[str, Any]:
        """Policy parameters (all keys except ``policy``)."""
        return dict(self.model_extra or {})


class StopSpec(_Strict):
    """Stop conditions of a run."""

    capture_tol: float = Field(default=1e-6, ge=0)
    eps: Optional[float] = Field(default=None, ge=0)
    stop_on_eps: bool = False
    max_rounds: int = Field(default=10_000, ge=0)


class OutputSpec(_Strict):
    """File names written by ``simulate`` inside the output directory."""

    trace: str = "trace.jsonl"
    summary: str = "summary.json"
    annotations: str = "annotations.jsonl"


class InitialSpec(_Strict):
    """Explicit starting lifts overriding the robber's placement."""

    robber: Tuple[float, float]
    cops: List[Tuple[float, float]]


class RunConfig(_Strict):
    """A complete, schema-validated simulation request."""

    surface: Union[SurfaceSpec, Literal["plane"]] = Field(default_factory=SurfaceSpec)
    agility: Optional[AgilitySpec] = None
    robber: PolicySpec
    cops: List[PolicySpec] = Field(min_length=1)
    stop: StopSpec = Field(default_factory=StopSpec)
    seed: int = 0
    output: OutputSpec = Field(default_factory=OutputSpec)
    initial: Optional[InitialSpec] = None
    atlas: Dict[str, Any] = Field(default_factory=dict)
    controller: Dict[str, Any] = Field(default_factory=dict)

    @property
    def surface_spec(self) -> SurfaceSpec:
        """The surface entry normalized to a ``SurfaceSpec``."""
        if isinstance(self.surface, SurfaceSpec):
            return self.surface
        return SurfaceSpec(family="plane", g=0)

    def atlas_config(self, base: Optional[AtlasConfig] = None) -> AtlasConfig:
        """The atlas settings: ``base`` (library defaults if None) with the run's overrides."""
        return _build(AtlasConfig, {**asdict(base or AtlasConfig()), **self.atlas}, "atlas")

    def controller_config(self, base: Optional[ControllerConfig] = None) -> ControllerConfig:
        """The controller settings: ``base`` with the run's overrides."""
        return _build(ControllerConfig, {**asdict(base or ControllerConfig()), **self.controller}, "controller")

    def game_config(self, base: Optional[GameConfig] = None) -> GameConfig:
        """Engine settings: ``base`` with the stop conditions the run file sets."""
        base = base or GameConfig()
        if not self.stop.model_fields_set:
            return base
        return replace(base, **self.stop.model_dump(include=self.stop.model_fields_set))

    def resolve(self, base: "Config") -> "Config":
        """Layer this run's overrides on top of ``base``."""
        return Config(
            atlas=self.atlas_config(base.atlas),
            game=self.game_config(base.game),
            controller=self.controller_config(base.controller),
        )

    @classmethod
    def json_schema(cls) -> Dict[str, Any]:
        """Return the published JSON schema of run configs."""
        return cls.model_json_schema()

    @classmethod
    def from_dict(cls, data: Any) -> "RunConfig":
        """Validate a parsed document.

        Raises:
            ConfigInvalid: naming the first offending key.
        """
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            where = ".".join(str(part) for part in first["loc"]) or "<root>"
            raise ConfigInvalid(f"{where}: {first['msg']}") from None

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RunConfig":
        """Load a run config from a JSON (or YAML) file."""
        path = Path(path)
        try:
            raw = path.read_bytes()
            if path.suffix in (".yaml", ".yml"):
                data = yaml.safe_load(raw)
            else:
                data = Serializer().loads(raw)
        except Exception as e:
            raise ConfigInvalid(f"Failed to load configuration from {path}: {e}") from None
        return cls.from_dict(data)


def _build(cls: type, overrides: Dict[str, Any], section: str) -> Any:
    try:
        return cls(**overrides)
    except TypeError as e:
        raise ConfigInvalid(f"{section}: {e}") from None


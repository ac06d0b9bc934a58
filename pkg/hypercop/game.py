"""Turn-based pursuit on an arena.

The engine keeps every player as a lift in the Poincare disk. Rounds are
1-based; in round ``n`` the robber moves first (possibly along several
waypoints, each one a substep) and the cops answer substep by substep with
matching budgets. Win detection uses surface distances, strategies consume
lifts.
"""

import bisect
import logging
import math
from dataclasses import dataclass, field, replace
from functools import wraps
from pathlib import Path
from typing import (
    TYPE_CHECKING,
    Any,
    Callable,
    Dict,
    List,
    Optional,
    Sequence,
    Tuple,
    TypeVar,
    Union,
)

import numpy as np

from .config import AgilitySpec, GameConfig, OutputSpec
from .exceptions import (
    BadParameters,
    DivergenceExhausted,
    HypercopError,
    MoveTooLong,
    OutOfTurn,
    PolicyFailure,
)
from .geometry import (
    COINCIDENT_TOL,
    GEOM_TOL,
    ORIGIN,
    SAMPLE_TOL,
    Geodesic,
    Isometry,
    Point,
    Segment,
    dist,
    geodesic_through,
    move_toward,
    on_segment,
    point_at,
)
from .serializer import Serializer
from .surface import Arena, SurfacePoint

if TYPE_CHECKING:
    from .policy import CopDecision, CopPolicy, RobberPolicy

logger = logging.getLogger(__name__)

R = TypeVar("R")

AGILITY_KINDS = ("constant", "harmonic", "table")
PHASE_ROUND_LIMIT = 10_000_000
DEFAULT_PHASE_MULTIPLIER = 32.0
ROBBER = "robber"

Target = Union[Point, SurfacePoint]


def handle_policy_error(func: Callable[..., R]) -> Callable[..., R]:
    """Decorator for engine calls into policy code."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> R:
        try:
            return func(*args, **kwargs)
        except HypercopError:
            raise
        except Exception as e:  # pylint: disable=broad-except
            logger.exception("Error executing policy")
            raise PolicyFailure(f"Error executing policy: {e}") from e

    return wrapper


@handle_policy_error
def _ask(method: Callable[..., R], *args: Any) -> R:
    return method(*args)


def transform(m: Isometry, obj: Any) -> Any:
    """Apply an isometry to points, geodesics and segments nested in ``obj``.

    Geodesics are carried by two interior points, the one nearest the origin
    and the one a unit further on, not by their ideal endpoints.
    """
    if isinstance(obj, Point):
        return m(obj)
    if isinstance(obj, Geodesic):
        return geodesic_through(m(point_at(obj, 0.0)), m(point_at(obj, 1.0)))
    if isinstance(obj, Segment):
        return Segment(m(obj.a), m(obj.b))
    if isinstance(obj, list):
        return [transform(m, item) for item in obj]
    if isinstance(obj, tuple):
        return tuple(transform(m, item) for item in obj)
    if isinstance(obj, dict):
        return {key: transform(m, value) for key, value in obj.items()}
    return obj


@dataclass(frozen=True)
class AgilityFunction:
    """The step-length budget ``tau(n)`` of round ``n``.

    ``constant`` returns ``value``, ``harmonic`` returns ``value / n`` and
    ``table`` cycles through ``table``. Every value is clipped to ``cap``.
    """

    kind: str = "constant"
    value: float = 0.1
    table: Tuple[float, ...] = ()
    cap: float = math.inf

    def __post_init__(self) -> None:
        if self.kind not in AGILITY_KINDS:
            raise BadParameters(f"Unknown agility kind {self.kind!r}, expected one of {AGILITY_KINDS}")
        if self.kind == "table":
            table = tuple(float(v) for v in self.table)
            if not table or any(not v > 0 for v in table):
                raise BadParameters("Table agility needs a non-empty list of positive values")
            object.__setattr__(self, "table", table)
        elif not self.value > 0 or math.isinf(self.value):
            raise BadParameters(f"Agility value must be positive and finite, got {self.value}")
        if not self.cap > 0:
            raise BadParameters(f"Agility cap must be positive, got {self.cap}")

    @classmethod
    def constant(cls, value: float) -> "AgilityFunction":
        return cls("constant", value)

    @classmethod
    def harmonic(cls, value: float) -> "AgilityFunction":
        return cls("harmonic", value)

    @classmethod
    def from_table(cls, values: Sequence[float]) -> "AgilityFunction":
        return cls("table", table=tuple(values))

    @classmethod
    def from_spec(cls, spec: AgilitySpec) -> "AgilityFunction":
        if spec.kind == "table":
            return cls.from_table(spec.table or ())
        return cls(spec.kind, float(spec.value or 0.0))

    def __call__(self, n: int) -> float:
        if n < 1:
            raise BadParameters(f"Rounds are numbered from 1, got {n}")
        if self.kind == "constant":
            value = self.value
        elif self.kind == "harmonic":
            value = self.value / n
        else:
            value = self.table[(n - 1) % len(self.table)]
        return min(value, self.cap)

    def values(self, start: int, count: int) -> np.ndarray:
        """``tau(start), ..., tau(start + count - 1)`` as an array."""
        n = np.arange(start, start + count, dtype=np.float64)
        if self.kind == "constant":
            out = np.full(count, self.value)
        elif self.kind == "harmonic":
            out = self.value / n
        else:
            index = (np.arange(start, start + count) - 1) % len(self.table)
            out = np.asarray(self.table)[index]
        return np.minimum(out, self.cap)

    def capped(self, cap: float) -> "AgilityFunction":
        return replace(self, cap=min(self.cap, cap))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind}
        if self.kind == "table":
            data["table"] = list(self.table)
        else:
            data["value"] = self.value
        if not math.isinf(self.cap):
            data["cap"] = self.cap
        return data


class PhaseSchedule:
    """Phase boundaries ``t_0 = 0 < t_1 < ...``, extended on demand.

    Each window ``t_i + 1 .. t_{i+1}`` is the shortest run of rounds whose
    agility sum reaches ``multiplier * diameter``.
    """

    def __init__(
        self,
        tau: AgilityFunction,
        diameter: float,
        multiplier: float = 32.0,
        round_limit: int = PHASE_ROUND_LIMIT,
    ):
        if not 0 < diameter < math.inf:
            raise BadParameters(f"Phase schedule needs a finite positive diameter, got {diameter}")
        if not multiplier > 0:
            raise BadParameters(f"Phase multiplier must be positive, got {multiplier}")
        self.tau = tau
        self.diameter = diameter
        self.target = multiplier * diameter
        self.round_limit = round_limit
        self.boundaries: List[int] = [0]

    def _extend(self) -> None:
        start = self.boundaries[-1]
        n, total, chunk = start, 0.0, 64
        while n - start < self.round_limit:
            count = min(chunk, start + self.round_limit - n)
            sums = total + np.cumsum(self.tau.values(n + 1, count))
            hit = int(np.searchsorted(sums, self.target, side="left"))
            if hit < count:
                self.boundaries.append(n + hit + 1)
                return
            total = float(sums[-1])
            n += count
            chunk *= 2
        raise DivergenceExhausted(
            f"{self.round_limit} rounds after round {start} sum to {total:.6g} < {self.target:.6g}",
        )

    def boundary(self, i: int) -> int:
        """``t_i``."""
        while len(self.boundaries) <= i:
            self._extend()
        return self.boundaries[i]

    def phase_of(self, n: int) -> Tuple[int, int]:
        """Return ``(i, t_i)`` for the phase holding round ``n`` (``t_i < n <= t_{i+1}``)."""
        if n < 1:
            raise BadParameters(f"Rounds are numbered from 1, got {n}")
        while self.boundaries[-1] < n:
            self._extend()
        i = bisect.bisect_left(self.boundaries, n) - 1
        return i, self.boundaries[i]

    def is_phase_start(self, n: int) -> bool:
        return self.phase_of(n)[1] == n - 1


def phase_schedule(
    tau: AgilityFunction,
    diameter: float,
    count: int,
    multiplier: float = 32.0,
) -> List[int]:
    """The first ``count + 1`` phase boundaries ``t_0, ..., t_count``.

    Raises:
        DivergenceExhausted: If 10**7 rounds cannot fill a window.
    """
    schedule = PhaseSchedule(tau, diameter, multiplier)
    schedule.boundary(count)
    return schedule.boundaries[: count + 1]


@dataclass
class TraceRecord:
    """One turn: where the mover ended and how far the opponents are."""

    round: int
    substep: int
    mover: str
    pos: List[float]
    lift: List[float]
    dists: List[float]
    lift_dists: List[float]
    events: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "round": self.round,
            "substep": self.substep,
            "mover": self.mover,
            "pos": self.pos,
            "lift": self.lift,
            "dists": self.dists,
            "lift_dists": self.lift_dists,
            "events": self.events,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TraceRecord":
        return cls(
            round=int(data["round"]),
            substep=int(data["substep"]),
            mover=str(data["mover"]),
            pos=list(data["pos"]),
            lift=list(data["lift"]),
            dists=list(data["dists"]),
            lift_dists=list(data.get("lift_dists", [])),
            events=list(data.get("events", [])),
        )


@dataclass
class Trace:
    """Turn records of one run plus strategy annotations and the outcome."""

    records: List[TraceRecord] = field(default_factory=list)
    annotations: List[Dict[str, Any]] = field(default_factory=list)
    capture: bool = False
    capture_round: Optional[int] = None
    eps_close_round: Optional[int] = None
    min_dist: float = math.inf
    rounds: int = 0
    phases: int = 0
    seed: int = 0
    surface: str = ""
    robber: str = ""
    cops: List[str] = field(default_factory=list)

    def summary(self) -> Dict[str, Any]:
        return {
            "min_dist": self.min_dist,
            "capture": self.capture,
            "capture_round": self.capture_round,
            "eps_close_round": self.eps_close_round,
            "rounds": self.rounds,
            "phases": self.phases,
            "seed": self.seed,
            "surface": self.surface,
            "robber": self.robber,
            "cops": self.cops,
        }

    def annotations_of(self, kind: str) -> List[Dict[str, Any]]:
        return [a for a in self.annotations if a.get("kind") == kind]

    def records_of(self, mover: str) -> List[TraceRecord]:
        return [r for r in self.records if r.mover == mover]

    def write(self, directory: Union[str, Path], output: Optional[OutputSpec] = None) -> Dict[str, Path]:
        """Write the trace, annotations and summary files into ``directory``."""
        output = output or OutputSpec()
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        serializer = Serializer()
        paths = {
            "trace": directory / output.trace,
            "annotations": directory / output.annotations,
            "summary": directory / output.summary,
        }
        serializer.write_jsonl(paths["trace"], (r.to_dict() for r in self.records))
        serializer.write_jsonl(paths["annotations"], self.annotations)
        serializer.write_json(paths["summary"], self.summary())
        return paths

    @classmethod
    def load(cls, path: Union[str, Path], output: Optional[OutputSpec] = None) -> "Trace":
        """Read a trace JSONL file and, when present, its sibling summary and annotations."""
        output = output or OutputSpec()
        path = Path(path)
        serializer = Serializer()
        trace = cls(records=[TraceRecord.from_dict(row) for row in serializer.read_jsonl(path)])
        annotations = path.parent / output.annotations
        if annotations.exists():
            trace.annotations = serializer.read_jsonl(annotations)
        summary = path.parent / output.summary
        if summary.exists():
            data = serializer.read_json(summary)
            for key in ("capture", "capture_round", "eps_close_round", "rounds", "phases", "seed"):
                if key in data:
                    setattr(trace, key, data[key])
            trace.min_dist = data.get("min_dist") if data.get("min_dist") is not None else math.inf
            trace.surface = data.get("surface", "")
            trace.robber = data.get("robber", "")
            trace.cops = list(data.get("cops", []))
        return trace


@dataclass
class GameView:
    """What a policy sees when it is asked for a move.

    ``own`` lists the global indices of the cops the asked policy controls.
    """

    arena: Arena
    round: int
    substep: int
    budget: float
    tau: AgilityFunction
    robber: Point
    robber_before: Point
    cops: List[Point]
    own: List[int]
    phase_index: int
    phase_start: int
    diameter: float
    hints: Dict[str, Any]

    @property
    def mine(self) -> List[Point]:
        return [self.cops[i] for i in self.own]

    def surface_dist(self, p: Point, q: Point) -> float:
        return self.arena.surface_dist(self.arena.project(p), self.arena.project(q))


class Game:
    """A single pursuit game driven either by policies (``play``) or by hand.

    Hand-driven games call ``submit_move`` / ``subdivide_step`` in turn order:
    the robber, then ``c1 .. cn``, once per robber substep.
    """

    def __init__(
        self,
        arena: Arena,
        robber: "RobberPolicy",
        cops: Sequence["CopPolicy"],
        tau: Optional[AgilityFunction] = None,
        config: Optional[GameConfig] = None,
        seed: int = 0,
        initial: Optional[Tuple[Point, Sequence[Point]]] = None,
        phase_multiplier: Optional[float] = None,
    ):
        """Initialize the game and place the players.

        Without an explicit ``phase_multiplier`` the first cop policy that
        declares one sets the phase window; otherwise it is 32 diameters.
        """
        if not cops:
            raise BadParameters("A game needs at least one cop policy")
        self.arena = arena
        self.config = config or GameConfig()
        self.seed = seed
        self.robber_policy = robber
        self.cop_policies = list(cops)
        robber.bind(np.random.default_rng([seed, 0]))
        for index, policy in enumerate(self.cop_policies, start=1):
            policy.bind(np.random.default_rng([seed, index]))

        self.diameter = float(arena.diameter_bound)
        tau = tau or robber.agility(arena)
        if self.config.cap_agility_at_diameter and math.isfinite(self.diameter):
            tau = tau.capped(self.diameter)
        self.tau = tau
        if phase_multiplier is None:
            declared = [p.phase_multiplier for p in self.cop_policies if hasattr(p, "phase_multiplier")]
            phase_multiplier = declared[0] if declared else DEFAULT_PHASE_MULTIPLIER
        self.phase_multiplier = phase_multiplier
        self.schedule = (
            PhaseSchedule(tau, self.diameter, phase_multiplier) if math.isfinite(self.diameter) else None
        )

        self.teams: List[Tuple["CopPolicy", List[int]]] = []
        offset = 0
        for policy in self.cop_policies:
            self.teams.append((policy, list(range(offset, offset + policy.n_cops))))
            offset += policy.n_cops
        self.n_cops = offset

        if initial is None:
            initial = _ask(robber.initial_positions, arena, self.n_cops)
        robber_lift, cop_lifts = initial
        if len(cop_lifts) != self.n_cops:
            raise BadParameters(f"Expected {self.n_cops} cop positions, got {len(cop_lifts)}")
        self.robber_lift: Point = robber_lift
        self.robber_before: Point = robber_lift
        self.cop_lifts: List[Point] = list(cop_lifts)
        self.hints: Dict[str, Any] = {}

        self.round = 0
        self.substep = 0
        self.tau_n = 0.0
        self.phase_index = 0
        self.phase_start = 0
        self.finished = False
        self._expected = ROBBER
        self._round_open = False
        self._phase_open = False
        self._plan: List[Point] = []
        self._budgets: List[float] = []
        self._pending: List[str] = []
        self._invalid: Dict[str, int] = {}

        self.trace = Trace(
            seed=seed,
            surface=arena.name,
            robber=robber.name,
            cops=[policy.name for policy in self.cop_policies],
        )
        self._check_start()

    @property
    def movers(self) -> List[str]:
        return [ROBBER] + [f"c{i + 1}" for i in range(self.n_cops)]

    @property
    def expected(self) -> str:
        return self._expected

    @property
    def budget(self) -> float:
        """Budget of the player on turn."""
        if self._expected == ROBBER:
            return self.tau(self.round + 1) if not self._round_open else self.tau_n
        return self._budgets[self.substep - 1]

    def view(self, own: Optional[List[int]] = None) -> GameView:
        return GameView(
            arena=self.arena,
            round=self.round,
            substep=self.substep,
            budget=self.budget,
            tau=self.tau,
            robber=self.robber_lift,
            robber_before=self.robber_before,
            cops=list(self.cop_lifts),
            own=list(own or []),
            phase_index=self.phase_index,
            phase_start=self.phase_start,
            diameter=self.diameter,
            hints=self.hints,
        )

    def annotate(self, annotation: Dict[str, Any]) -> None:
        """Attach a strategy annotation to the current round and substep."""
        self.trace.annotations.append({"round": self.round, "substep": self.substep, **annotation})

    def _surface_dists(self) -> List[float]:
        r = self.arena.project(self.robber_lift)
        return [self.arena.surface_dist(r, self.arena.project(c)) for c in self.cop_lifts]

    def _check_start(self) -> None:
        d = min(self._surface_dists())
        self.trace.min_dist = d
        if d <= self.config.capture_tol:
            self.trace.capture = True
            self.trace.capture_round = 0
            self.finished = True
            logger.info(f"Capture before the first round (distance {d:.3g})")
        elif self.config.eps is not None and d <= self.config.eps:
            self.trace.eps_close_round = 0
            self.finished = self.config.stop_on_eps

    def _require_turn(self, mover: str) -> None:
        if self.finished:
            raise OutOfTurn(f"{mover} cannot move: the game is over")
        if mover != self._expected:
            raise OutOfTurn(f"{mover} moved out of turn; {self._expected} is on turn")

    def _resolve(self, target: Target, current: Point) -> Point:
        if isinstance(target, SurfacePoint):
            return self.arena.nearest_lift(target, current)
        if isinstance(target, Point):
            return target
        raise BadParameters(f"Unsupported move target {target!r}")

    def _open_round(self) -> None:
        if self._round_open:
            return
        self.round += 1
        self.substep = 0
        self.tau_n = self.tau(self.round)
        if self.schedule is not None:
            self.phase_index, self.phase_start = self.schedule.phase_of(self.round)
        else:
            self.phase_index, self.phase_start = 0, 0
        self._phase_open = self.phase_start == self.round - 1
        if self._phase_open:
            logger.debug(f"Phase {self.phase_index} starts with round {self.round}")
            self._pending.append("phase-start")
        self._round_open = True

    def _record(self, mover: str, lift: Point, events: List[str]) -> None:
        pos = self.arena.project(lift)
        if mover == ROBBER:
            others = self.cop_lifts
        else:
            others = [self.robber_lift]
        dists = [self.arena.surface_dist(pos, self.arena.project(o)) for o in others]
        record = TraceRecord(
            round=self.round,
            substep=self.substep,
            mover=mover,
            pos=pos.to_list(),
            lift=lift.to_list(),
            dists=dists,
            lift_dists=[dist(lift, o) for o in others],
            events=events,
        )
        self.trace.records.append(record)

        d = min(dists)
        self.trace.min_dist = min(self.trace.min_dist, d)
        if d <= self.config.capture_tol:
            self.trace.capture = True
            self.trace.capture_round = self.round
            record.events.append("capture")
            self.finished = True
            logger.info(f"Capture in round {self.round} by {mover} (distance {d:.3g})")
        elif self.config.eps is not None and d <= self.config.eps and self.trace.eps_close_round is None:
            self.trace.eps_close_round = self.round
            record.events.append("eps-close")
            self.finished = self.config.stop_on_eps

    def subdivide_step(self, waypoints: Sequence[Target]) -> None:
        """Move the robber along ``waypoints``, each leg a separate substep.

        The cops' budget for substep ``j < m`` is the length of the robber's
        substep ``j``; the last budget is the remainder of ``tau(n)``.

        Raises:
            OutOfTurn: If the robber is not on turn.
            MoveTooLong: If the path is longer than ``tau(n)``.
        """
        self._require_turn(ROBBER)
        self._open_round()
        path = [self.robber_lift]
        for target in waypoints:
            path.append(self._resolve(target, path[-1]))
        lengths = [dist(a, b) for a, b in zip(path, path[1:])]
        if sum(lengths) > self.tau_n + self.config.move_tol:
            raise MoveTooLong(f"Robber path of length {sum(lengths):.9g} exceeds tau({self.round}) = {self.tau_n:.9g}")

        steps = [(p, d) for p, d in zip(path[1:], lengths) if d > COINCIDENT_TOL]
        if not steps:
            steps = [(self.robber_lift, 0.0)]
        self._plan = [p for p, _ in steps]
        head = [d for _, d in steps[:-1]]
        self._budgets = head + [max(self.tau_n - sum(head), 0.0)]
        self.substep = 0
        self._advance_robber()

    def _advance_robber(self) -> None:
        self.substep += 1
        self.robber_before = self.robber_lift
        self.robber_lift = self._plan[self.substep - 1]
        events, self._pending = self._pending, []
        self._record(ROBBER, self.robber_lift, events)
        self._phase_open = False
        self._expected = "c1"

    def submit_move(self, mover: str, target: Target, events: Optional[List[str]] = None) -> None:
        """Move ``mover`` to ``target`` (a lift, or a surface point reached by its nearest lift).

        Raises:
            OutOfTurn: If ``mover`` is not on turn.
            MoveTooLong: If the step exceeds the mover's budget.
        """
        if mover == ROBBER:
            self.subdivide_step([target])
            return
        lift = self._check_cop_move(mover, target)
        self._commit_cop_move(mover, lift, events)

    def _check_cop_move(self, mover: str, target: Target) -> Point:
        """Resolve and validate a cop move without touching the game state."""
        self._require_turn(mover)
        current = self.cop_lifts[int(mover[1:]) - 1]
        lift = self._resolve(target, current)
        step = dist(current, lift)
        budget = self._budgets[self.substep - 1]
        if step > budget + self.config.move_tol:
            raise MoveTooLong(f"{mover} step of length {step:.9g} exceeds its budget {budget:.9g}")
        return lift

    def _commit_cop_move(self, mover: str, lift: Point, events: Optional[List[str]] = None) -> None:
        i = int(mover[1:]) - 1
        self.cop_lifts[i] = lift
        self._record(mover, lift, list(events or []))
        if self.finished:
            return
        if i + 1 < self.n_cops:
            self._expected = f"c{i + 2}"
        elif self.substep < len(self._plan):
            self._advance_robber()
        else:
            self._close_round()

    def relift(self, index: int, lift: Point) -> None:
        """Replace the lift of cop ``index`` by another lift of the same surface point.

        Raises:
            OutOfTurn: Outside a phase start.
            BadParameters: If ``lift`` is not a lift of the cop's position.
        """
        if not self._phase_open:
            raise OutOfTurn("Cops may only be re-lifted when a phase starts")
        old = self.arena.project(self.cop_lifts[index])
        if self.arena.surface_dist(old, self.arena.project(lift)) > SAMPLE_TOL:
            raise BadParameters(f"{lift} is not a lift of cop c{index + 1}'s position")
        self.cop_lifts[index] = lift

    def _close_round(self) -> None:
        self._round_open = False
        self._expected = ROBBER
        if self.arena.recenters and dist(ORIGIN, self.robber_lift) > self.config.recenter_radius:
            self.recenter()

    def recenter(self) -> Isometry:
        """Apply the deck transformation bringing the robber's lift back to the polygon."""
        _, element = self.arena.reduce(self.robber_lift)
        m = element.map.inverse()
        self.robber_lift = m(self.robber_lift)
        self.robber_before = m(self.robber_before)
        self.cop_lifts = [m(c) for c in self.cop_lifts]
        self.hints = transform(m, self.hints)
        for policy in [self.robber_policy, *self.cop_policies]:
            try:
                _ask(policy.recenter, m)
            except PolicyFailure:
                raise
            except HypercopError as e:
                raise PolicyFailure(f"{policy.name} failed to follow the recentering: {e}") from e
        if self.trace.records:
            self.trace.records[-1].events.append("recenter")
        self.annotate({"kind": "recenter", "map": m.to_list(), "word": list(element.word)})
        logger.debug(f"Recentered after round {self.round} by a word of length {len(element)}")
        return m

    def _count_invalid(self, mover: str, error: Exception) -> None:
        count = self._invalid.get(mover, 0) + 1
        self._invalid[mover] = count
        logger.warning(f"Invalid move by {mover} in round {self.round}: {error}")
        if count >= self.config.max_invalid_moves:
            raise PolicyFailure(f"{mover} proposed {count} invalid moves in a row: {error}") from error

    def _robber_waypoints(self) -> List[Point]:
        proposal = _ask(self.robber_policy.move, self.view())
        if proposal is None:
            targets: List[Target] = []
        elif isinstance(proposal, (Point, SurfacePoint)):
            targets = [proposal]
        else:
            targets = list(proposal)
        try:
            path = [self.robber_lift]
            for target in targets:
                path.append(self._resolve(target, path[-1]))
            length = sum(dist(a, b) for a, b in zip(path, path[1:]))
            if length > self.tau_n + self.config.move_tol:
                raise MoveTooLong(f"Robber path of length {length:.9g} exceeds tau = {self.tau_n:.9g}")
        except (MoveTooLong, BadParameters) as e:
            self._count_invalid(ROBBER, e)
            self._pending.append("invalid-move")
            return []
        self._invalid[ROBBER] = 0
        return path[1:]

    def _merge_splits(self, path: List[Point], splits: Sequence[Point]) -> List[Point]:
        """Insert the cops' split points into the robber's polyline path."""
        if len(path) < 2:
            return []
        cum = [0.0]
        for a, b in zip(path, path[1:]):
            cum.append(cum[-1] + dist(a, b))
        cuts: List[Tuple[float, Point]] = [(t, p) for t, p in zip(cum[1:], path[1:])]
        for s in splits:
            for k, (a, b) in enumerate(zip(path, path[1:])):
                if cum[k + 1] - cum[k] <= COINCIDENT_TOL or not on_segment(a, b, s, SAMPLE_TOL):
                    continue
                t = cum[k] + dist(a, s)
                if t > GEOM_TOL and all(abs(t - other) > GEOM_TOL for other, _ in cuts):
                    cuts.append((t, move_toward(a, b, t - cum[k])))
                break
            else:
                logger.debug(f"Ignoring split point {s} off the robber's path")
        cuts.sort(key=lambda item: item[0])
        return [p for _, p in cuts]

    def _apply_decision(self, own: List[int], decision: "CopDecision") -> None:
        for annotation in decision.annotations:
            self.annotate(annotation)
        events = list(decision.events)
        if decision.phase_start:
            self._phase_open = True
            events.append("phase-start")
        for local, lift in decision.relifts.items():
            self.relift(own[local], lift)
        self._phase_open = False

        for local, index in enumerate(own):
            mover = f"c{index + 1}"
            target = decision.targets[local] if local < len(decision.targets) else None
            tags = events if local == 0 else []
            current = self.cop_lifts[index]
            try:
                lift = self._check_cop_move(mover, current if target is None else target)
                self._invalid[mover] = 0
            except (MoveTooLong, BadParameters) as e:
                self._count_invalid(mover, e)
                lift, tags = current, tags + ["invalid-move"]
            self._commit_cop_move(mover, lift, tags)
            if self.finished:
                return

    def _play_round(self) -> None:
        self._open_round()
        if self._phase_open:
            for policy, own in self.teams:
                relifts = _ask(policy.on_phase_start, self.view(own)) or {}
                for local, lift in relifts.items():
                    self.relift(own[local], lift)

        waypoints = self._robber_waypoints()
        path = [self.robber_lift] + waypoints
        splits: List[Point] = []
        for policy, own in self.teams:
            splits.extend(_ask(policy.split, self.view(own), path) or [])
        self.subdivide_step(self._merge_splits(path, splits))

        while self._round_open and not self.finished:
            for policy, own in self.teams:
                decision = _ask(policy.moves, self.view(own))
                self._apply_decision(own, decision)
                if self.finished:
                    return

    def play(self) -> Trace:
        """Run policies until capture, an eps-close stop or ``max_rounds``."""
        if not self.finished:
            for policy, own in self.teams:
                _ask(policy.start, self.view(own))
        while not self.finished and self.round < self.config.max_rounds:
            self._play_round()
        self.trace.rounds = self.round
        self.trace.phases = self.phase_index + 1 if self.round else 0
        logger.info(
            f"Game over after {self.round} rounds: capture={self.trace.capture}, "
            f"min distance {self.trace.min_dist:.6g}",
        )
        return self.trace


def run(
    arena: Arena,
    robber: "RobberPolicy",
    cops: Sequence["CopPolicy"],
    tau: Optional[AgilityFunction] = None,
    initial: Optional[Tuple[Point, Sequence[Point]]] = None,
    stop: Optional[GameConfig] = None,
    seed: int = 0,
    phase_multiplier: Optional[float] = None,
) -> Trace:
    """Play one game and return its trace.

    The robber policy chooses ``tau`` and the initial positions unless they
    are given explicitly.

    Raises:
        PolicyFailure: If a policy keeps proposing invalid moves or crashes.
    """
    game = Game(arena, robber, cops, tau, stop, seed, initial, phase_multiplier)
    return game.play()

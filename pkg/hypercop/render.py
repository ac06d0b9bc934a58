"""SVG pictures of the Poincare disk: tessellations and game traces."""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import drawsvg as draw
import numpy as np

from .config import AtlasConfig, OutputSpec
from .exceptions import ConfigInvalid, HypercopError
from .game import ROBBER, Trace, TraceRecord
from .geometry import COINCIDENT_TOL, Point, dist, to_origin
from .serializer import Serializer
from .surface import Surface, arena_from_name, surface_from_dict

logger = logging.getLogger(__name__)

SAMPLES_PER_STEP = 16


class Theme:
    """Colors and sizes of a rendered disk."""

    def __init__(
        self,
        background: str = "#ffffff",
        boundary: str = "#1e293b",
        tile_stroke: str = "#94a3b8",
        central_fill: str = "#e2e8f0",
        robber: str = "#dc2626",
        cops: Sequence[str] = ("#2563eb", "#16a34a", "#9333ea", "#ea580c", "#0891b2"),
        radius: float = 400.0,
        padding: float = 20.0,
    ):
        self.background = background
        self.boundary = boundary
        self.tile_stroke = tile_stroke
        self.central_fill = central_fill
        self.robber = robber
        self.cops = tuple(cops)
        self.radius = radius
        self.padding = padding

    def cop(self, index: int) -> str:
        return self.cops[index % len(self.cops)]


DEFAULT_THEME = Theme()


def geodesic_samples(a: complex, b: complex, samples: int = SAMPLES_PER_STEP) -> np.ndarray:
    """``samples + 1`` points of the geodesic segment from ``a`` to ``b``, evenly spaced in length."""
    pa, pb = Point.from_complex(a), Point.from_complex(b)
    length = dist(pa, pb)
    if length <= COINCIDENT_TOL:
        return np.full(samples + 1, a, dtype=complex)
    chart = to_origin(pa)
    w = chart.apply_z(b)
    radii = np.tanh(np.linspace(0.0, length, samples + 1) / 2.0)
    return chart.inverse().apply_many(radii * (w / abs(w)))


@dataclass
class PlayerPath:
    """The polyline of one player, broken where the trace recentered."""

    name: str
    pieces: List[np.ndarray]


def player_paths(trace: Trace, samples: int = SAMPLES_PER_STEP) -> List[PlayerPath]:
    """Sampled geodesic paths of the robber and every cop, in trace order."""
    recentered = {int(a["round"]) for a in trace.annotations_of("recenter") if "round" in a}
    movers = [ROBBER] + [f"c{i + 1}" for i in range(len(trace.cops))]
    seen = {r.mover for r in trace.records}
    movers += sorted(m for m in seen if m not in movers)

    paths = []
    for mover in movers:
        records = trace.records_of(mover)
        pieces: List[np.ndarray] = []
        current: List[np.ndarray] = []
        previous: Optional[TraceRecord] = None
        for record in records:
            z = complex(*record.lift)
            if previous is None or (previous.round in recentered and record.round > previous.round):
                if current:
                    pieces.append(np.concatenate(current))
                current = [np.array([z])]
            else:
                current.append(geodesic_samples(complex(*previous.lift), z, samples)[1:])
            previous = record
        if current:
            pieces.append(np.concatenate(current))
        paths.append(PlayerPath(mover, pieces))
    return paths


class DiskRenderer:
    """Draws tessellations of the Poincare disk and the paths of a game."""

    def __init__(self, theme: Optional[Theme] = None, samples: int = SAMPLES_PER_STEP):
        self.theme = theme or DEFAULT_THEME
        self.samples = samples

    def _xy(self, z: complex) -> List[float]:
        r = self.theme.radius
        return [z.real * r, -z.imag * r]

    def _flat(self, zs: Iterable[complex]) -> List[float]:
        out: List[float] = []
        for z in zs:
            out.extend(self._xy(complex(z)))
        return out

    def canvas(self) -> draw.Drawing:
        size = 2 * (self.theme.radius + self.theme.padding)
        d = draw.Drawing(size, size, origin="center")
        d.append(draw.Rectangle(-size / 2, -size / 2, size, size, fill=self.theme.background))
        return d

    def outline(self, surface: Surface) -> np.ndarray:
        """The boundary of the fundamental polygon as sampled geodesic edges."""
        vertices = [v.z for v in surface.polygon.vertices]
        edges = [
            geodesic_samples(a, b, self.samples)[:-1]
            for a, b in zip(vertices, vertices[1:] + vertices[:1])
        ]
        return np.concatenate(edges)

    def tessellate(self, d: draw.Drawing, arena: Any, ball: float) -> int:
        """Draw the polygon copies ``m(P)`` for deck elements within ``ball`` of O."""
        if not isinstance(arena, Surface):
            return 0
        outline = self.outline(arena)
        elements = arena.enumerate_ball(ball)
        group = draw.Group(class_="tessellation")
        for index, element in enumerate(elements):
            copy = element.map.apply_many(outline)
            group.append(
                draw.Lines(
                    *self._flat(copy),
                    close=True,
                    class_="tile",
                    fill=self.theme.central_fill if index == 0 else "none",
                    stroke=self.theme.tile_stroke,
                    stroke_width=1.0,
                ),
            )
        d.append(group)
        logger.debug(f"Drew {len(elements)} copies of the polygon of {arena.name} to radius {ball}")
        return len(elements)

    def boundary(self, d: draw.Drawing) -> None:
        d.append(
            draw.Circle(
                0, 0, self.theme.radius,
                class_="boundary",
                fill="none",
                stroke=self.theme.boundary,
                stroke_width=1.5,
            ),
        )

    def paths(self, d: draw.Drawing, trace: Trace) -> int:
        """Draw one path element per player."""
        count = 0
        for player in player_paths(trace, self.samples):
            color = self.theme.robber if player.name == ROBBER else self.theme.cop(_cop_index(player.name))
            path = draw.Path(
                class_="player",
                stroke=color,
                stroke_width=1.5,
                fill="none",
            )
            for piece in player.pieces:
                path.M(*self._xy(piece[0]))
                for z in piece[1:]:
                    path.L(*self._xy(z))
            path.append_title(player.name)
            d.append(path)
            count += 1
        return count

    def render_surface(self, arena: Any, ball: float = 0.0) -> draw.Drawing:
        d = self.canvas()
        self.tessellate(d, arena, ball)
        self.boundary(d)
        return d

    def render_trace(self, trace: Trace, arena: Any, ball: float = 0.0) -> draw.Drawing:
        d = self.render_surface(arena, ball)
        self.paths(d, trace)
        return d


def _cop_index(name: str) -> int:
    digits = name.removeprefix("c")
    return int(digits) - 1 if digits.isdigit() else 0


def load_input(path: Union[str, Path], config: Optional[AtlasConfig] = None) -> Dict[str, Any]:
    """Read a surface JSON or a trace JSONL into ``{"arena", "trace"}``.

    Raises:
        ConfigInvalid: If the file cannot be read or names no usable surface.
    """
    path = Path(path)
    try:
        if path.suffix == ".jsonl":
            trace = Trace.load(path, OutputSpec())
            if not trace.surface:
                raise ConfigInvalid(f"{path}: no sibling summary naming the surface")
            return {"arena": arena_from_name(trace.surface, config), "trace": trace}
        data = Serializer().read_json(path)
        return {"arena": surface_from_dict(data, config), "trace": None}
    except ConfigInvalid:
        raise
    except (HypercopError, OSError, ValueError, KeyError, TypeError) as e:
        raise ConfigInvalid(f"{path}: {e}") from None


def render_file(
    source: Union[str, Path],
    out: Union[str, Path],
    ball: float = 0.0,
    config: Optional[AtlasConfig] = None,
    theme: Optional[Theme] = None,
) -> Path:
    """Render a surface or trace file to an SVG file and return its path."""
    loaded = load_input(source, config)
    renderer = DiskRenderer(theme)
    if loaded["trace"] is None:
        drawing = renderer.render_surface(loaded["arena"], ball)
    else:
        drawing = renderer.render_trace(loaded["trace"], loaded["arena"], ball)
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    drawing.save_svg(str(out))
    logger.info(f"Wrote {out}")
    return out

"""Command-line front end: ``simulate``, ``verify``, ``render``, ``info`` and ``schema``."""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

from .config import AtlasConfig, Config, RunConfig
from .exceptions import ConfigInvalid, HypercopError, PolicyFailure
from .game import AgilityFunction, run
from .geometry import Point
from .lemmas import CheckRegistry, verify_all
from .logging import LEVELS, level_from_env, setup_logging
from .policy import build_policy
from .render import render_file
from .serializer import Serializer
from .surface import arena_from_name, make_arena, surface_from_dict

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_POLICY = 2


def _print_json(value: Any) -> None:
    sys.stdout.write(Serializer().dumps(value).decode() + "\n")


def cmd_simulate(args: argparse.Namespace) -> int:
    config = RunConfig.load(args.config)
    settings = config.resolve(Config.from_env())
    seed = config.seed if args.seed is None else args.seed
    spec = config.surface_spec
    arena = make_arena(spec.family, spec.g, settings.atlas)
    controller = settings.controller

    robber = build_policy("robber", config.robber, controller)
    cops = [build_policy("cop", entry, controller) for entry in config.cops]
    tau = AgilityFunction.from_spec(config.agility) if config.agility is not None else None
    initial = None
    if config.initial is not None:
        initial = (Point(*config.initial.robber), [Point(*c) for c in config.initial.cops])

    logger.info(f"Simulating {config.robber.policy} against {len(cops)} cops on {spec.family}({spec.g}), seed {seed}")
    trace = run(arena, robber, cops, tau=tau, initial=initial, stop=settings.game, seed=seed)
    paths = trace.write(args.out, config.output)
    logger.info(f"Wrote {paths['trace']} and {paths['summary']}")
    _print_json(trace.summary())
    return EXIT_OK


def _suite(raw: str) -> Optional[List[str]]:
    if raw.strip().lower() == "all":
        return None
    ids = [part.strip() for part in raw.split(",") if part.strip()]
    for check_id in ids:
        CheckRegistry.get(check_id)
    return ids


def cmd_verify(args: argparse.Namespace) -> int:
    summary = verify_all(_suite(args.suite), args.samples, args.seed)
    _print_json(summary)
    return EXIT_OK if summary["passed"] else EXIT_INVALID


def cmd_render(args: argparse.Namespace) -> int:
    if args.ball < 0:
        raise ConfigInvalid(f"--ball must be non-negative, got {args.ball}")
    out = render_file(args.input, args.out, args.ball, Config.from_env().atlas)
    sys.stdout.write(f"{out}\n")
    return EXIT_OK


def load_arena(source: str, config: Optional[AtlasConfig] = None) -> Any:
    """An arena from a surface JSON path or a name such as ``S(2)``."""
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            data = Serializer().read_json(path)
        except (OSError, HypercopError) as e:
            raise ConfigInvalid(f"{source}: {e}") from None
        return surface_from_dict(data, config)
    return arena_from_name(source, config)


def cmd_info(args: argparse.Namespace) -> int:
    arena = load_arena(args.surface, Config.from_env().atlas)
    _print_json(arena.to_dict())
    return EXIT_OK


def cmd_schema(args: argparse.Namespace) -> int:
    _print_json(RunConfig.json_schema())
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], int]] = {
    "simulate": cmd_simulate,
    "verify": cmd_verify,
    "render": cmd_render,
    "info": cmd_info,
    "schema": cmd_schema,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hypercop",
        description="Cops and robbers on compact hyperbolic surfaces",
    )
    p.add_argument(
        "--log",
        choices=sorted(LEVELS),
        default=None,
        help="Log level (default: HYPERCOP_LOG, else info)",
    )
    sub = p.add_subparsers(dest="command", required=True)

    simulate = sub.add_parser("simulate", help="Run a configured game and write its trace")
    simulate.add_argument("config", help="Run config (JSON or YAML)")
    simulate.add_argument("--out", default="out", help="Output directory")
    simulate.add_argument("--seed", type=int, default=None, help="Override the config seed")

    verify = sub.add_parser("verify", help="Run numerical checks")
    verify.add_argument("--suite", default="all", help="'all' or comma-separated check ids")
    verify.add_argument("--samples", type=int, default=None, help="Samples per check")
    verify.add_argument("--seed", type=int, default=7, help="Sampling seed")

    render = sub.add_parser("render", help="Draw a surface or a trace as SVG")
    render.add_argument("input", help="Surface JSON (from info) or trace JSONL")
    render.add_argument("--out", required=True, help="SVG file to write")
    render.add_argument("--ball", type=float, default=0.0, help="Radius of the drawn tessellation")

    info = sub.add_parser("info", help="Print surface metadata as JSON")
    info.add_argument("surface", help="Surface JSON or a name such as S(2), S'(3), N(3)")

    sub.add_parser("schema", help="Print the JSON schema of run configs")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    setup_logging(LEVELS[args.log] if args.log else level_from_env())

    error: HypercopError
    try:
        return COMMANDS[args.command](args)
    except PolicyFailure as e:
        code, error = EXIT_POLICY, e
    except HypercopError as e:
        code, error = EXIT_INVALID, e
    reason = " ".join(str(error).split())
    sys.stderr.write(f"error: {type(error).__name__}: {reason}\n")
    logger.debug("Command failed", exc_info=error)
    return code


if __name__ == "__main__":
    sys.exit(main())

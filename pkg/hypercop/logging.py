"""Logging configuration for hypercop."""

import logging
import os
import sys
from typing import Optional

LEVELS = {
    "error": logging.ERROR,
    "info": logging.INFO,
    "debug": logging.DEBUG,
}


def level_from_env(default: int = logging.INFO) -> int:
    """Read the log level from ``HYPERCOP_LOG``.

    Args:
        default: Level used when the variable is unset.

    Returns:
        int: A ``logging`` level constant.
    """
    raw = os.getenv("HYPERCOP_LOG")
    if raw is None:
        return default
    level = LEVELS.get(raw.strip().lower())
    if level is None:
        logging.getLogger("hypercop").warning(
            f"Unknown HYPERCOP_LOG value {raw!r}, expected one of {sorted(LEVELS)}",
        )
        return default
    return level


def setup_logging(
    level: Optional[int] = None,
    format_string: Optional[str] = None,
    filename: Optional[str] = None,
) -> logging.Logger:
    """Set up logging configuration.

    Args:
        level: The logging level (default: taken from ``HYPERCOP_LOG``, else INFO)
        format_string: Custom format string for logs
        filename: Optional file to write logs to

    Returns:
        logging.Logger: Configured logger instance
    """
    if format_string is None:
        format_string = "[%(asctime)s] %(levelname)s - %(name)s - %(message)s"

    logger = logging.getLogger("hypercop")
    logger.setLevel(level_from_env() if level is None else level)

    if not logger.handlers:
        handler = logging.FileHandler(filename) if filename else logging.StreamHandler(sys.stderr)

        formatter = logging.Formatter(format_string)
        handler.setFormatter(formatter)
        logger.addHandler(handler)

    return logger


# Default logger instance
logger = setup_logging()

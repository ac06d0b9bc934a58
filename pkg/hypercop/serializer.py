import logging
from pathlib import Path
from typing import Any, Iterable, List, Protocol, Union, runtime_checkable

import numpy as np

from .exceptions import SerializationError

logger = logging.getLogger(__name__)

try:
    import orjson as json

    ORJSON_AVAILABLE = True
except ImportError:
    logger.warning(
        "[WARNING] orjson is not installed, using standard json. "
        "You can install orjson for better performance using: `pip install orjson`",
    )
    import json  # type: ignore[no-redef]

    ORJSON_AVAILABLE = False


@runtime_checkable
class SerializableType(Protocol):
    """Anything that can describe itself as a JSON-compatible dictionary.

    Example:
        ```python
        class Report:
            def to_dict(self) -> dict:
                return {"id": self.id, "passed": self.passed}
        ```
    """

    def to_dict(self) -> dict:
        """Convert instance to dictionary."""
        ...


def _default(obj: Any) -> Any:
    if isinstance(obj, SerializableType):
        return obj.to_dict()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (set, frozenset, tuple)):
        return list(obj)
    raise TypeError(f"Type is not JSON serializable: {type(obj).__name__}")


class Serializer:
    """JSON codec producing byte-stable output (sorted keys, compact separators)."""

    def dumps(self, value: Any) -> bytes:
        """Serialize a value to JSON bytes.

        Args:
            value: A JSON-compatible value; objects with ``to_dict`` are expanded.

        Returns:
            bytes: The encoded document.

        Raises:
            SerializationError: If the value cannot be encoded.
        """
        try:
            if ORJSON_AVAILABLE:
                return json.dumps(
                    value,
                    default=_default,
                    option=json.OPT_SORT_KEYS | json.OPT_SERIALIZE_NUMPY,
                )
            return json.dumps(  # type: ignore[no-any-return]
                value,
                default=_default,
                sort_keys=True,
                separators=(",", ":"),
            ).encode()
        except Exception as e:
            raise SerializationError(f"Failed to serialize value: {e}") from e

    def loads(self, raw: Union[bytes, str]) -> Any:
        """Deserialize JSON bytes or text."""
        if isinstance(raw, str):
            raw = raw.encode()
        try:
            return json.loads(raw)
        except Exception as e:
            raise SerializationError(f"Failed to deserialize value: {e}") from e

    def write_json(self, path: Union[str, Path], value: Any) -> None:
        """Write a single JSON document followed by a newline."""
        Path(path).write_bytes(self.dumps(value) + b"\n")

    def write_jsonl(self, path: Union[str, Path], rows: Iterable[Any]) -> None:
        """Write one JSON document per line."""
        with open(path, "wb") as f:
            for row in rows:
                f.write(self.dumps(row))
                f.write(b"\n")

    def read_json(self, path: Union[str, Path]) -> Any:
        """Read a single JSON document."""
        return self.loads(Path(path).read_bytes())

    def read_jsonl(self, path: Union[str, Path]) -> List[Any]:
        """Read every non-empty line of a JSON-lines file."""
        rows = []
        with open(path, "rb") as f:
            for line in f:
                if line.strip():
                    rows.append(self.loads(line))
        return rows

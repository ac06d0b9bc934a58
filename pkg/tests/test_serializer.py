import math

import numpy as np
import pytest

from hypercop.exceptions import SerializationError
from hypercop.lemmas import CheckReport
from hypercop.serializer import SerializableType, Serializer


@pytest.fixture
def serializer():
    return Serializer()


def test_sorted_keys_and_compact(serializer):
    assert serializer.dumps({"b": 1, "a": [1, 2]}) == b'{"a":[1,2],"b":1}'
    # key order of the input does not matter
    assert serializer.dumps({"a": 1, "b": 2}) == serializer.dumps({"b": 2, "a": 1})


def test_numpy_and_complex(serializer):
    assert serializer.loads(serializer.dumps(np.float64(0.25))) == 0.25
    assert serializer.loads(serializer.dumps(np.arange(3))) == [0, 1, 2]
    assert serializer.loads(serializer.dumps(complex(0.5, -0.25))) == [0.5, -0.25]


def test_sets_become_lists(serializer):
    assert sorted(serializer.loads(serializer.dumps({3, 1, 2}))) == [1, 2, 3]
    assert serializer.loads(serializer.dumps((1, 2))) == [1, 2]


def test_serializable_type(serializer):
    report = CheckReport(id="PY", samples=3, max_violation=0.0, witness={}, passed=True, tolerance=1e-9)
    assert isinstance(report, SerializableType)
    data = serializer.loads(serializer.dumps(report))
    assert data["id"] == "PY"
    assert data["passed"] is True
    assert CheckReport.from_dict(data) == report


def test_infinity_is_not_a_number(serializer):
    # JSON has no infinity; the codec writes null
    assert serializer.loads(serializer.dumps({"min_dist": math.inf})) == {"min_dist": None}


def test_unserializable(serializer):
    with pytest.raises(SerializationError):
        serializer.dumps(object())


def test_invalid_input(serializer):
    with pytest.raises(SerializationError):
        serializer.loads(b"{not json")
    assert serializer.loads('{"a": 1}') == {"a": 1}


def test_json_files(serializer, tmp_path):
    path = tmp_path / "summary.json"
    serializer.write_json(path, {"capture": False, "rounds": 3})
    assert path.read_bytes().endswith(b"\n")
    assert serializer.read_json(path) == {"capture": False, "rounds": 3}


def test_jsonl_files(serializer, tmp_path):
    path = tmp_path / "trace.jsonl"
    rows = [{"round": i, "mover": "robber"} for i in range(4)]
    serializer.write_jsonl(path, rows)
    assert len(path.read_bytes().splitlines()) == 4
    assert serializer.read_jsonl(path) == rows

    # blank lines are skipped
    with open(path, "ab") as f:
        f.write(b"\n\n")
    assert serializer.read_jsonl(path) == rows


def test_byte_stable(serializer):
    value = {"x": [0.1, 0.2], "name": "S(2)", "nested": {"z": 1, "y": [True, None]}}
    assert serializer.dumps(value) == serializer.dumps(serializer.loads(serializer.dumps(value)))

import pytest

from hypercop.config import GameConfig
from hypercop.evaders import RandomWalk
from hypercop.exceptions import BadParameters, UnknownCheck
from hypercop.game import run
from hypercop.geometry import ORIGIN, point_in_direction
from hypercop.guards import GuardSegment
from hypercop.lemmas import CheckRegistry, CheckReport, verify, verify_all

GEOMETRY_CHECKS = ["L5", "L6", "L7", "L8", "C16", "PY", "ISO"]
TRACE_CHECKS = ["L2", "C12", "P15", "C20", "C21", "B23"]


def test_registry_ids():
    assert set(GEOMETRY_CHECKS + TRACE_CHECKS + ["L3"]) <= set(CheckRegistry.ids())
    assert CheckRegistry.get("L8").tolerance == 1e-9
    assert CheckRegistry.get("C16").samples == 1000
    assert CheckRegistry.get("B23").trace
    assert CheckRegistry.get("PY").description


def test_unknown_check():
    with pytest.raises(UnknownCheck, match="L99"):
        verify("L99")


def test_bad_sample_count():
    with pytest.raises(BadParameters):
        verify("L5", samples=0)


@pytest.mark.parametrize("check_id", GEOMETRY_CHECKS)
def test_geometry_checks_pass(check_id):
    report = verify(check_id, samples=300, seed=3)
    assert report.passed, report.witness
    assert report.max_violation <= report.tolerance
    assert report.samples == 300


def test_embedded_disk_check(s2):
    report = verify("L3", samples=200, seed=3, surface=s2)
    assert report.passed
    assert "S(2)" in report.note


def test_single_sample():
    report = verify("PY", samples=1)
    assert report.samples == 1
    assert report.witness


def test_verify_is_seeded():
    first = verify("L7", samples=50, seed=5)
    second = verify("L7", samples=50, seed=5)
    assert first == second


@pytest.mark.parametrize("check_id", ["L2", "C20", "C21", "B23"])
def test_plane_trace_checks_run(check_id):
    report = verify(check_id, samples=60, seed=2)
    assert isinstance(report, CheckReport)
    assert report.id == check_id
    assert report.max_violation >= 0.0
    assert report.note


def test_controller_trace_checks_run(s2):
    for check_id in ("C12", "P15"):
        report = verify(check_id, samples=120, seed=2, surface=s2)
        assert report.id == check_id
        assert report.note


def test_guard_shadow_on_given_trace(plane):
    trace = run(
        plane,
        RandomWalk(tau=0.1),
        [GuardSegment(a=(0.0, 0.0), b=(0.5, 0.0))],
        initial=(point_in_direction(ORIGIN, 0.5, 0.3), [point_in_direction(ORIGIN, 0.0, 0.8)]),
        stop=GameConfig(max_rounds=80),
        seed=4,
    )
    report = verify("L2", trace=trace)
    assert report.samples == len([n for n in trace.annotations_of("guard") if n["adjusted"]])


def test_empty_trace_is_noted(plane):
    trace = run(plane, RandomWalk(tau=0.1), [GuardSegment(a=(0.0, 0.0), b=(0.5, 0.0))], stop=GameConfig(max_rounds=0))
    report = verify("L2", trace=trace)
    assert report.samples == 0
    assert report.passed
    assert "nothing to evaluate" in report.note


def test_report_round_trip():
    report = verify("ISO", samples=10)
    assert CheckReport.from_dict(report.to_dict()) == report


def test_verify_all():
    result = verify_all(["L5", "PY"], samples=20)
    assert result["passed"]
    assert [r["id"] for r in result["reports"]] == ["L5", "PY"]

import pytest

from beamplan.errors import DomainError, Errors
from beamplan.verify import SUITES, run_suites, suite


FAST = [
    "criteria.argmax",
    "trails.suffice",
    "nbs.oracle",
    "beam.audit",
    "rrag.connectivity",
    "rrag.degree",
    "clearance.shortcut",
    "worldsim.invariants",
]
SLOW = [
    "bench.a_priori",
    "bench.online",
    "planner.timing",
    "fls.corridor",
    "worldsim.points",
]


def test_suites_are_registered():
    assert [name for name, (_, slow) in SUITES.items() if not slow] == FAST
    assert sorted(name for name, (_, slow) in SUITES.items() if slow) == sorted(SLOW)


@pytest.mark.parametrize("name", ["criteria.argmax", "clearance.shortcut", "rrag.degree"])
def test_fast_suites_pass(name):
    (result,) = run_suites([name])
    assert result.passed, result.detail
    assert result.name == name
    assert not result.slow


def test_planning_errors_fail_the_suite():
    @suite("broken")
    def broken():
        raise DomainError(Errors.E020)

    try:
        (result,) = run_suites(["broken"])
    finally:
        del SUITES["broken"]
    assert not result.passed
    assert "E020" in result.detail


@pytest.mark.slow
def test_single_plan_on_the_large_grid_is_fast():
    (result,) = run_suites(["planner.timing"])
    assert result.passed, result.detail


@pytest.mark.slow
def test_fallback_planner_joins_the_corridor_rooms():
    (result,) = run_suites(["fls.corridor"])
    assert result.passed, result.detail

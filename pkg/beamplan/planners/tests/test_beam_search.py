import numpy
import pytest

from beamplan.criteria import CriterionContext
from beamplan.errors import DomainError
from beamplan.graph import PlanGraph
from beamplan.graph.random_graphs import decoy_graph, line_graph, random_symmetric_graph
from beamplan.planners import BeamParams, check_plan, dbs, nbs, expansion_count_audit
from beamplan.planners import oracle_trails
from beamplan.util import registry


CRITERIA = ["gain", "ratio", "expected_gain"]


@pytest.mark.parametrize("planner", [dbs, nbs])
def test_isolated_start_returns_bare_path(planner):
    graph = PlanGraph()
    graph.add_vertex((0, 0), 3.0)
    graph.add_vertex((1, 0), 5.0)
    result = planner(graph, 0, 10.0, BeamParams(2, 5), CriterionContext("gain", 10.0))
    assert result.best_path.vertices == (0,)
    assert result.quality == 3.0
    assert result.paths_expanded == 0


@pytest.mark.parametrize("planner", [dbs, nbs])
def test_line_graph(planner):
    graph = line_graph([0.0, 5.0, 9.0])
    ctx = CriterionContext("gain", 2.0)
    result = planner(graph, 0, 2.0, BeamParams(1, 2), ctx)
    assert result.best_path.vertices == (0, 1, 2)
    assert result.best_path.gain == 14.0
    assert result.quality == 14.0


def test_depth_wise_beam_falls_for_decoy():
    graph = decoy_graph()
    ctx = CriterionContext("gain", 4.0)
    oracle = oracle_trails(graph, 0, 4.0, ctx)
    result = dbs(graph, 0, 4.0, BeamParams(1, 4), ctx)
    assert oracle.quality == 19.0
    assert result.quality == 18.0
    assert result.quality < oracle.quality


def test_node_wise_beam_escapes_decoy():
    graph = decoy_graph()
    ctx = CriterionContext("gain", 4.0)
    result = nbs(graph, 0, 4.0, BeamParams(1, 4), ctx)
    assert result.quality == oracle_trails(graph, 0, 4.0, ctx).quality
    assert result.best_path.vertices == (0, 2, 3, 4)


@pytest.mark.parametrize("seed", range(20))
def test_saturated_node_wise_search_matches_oracle(seed):
    rng = numpy.random.default_rng(seed)
    n_vertices = int(rng.integers(4, 10))
    n_edges = min(int(rng.integers(n_vertices - 1, n_vertices + 3)), 12)
    graph = random_symmetric_graph(rng, n_vertices, n_edges, frontier_probability=0.3)
    budget = float(rng.uniform(4.0, 9.0))
    params = BeamParams(10**5, graph.n_edges)
    for name in CRITERIA:
        ctx = CriterionContext(name, budget)
        expected = oracle_trails(graph, 0, budget, ctx)
        result = nbs(graph, 0, budget, params, ctx)
        assert result.quality == expected.quality
        check_plan(result, 0, budget)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("planner", [dbs, nbs])
def test_no_planner_beats_oracle(seed, planner):
    rng = numpy.random.default_rng(100 + seed)
    graph = random_symmetric_graph(rng, 7, 9, frontier_probability=0.3)
    for name in CRITERIA:
        ctx = CriterionContext(name, 8.0)
        upper = oracle_trails(graph, 0, 8.0, ctx).quality
        for width in (1, 3, 10):
            result = planner(graph, 0, 8.0, BeamParams(width, 10), ctx)
            assert result.quality <= upper


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("planner", [dbs, nbs])
def test_wide_beam_dominates_narrow_beams(seed, planner):
    rng = numpy.random.default_rng(200 + seed)
    graph = random_symmetric_graph(rng, 8, 11)
    ctx = CriterionContext("gain", 7.0)
    widest = planner(graph, 0, 7.0, BeamParams(10**5, 12), ctx).quality
    for width in (1, 2, 5, 20):
        assert planner(graph, 0, 7.0, BeamParams(width, 12), ctx).quality <= widest


@pytest.mark.parametrize("seed", range(50))
@pytest.mark.parametrize("planner", [dbs, nbs])
def test_quality_never_drops_as_the_beam_widens(seed, planner):
    rng = numpy.random.default_rng(500 + seed)
    n_vertices = int(rng.integers(4, 9))
    n_edges = min(int(rng.integers(n_vertices - 1, n_vertices + 5)), 12)
    graph = random_symmetric_graph(rng, n_vertices, n_edges, frontier_probability=0.3)
    budget = 8.0
    for name in CRITERIA:
        ctx = CriterionContext(name, budget)
        qualities = [
            planner(graph, 0, budget, BeamParams(width, 10), ctx).quality
            for width in (1, 2, 3, 4, 6, 8, 16)
        ]
        assert qualities == sorted(qualities), name


@pytest.mark.parametrize("seed", range(10))
def test_returned_paths_are_budgeted_trails(seed):
    rng = numpy.random.default_rng(300 + seed)
    graph = random_symmetric_graph(rng, 30, 60)
    budget = 15.0
    for planner in (dbs, nbs):
        for name in CRITERIA:
            result = planner(graph, 3, budget, BeamParams(4, 30), CriterionContext(name, budget))
            check_plan(result, 3, budget)
            assert result.best_path.start == 3


@pytest.mark.parametrize("seed", range(10))
def test_expansion_counts_within_bounds(seed):
    rng = numpy.random.default_rng(400 + seed)
    graph = random_symmetric_graph(rng, 25, 50)
    for width in (1, 5, 50):
        params = BeamParams(width, 20)
        ctx = CriterionContext("gain", 30.0)
        assert expansion_count_audit(dbs(graph, 0, 30.0, params, ctx), graph, params)
        assert expansion_count_audit(nbs(graph, 0, 30.0, params, ctx), graph, params)


def test_expansion_audit_needs_beam_result():
    graph = line_graph([0.0, 1.0])
    result = oracle_trails(graph, 0, 2.0, CriterionContext("gain", 2.0))
    with pytest.raises(DomainError, match=r"\[E034\]"):
        expansion_count_audit(result, graph, BeamParams())


def test_search_is_deterministic():
    rng = numpy.random.default_rng(17)
    graph = random_symmetric_graph(rng, 40, 90)
    ctx = CriterionContext("ratio", 20.0)
    first = nbs(graph, 0, 20.0, BeamParams(3, 40), ctx)
    second = nbs(graph, 0, 20.0, BeamParams(3, 40), ctx)
    assert first.best_path.vertices == second.best_path.vertices
    assert first.paths_expanded == second.paths_expanded


def test_invalid_params():
    with pytest.raises(DomainError, match=r"\[E030\]"):
        BeamParams(0, 10)
    with pytest.raises(DomainError, match=r"\[E030\]"):
        BeamParams(1, 0)


def test_registered_builders():
    graph = line_graph([0.0, 5.0, 9.0])
    ctx = CriterionContext("gain", 2.0)
    planner = registry.planners.get("nbs")(beam_width=1, search_depth=2)
    assert planner(graph, 0, 2.0, ctx).best_path.vertices == (0, 1, 2)
    planner = registry.planners.get("dbs")()
    assert planner.params == BeamParams(100, 100)

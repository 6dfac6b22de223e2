"""Property suites behind `beamplan verify`. Each suite checks one property
of the library on seeded random instances and reports whether it held,
with a short detail string. Suites marked slow run benchmark-sized
direction-of-effect checks and are skipped unless asked for.
"""
from typing import Callable, Dict, Iterable, List, Optional, Tuple
from dataclasses import dataclass
from functools import partial
import math
import time
import warnings

import numpy

from .criteria import CriterionContext, argmax_equivalence_check
from .envs import GridGraphSpec, OnlinePerceptionEnvironment, generate_grid
from .errors import PlanningError
from .executor import run_episode
from .graph import Path, graph_stats
from .graph.random_graphs import line_graph, random_symmetric_graph
from .planners import BeamParams, dbs, nbs, oracle_trails, oracle_walks
from .planners import expansion_count_audit, make_dbs_planner, make_nbs_planner
from .planners import make_spt_planner, make_tsp_planner
from .rrag import AnnulusGraph, AnnulusParams, ClearanceField, add_cluster
from .rrag import collision_free_edge, rrag_expand
from .util import logger, make_rng
from .worldsim import SensorModel2D, SimParams, SurfaceFrontierGain, VolumetricGain
from .worldsim import make_rooms_world, node_gain, run_simulation, sense
from .worldsim import sim_trace_lines


CRITERIA = ["gain", "ratio", "expected_gain"]
SuiteFunc = Callable[[], Tuple[bool, str]]


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    slow: bool = False


SUITES: Dict[str, Tuple[SuiteFunc, bool]] = {}


def suite(name: str, slow: bool = False) -> Callable[[SuiteFunc], SuiteFunc]:
    def register(func: SuiteFunc) -> SuiteFunc:
        SUITES[name] = (func, slow)
        return func

    return register


def run_suites(
    names: Optional[Iterable[str]] = None, *, slow: bool = False
) -> List[SuiteResult]:
    """Run the named suites, or all fast suites (and the slow ones if `slow`)
    when no names are given. A suite that raises a PlanningError fails with
    the error as its detail.

    names (Optional[Iterable[str]]): Suites to run.
    slow (bool): Include the slow suites when no names are given.
    RETURNS (List[SuiteResult]): One result per suite, in run order.
    """
    if names is None:
        names = [name for name, (_, is_slow) in SUITES.items() if slow or not is_slow]
    results = []
    for name in names:
        func, is_slow = SUITES[name]
        start = time.perf_counter()
        try:
            passed, detail = func()
        except PlanningError as e:
            passed, detail = False, str(e)
        seconds = time.perf_counter() - start
        logger.debug("suite %s: %s (%.1fs)", name, passed, seconds)
        results.append(SuiteResult(name, passed, detail, seconds, is_slow))
    return results


@suite("criteria.argmax")
def argmax_suite() -> Tuple[bool, str]:
    """The paths maximizing the extrapolated ratio are exactly the paths
    maximizing gain plus the best ratio over the remaining budget.
    """
    rng = make_rng(0)
    graph = line_graph([0.0])
    for i in range(200):
        gains = rng.uniform(0.0, 100.0, size=20)
        costs = rng.uniform(0.5, 50.0, size=20)
        budget = float(rng.uniform(10.0, 100.0))
        paths = [
            Path(graph, (0,), float(c), float(g), frozenset(), frozenset())
            for g, c in zip(gains, costs)
        ]
        if not argmax_equivalence_check(paths, budget):
            return False, f"maximizers differ on set {i}"
    return True, "200 sets of 20 paths"


@suite("trails.suffice")
def trails_suite() -> Tuple[bool, str]:
    """On symmetric graphs the best trail is as good as the best walk that
    uses every edge at most twice.
    """
    for seed in range(50):
        rng = numpy.random.default_rng(900 + seed)
        n_vertices = int(rng.integers(3, 9))
        most = min(12, n_vertices * (n_vertices - 1) // 2)
        n_edges = int(rng.integers(n_vertices - 1, most + 1))
        graph = random_symmetric_graph(
            rng, n_vertices, n_edges, frontier_probability=0.3
        )
        budget = float(rng.uniform(3.0, 7.0))
        for name in CRITERIA:
            ctx = CriterionContext(name, budget)
            trails = oracle_trails(graph, 0, budget, ctx).quality
            walks = oracle_walks(graph, 0, budget, ctx, max_traversals=2).quality
            if not math.isclose(trails, walks, rel_tol=1e-12, abs_tol=1e-12):
                return False, f"graph {seed}, {name}: trails {trails} walks {walks}"
    return True, "50 graphs x 3 criteria"


@suite("nbs.oracle")
def oracle_suite() -> Tuple[bool, str]:
    """Node-wise search with a saturating beam finds the optimal trail."""
    for seed in range(20):
        rng = numpy.random.default_rng(seed)
        n_vertices = int(rng.integers(4, 10))
        n_edges = min(int(rng.integers(n_vertices - 1, n_vertices + 3)), 12)
        graph = random_symmetric_graph(
            rng, n_vertices, n_edges, frontier_probability=0.3
        )
        budget = float(rng.uniform(4.0, 9.0))
        params = BeamParams(10**5, graph.n_edges)
        for name in CRITERIA:
            ctx = CriterionContext(name, budget)
            expected = oracle_trails(graph, 0, budget, ctx).quality
            found = nbs(graph, 0, budget, params, ctx).quality
            if found != expected:
                return False, f"graph {seed}, {name}: nbs {found} oracle {expected}"
    return True, "20 graphs x 3 criteria"


@suite("beam.audit")
def audit_suite() -> Tuple[bool, str]:
    """Path counts stay within |V|·D·B for depth-wise and |E|·D·B for
    node-wise search.
    """
    graphs = [random_symmetric_graph(make_rng(400, i), 25, 50) for i in range(5)]
    graphs.append(generate_grid(GridGraphSpec(extent=10.0, seed=1)))
    n_runs = 0
    for i, graph in enumerate(graphs):
        for width in (1, 5, 50):
            params = BeamParams(width, 20)
            ctx = CriterionContext("gain", 30.0)
            for search in (dbs, nbs):
                result = search(graph, 0, 30.0, params, ctx)
                n_runs += 1
                if not expansion_count_audit(result, graph, params):
                    return False, f"graph {i}, {result.planner} B={width}"
    return True, f"{n_runs} searches"


def _saturated_rrag(seed: int) -> AnnulusGraph:
    field = ClearanceField(numpy.zeros((200, 200), dtype=bool), 0.1, 0.2)
    ag = AnnulusGraph(AnnulusParams(l_min=1.0, l_max=2.0, n_new=150))
    ag.add_root((10.0, 10.0))
    rrag_expand(ag, field, make_rng(seed))
    return ag


@suite("rrag.connectivity")
def connectivity_suite() -> Tuple[bool, str]:
    """Graphs with l_max = 2·l_min in free space are connected, and two
    clusters farther apart than l_max but closer than 2·l_min stay apart.
    """
    for seed in range(10):
        n_components = graph_stats(_saturated_rrag(seed).graph).n_components
        if n_components != 1:
            return False, f"seed {seed}: {n_components} components"
    field = ClearanceField(numpy.zeros((100, 100), dtype=bool), 0.1, 0.2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        params = AnnulusParams(l_min=1.0, l_max=1.5)
    ag = AnnulusGraph(params)
    add_cluster(ag, (5.0, 5.0), field)
    add_cluster(ag, (6.8, 5.0), field)
    if graph_stats(ag.graph).n_components != 2:
        return False, "the two-cluster counterexample is connected"
    return True, "10 seeds, counterexample disconnected"


@suite("rrag.degree")
def degree_suite() -> Tuple[bool, str]:
    """Every cluster's out-degree to other clusters obeys the packing
    bound 4·(l_max/l_min)².
    """
    worst = 0
    for seed in range(10):
        ag = _saturated_rrag(seed)
        for cid in ag.clusters:
            degree = ag.cluster_out_degree(cid)
            worst = max(worst, degree)
            if degree > ag.params.degree_bound:
                return False, f"seed {seed}, cluster {cid}: degree {degree}"
    return True, f"max degree {worst}"


@suite("clearance.shortcut")
def shortcut_suite() -> Tuple[bool, str]:
    """The clearance shortcut never accepts an edge that dense interpolation
    rejects.
    """
    rng = make_rng(7)
    field = ClearanceField(rng.random((100, 100)) < 0.003, 0.1, 0.2)
    starts = rng.uniform(0.5, 9.5, size=(1000, 2))
    angles = rng.uniform(0.0, 2 * numpy.pi, size=1000)
    lengths = rng.uniform(0.0, 1.0, size=1000)
    ends = starts + lengths[:, None] * numpy.stack(
        [numpy.cos(angles), numpy.sin(angles)], 1
    )
    accepted = 0
    for x1, x2 in zip(starts, ends):
        x1, x2 = tuple(x1), tuple(x2)
        if collision_free_edge(x1, x2, field):
            accepted += 1
            if not collision_free_edge(x1, x2, field, shortcut=False):
                return False, f"false accept {x1} -> {x2}"
    return True, f"{accepted} of 1000 accepted, no false accepts"


@suite("worldsim.invariants")
def worldsim_suite() -> Tuple[bool, str]:
    """Unknown cells never reappear, surface gain never exceeds volumetric
    gain, and a seeded episode replays identically.
    """
    params = SimParams(task="exploration", budget=10.0, n_new=20)
    build = make_rooms_world(n_points=30)
    first = run_simulation(build(3), make_nbs_planner(), params, seed=3)
    second = run_simulation(build(3), make_nbs_planner(), params, seed=3)
    header = {"type": "header", "seed": 3}
    if sim_trace_lines(header, first) != sim_trace_lines(header, second):
        return False, "replay diverged"
    unknown = [r["unknown"] for r in first.records if r["type"] == "step"]
    if any(b > a for a, b in zip(unknown, unknown[1:])):
        return False, "unknown cell count increased"
    sensor = SensorModel2D()
    world = build(0)
    for yaw in numpy.linspace(0.0, 2 * math.pi, 8, endpoint=False):
        sense(world, (2.0, 2.0, float(yaw)), sensor)
    volumetric = VolumetricGain(sensor)
    surface = SurfaceFrontierGain(sensor)
    for x in numpy.arange(0.5, 12.0, 1.0):
        for y in numpy.arange(0.5, 8.0, 1.0):
            for yaw in numpy.linspace(-math.pi, math.pi, 4, endpoint=False):
                pose = (float(x), float(y), float(yaw))
                if node_gain(world, pose, surface) > node_gain(world, pose, volumetric):
                    return False, f"surface gain above volumetric at {pose}"
    return True, f"{len(unknown)} steps"


def _mean_gain(
    planner_factory: Callable, seeds: Iterable[int], **episode
) -> Tuple[float, float]:
    gains, slowest = [], 0.0
    online = episode.pop("online", None)
    for seed in seeds:
        graph = generate_grid(GridGraphSpec(extent=25.0, seed=seed))
        environment = OnlinePerceptionEnvironment(graph, online) if online else graph
        start = time.perf_counter()
        result = run_episode(environment, 0, 50.0, planner_factory(), **episode)
        slowest = max(slowest, time.perf_counter() - start)
        gains.append(result.collected_gain)
    return float(numpy.mean(gains)), slowest


@suite("bench.a_priori", slow=True)
def a_priori_suite() -> Tuple[bool, str]:
    """With the whole graph known, single-beam node-wise search collects at
    least 98% of the best baseline's mean gain.
    """
    seeds = range(5)
    nbs_gain, nbs_time = _mean_gain(partial(make_nbs_planner, 1), seeds)
    baselines = {f"dbs B={b}": partial(make_dbs_planner, b) for b in (1, 100, 10000)}
    for alpha in (0.5, 0.75, 1.0):
        baselines[f"spt a={alpha}"] = partial(make_spt_planner, alpha)
        baselines[f"tsp a={alpha}"] = partial(make_tsp_planner, alpha)
    best_name, best = "", -math.inf
    tsp_time = 0.0
    for name, factory in baselines.items():
        gain, seconds = _mean_gain(factory, seeds)
        if name.startswith("tsp"):
            tsp_time = max(tsp_time, seconds)
        if gain > best:
            best_name, best = name, gain
    detail = (
        f"nbs {nbs_gain:.1f} vs {best_name} {best:.1f}, "
        f"slowest nbs {nbs_time:.1f}s, slowest tsp {tsp_time:.1f}s"
    )
    return nbs_gain >= 0.98 * best and nbs_time < 5.0, detail


@suite("bench.online", slow=True)
def online_suite() -> Tuple[bool, str]:
    """Under radius-limited perception, replanning on expected gain at every
    vertex beats plain gain at the goal and the ratio at every vertex.
    """
    seeds = range(5)
    factory = partial(make_nbs_planner, 1)
    expected, _ = _mean_gain(
        factory, seeds, online=5.0, criterion="expected_gain", strategy="every_node"
    )
    at_goal, _ = _mean_gain(
        factory, seeds, online=5.0, criterion="gain", strategy="at_goal"
    )
    ratio, _ = _mean_gain(
        factory, seeds, online=5.0, criterion="ratio", strategy="every_node"
    )
    detail = f"expected {expected:.1f}, gain/at_goal {at_goal:.1f}, ratio {ratio:.1f}"
    return expected >= at_goal and expected >= ratio, detail


@suite("planner.timing", slow=True)
def timing_suite() -> Tuple[bool, str]:
    """A single plan on the 50 m grid takes at most two seconds."""
    graph = generate_grid(GridGraphSpec(extent=50.0, seed=0))
    start = time.perf_counter()
    make_nbs_planner(1, 100)(graph, 0, 50.0, CriterionContext("gain", 50.0))
    seconds = time.perf_counter() - start
    return seconds <= 2.0, f"{seconds:.2f}s on {graph.n_vertices} vertices"


def l_corridor_field() -> ClearanceField:
    """Two rooms joined by a 0.7 m wide corridor with one bend."""
    blocked = numpy.ones((80, 80), dtype=bool)
    for x0, x1, y0, y1 in [
        (0.5, 3.0, 0.5, 3.0),
        (3.0, 5.5, 3.7, 6.2),
        (3.0, 3.9, 2.3, 3.0),
        (3.2, 3.9, 2.3, 3.7),
    ]:
        rows = slice(int(round(y0 * 10)), int(round(y1 * 10)))
        cols = slice(int(round(x0 * 10)), int(round(x1 * 10)))
        blocked[rows, cols] = False
    return ClearanceField(blocked, 0.1, 0.1)


CORRIDOR_SEEDS = [(2.6, 2.65), (3.55, 4.1)]
CORRIDOR_ROOMS = [((0.8, 0.8), (2.7, 2.7)), ((3.3, 4.0), (5.2, 5.9))]


def corridor_graph(fls_samples: int, seed: int) -> AnnulusGraph:
    """An annulus graph over both rooms of `l_corridor_field`, seeded at the
    two corridor mouths and grown in each room from one random stream.
    """
    field = l_corridor_field()
    ag = AnnulusGraph(AnnulusParams(n_new=20, fls_samples=fls_samples))
    rng = make_rng(seed)
    for position in CORRIDOR_SEEDS:
        add_cluster(ag, position, field, rng)
    for bounds in CORRIDOR_ROOMS:
        rrag_expand(ag, field, rng, bounds=bounds)
    return ag


@suite("fls.corridor", slow=True)
def corridor_suite() -> Tuple[bool, str]:
    """Rooms joined by a bent corridor end up in one graph component only
    when the fallback local planner is enabled.
    """
    for seed in range(5):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            straight = corridor_graph(0, seed)
            bent = corridor_graph(5000, seed)
        if graph_stats(straight.graph).n_components != 2:
            return False, f"seed {seed}: rooms joined without the fallback planner"
        if graph_stats(bent.graph).n_components != 1:
            return False, f"seed {seed}: rooms apart with the fallback planner"
        if not bent.waypoints:
            return False, f"seed {seed}: no bent edge in the joined graph"
    return True, "5 seeds"


@suite("worldsim.points", slow=True)
def points_suite() -> Tuple[bool, str]:
    """Single-beam node-wise search collects at least as much point gain as
    each baseline over ten procedurally generated worlds.
    """
    planners = {
        "nbs B=1": partial(make_nbs_planner, 1),
        "dbs B=100": partial(make_dbs_planner, 100),
        "spt a=1.0": partial(make_spt_planner, 1.0),
        "tsp a=0.5": partial(make_tsp_planner, 0.5),
    }
    params = SimParams(task="points", budget=120.0)
    build = make_rooms_world()
    means = {}
    for name, factory in planners.items():
        gains = [
            run_simulation(build(seed), factory(), params, seed=seed).objective
            for seed in range(10)
        ]
        means[name] = float(numpy.mean(gains))
    ours = means.pop("nbs B=1")
    detail = ", ".join(f"{k} {v:.1f}" for k, v in means.items())
    return all(ours >= v for v in means.values()), f"nbs {ours:.1f} vs {detail}"

import numpy
import pytest

from beamplan.errors import ConfigError, DomainError, SimulationError
from beamplan.planners import make_nbs_planner, make_spt_planner
from beamplan.worldsim import SimParams, Simulation, World2D, make_rooms_world
from beamplan.worldsim import read_sim_trace, run_simulation, sim_trace_lines
from beamplan.worldsim import step_episode, write_sim_trace


EXPLORE = SimParams(task="exploration", budget=10.0, n_new=20)


def rooms(seed=0):
    return make_rooms_world(n_points=30)(seed)


def steps_of(result):
    return [r for r in result.records if r["type"] == "step"]


@pytest.fixture(scope="module")
def exploration():
    return run_simulation(rooms(), make_nbs_planner(), EXPLORE, seed=3)


def test_exploration_moves_the_robot(exploration):
    assert exploration.n_steps > 0
    assert exploration.n_plans >= 1
    assert exploration.objective > 0
    assert exploration.time_used <= EXPLORE.budget + 1e-9
    assert exploration.planner == "nbs"
    assert exploration.records[-1]["type"] == "end"


def test_replans_once_per_simulated_second(exploration):
    steps = steps_of(exploration)
    for record in steps:
        if record["step"] % 5 == 0 and record["time"] <= EXPLORE.budget - 0.2 + 1e-9:
            assert record["replanned"]
    replan_times = {round(r["time"], 9) for r in steps if r["replanned"]}
    last = steps[-1]["time"]
    expected = {float(t) for t in range(1, int(last + 1e-9) + 1) if t <= 9.8}
    assert expected <= replan_times
    plans = [r["step"] for r in exploration.records if r["type"] == "plan"]
    assert plans[0] == 0
    assert set(plans) <= {0} | {r["step"] for r in steps if r["replanned"]}


def test_unknown_cells_never_increase(exploration):
    unknown = [r["unknown"] for r in steps_of(exploration)]
    assert all(b <= a for a, b in zip(unknown, unknown[1:]))


def test_objective_is_the_sum_of_realized_gain(exploration):
    steps = steps_of(exploration)
    assert exploration.objective == pytest.approx(sum(r["realized"] for r in steps))
    assert exploration.objective <= rooms().truth.size
    objectives = [r["objective"] for r in steps]
    assert all(b >= a for a, b in zip(objectives, objectives[1:]))


def test_motion_stays_within_the_limits(exploration):
    steps = steps_of(exploration)
    for a, b in zip(steps, steps[1:]):
        moved = numpy.hypot(b["x"] - a["x"], b["y"] - a["y"])
        assert moved <= EXPLORE.v_max * EXPLORE.dt + 1e-9


def test_replay_is_byte_identical(exploration, tmp_path):
    header = {"type": "header", "seed": 3}
    again = run_simulation(rooms(), make_nbs_planner(), EXPLORE, seed=3)
    assert sim_trace_lines(header, again) == sim_trace_lines(header, exploration)
    path = tmp_path / "trace.jsonl"
    write_sim_trace(path, header, again)
    loaded, records = read_sim_trace(path)
    assert loaded["kind"] == "simulation"
    assert len(records) == len(again.records)


def test_point_collection_counts_collected_points():
    world = rooms(1)
    params = SimParams(task="points", budget=20.0, n_new=20)
    result = run_simulation(world, make_spt_planner(), params, seed=1)
    assert result.objective == pytest.approx(world.collected_gain)
    assert result.objective <= world.total_point_gain
    assert world.collected.sum() <= world.observed.sum()


@pytest.mark.parametrize("method", ["rrat", "rrat_star"])
def test_tree_graphs_drive_the_robot(method):
    params = SimParams(task="exploration", budget=6.0, n_new=20, method=method)
    result = run_simulation(rooms(), make_nbs_planner(), params, seed=0)
    assert result.time_used <= params.budget + 1e-9
    unknown = [r["unknown"] for r in steps_of(result)]
    assert all(b <= a for a, b in zip(unknown, unknown[1:]))


def test_every_node_replans_on_arrival():
    params = SimParams(task="exploration", budget=8.0, n_new=20, strategy="every_node")
    result = run_simulation(rooms(), make_nbs_planner(), params, seed=0)
    for record in steps_of(result):
        if record["time"] <= params.budget - 0.2 + 1e-9:
            assert record["replanned"] == (record["vertex"] is not None)


def test_at_goal_replans_only_on_arrival():
    params = SimParams(task="exploration", budget=8.0, n_new=20, strategy="at_goal")
    sim = Simulation(rooms(), make_nbs_planner(), params, seed=0)
    while not sim.done:
        assert step_episode(sim) is sim
    for record in steps_of(sim.result()):
        if record["replanned"]:
            assert record["vertex"] is not None


def test_params_are_validated():
    with pytest.raises(ConfigError, match="E072"):
        SimParams(task="mapping")
    with pytest.raises(ConfigError, match="E042"):
        SimParams(strategy="sometimes")
    with pytest.raises(DomainError, match="E074"):
        SimParams(replan_period_steps=0)
    with pytest.raises(DomainError, match="E022"):
        SimParams(budget=0.0)


def test_task_defaults_for_the_annulus():
    assert SimParams(task="points").annulus.l_max == 2.0
    assert SimParams(task="surface").annulus.l_min == 1.5
    assert SimParams(task="exploration", l_max=4.0).annulus.l_max == 4.0


def test_fallback_planner_settings_reach_the_annulus():
    assert SimParams().annulus.fls_samples == 300
    assert SimParams().annulus.fls_time_budget is None
    annulus = SimParams(fls_samples=0, fls_time_budget=0.002).annulus
    assert annulus.fls_samples == 0
    assert annulus.fls_time_budget == 0.002


def test_start_inside_a_wall_is_rejected():
    truth = numpy.zeros((30, 30), dtype=bool)
    truth[10:20, 10:20] = True
    world = World2D(truth, 0.1, (), (1.5, 1.5, 0.0))
    with pytest.raises(SimulationError, match="E073"):
        Simulation(world, make_nbs_planner())

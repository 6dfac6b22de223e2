class ErrorsWithCodes(type):
    def __getattribute__(self, code):
        msg = super().__getattribute__(code)
        if code.startswith("__"):  # python system attributes like __class__
            return msg
        else:
            return "[{code}] {msg}".format(code=code, msg=msg)


# fmt: off

class Warnings(metaclass=ErrorsWithCodes):
    W001 = ("Fallback local planner found no path within {max_samples} "
            "samples or its time budget. The edge is not created.")
    W002 = ("Bench cell {cell} failed and is recorded as failed: {error}")
    W003 = ("Replay of '{path}' diverged from the stored trace at line {line}.")
    W005 = ("l_max ({l_max}) < 2 * l_min ({l_min}): the constructed graph is "
            "not guaranteed to be connected.")


class Errors(metaclass=ErrorsWithCodes):
    # graph
    E001 = ("Edge ({u}, {v}) does not exist in the graph.")
    E002 = ("Edge cost must be strictly positive, got {cost} for ({u}, {v}).")
    E003 = ("Vertex gain must be non-negative, got {gain} for vertex {v}.")
    E004 = ("Self-loop ({v}, {v}) is not allowed.")
    E005 = ("Duplicate directed edge ({u}, {v}).")
    E006 = ("Vertex {v} is not in the graph (n_vertices = {n}).")
    E007 = ("Cannot extend a path ending at {last} with edge ({u}, {v}).")
    E008 = ("A path needs at least one vertex.")
    E009 = ("Cannot compare paths from different graphs.")
    E010 = ("Cannot mutate the topology of a derived graph. Mutate the graph "
            "it was derived from instead.")
    E011 = ("Gain array has length {n_gains}, expected {n_vertices}.")
    E012 = ("Cannot reduce walk to a trail: reverse edge ({u}, {v}) is missing.")

    # criteria
    E020 = ("Candidate set is empty.")
    E021 = ("Candidate path {index} has zero cost; ratio comparisons need "
            "c(p) > 0.")
    E022 = ("Budget must be positive, got {budget}.")
    E023 = ("Unknown criterion '{name}'. Available: {available}.")

    # planners
    E030 = ("Beam width and search depth must be >= 1, got B={beam_width}, "
            "D={search_depth}.")
    E031 = ("alpha must lie in [0, 1], got {alpha}.")
    E032 = ("The trail oracle refuses graphs with more than {limit} directed "
            "edges (got {n_edges}).")
    E033 = ("Planner '{planner}' returned a path that {problem}.")
    E034 = ("Expansion audit needs a 'dbs' or 'nbs' result, got '{planner}'.")
    E035 = ("max_traversals must be >= 1, got {max_traversals}.")

    # executor
    E040 = ("The ratio criterion is inapplicable without replanning. Use "
            "'at_goal' or 'every_node'.")
    E041 = ("Strategy 'no_replan' is not valid under online perception.")
    E042 = ("Unknown replanning strategy '{name}'. Available: {available}.")
    E043 = ("Start vertex {start} is not in the environment graph.")

    # envs
    E050 = ("Grid spec is invalid: {problem}.")
    E051 = ("Perception radius must be >= 0, got {radius}.")
    E052 = ("frontier_fraction must lie in [0, 1], got {fraction}.")

    # rrag
    E060 = ("Annulus parameters are invalid: need 0 < l_min <= l_max, got "
            "l_min={l_min}, l_max={l_max}.")
    E061 = ("yaw_count must be >= 1, got {yaw_count}.")
    E062 = ("Vertex {v} is not an intermediate vertex.")
    E063 = ("Graph was built with '{method}', operation needs '{needed}'.")
    E064 = ("Edge ({u}, {v}) is not on the graph, cannot insert an "
            "intermediate vertex on it.")

    # worldsim
    E070 = ("Robot collided at ({x:.3f}, {y:.3f}) at step {step}; clearance "
            "{clearance:.4f}.")
    E071 = ("Pose ({x:.3f}, {y:.3f}) is outside the world bounds.")
    E072 = ("Unknown task '{name}'. Available: {available}.")
    E073 = ("Start pose ({x:.3f}, {y:.3f}) is not collision-free.")
    E074 = ("Replanning period must be >= 1 step, got {period}.")
    E075 = ("World template is invalid: {problem}.")
    E076 = ("Trace '{path}' was not written by a simulation episode.")

    # config / cli
    E080 = ("Config file '{path}' does not exist.")
    E081 = ("Config section [{section}] is missing.")
    E082 = ("Config override '{key}' does not name an existing setting.")
    E083 = ("Trace file '{path}' has no header line.")
    E084 = ("Unknown planner '{name}'. Available: {available}.")

# fmt: on


class PlanningError(Exception):
    """Base class of all errors raised by beamplan."""


class StructuralError(PlanningError, ValueError):
    pass


class DomainError(PlanningError, ValueError):
    pass


class InvariantViolation(PlanningError, RuntimeError):
    pass


class ConfigError(PlanningError, ValueError):
    pass


class SimulationError(PlanningError, RuntimeError):
    pass

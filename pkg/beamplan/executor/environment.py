from typing import FrozenSet, Optional, Protocol

from ..graph import PlanGraph


class Environment(Protocol):
    """What the episode loop needs from the world: the hidden graph, the part
    of it the robot can currently plan over, and a hook called on every
    arrival. `online` environments reveal the graph as the robot moves.
    """

    online: bool
    true_graph: PlanGraph

    def reset(self, start: int) -> None:
        ...

    def visible_graph(self) -> PlanGraph:
        ...

    def frontier(self) -> Optional[FrozenSet[int]]:
        ...

    def arrive(self, v: int) -> None:
        ...


class KnownGraphEnvironment:
    """The whole graph is known before the episode starts."""

    online = False

    def __init__(self, graph: PlanGraph):
        self.true_graph = graph

    def reset(self, start: int) -> None:
        pass

    def visible_graph(self) -> PlanGraph:
        return self.true_graph

    def frontier(self) -> Optional[FrozenSet[int]]:
        return None

    def arrive(self, v: int) -> None:
        pass

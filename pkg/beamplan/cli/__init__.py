from ._util import app, setup_cli  # noqa: F401

# These are the actual functions, NOT the wrapped CLI commands. The CLI
# functions are registered automatically and won't have to be imported here.
from .gen_graph import gen_graph  # noqa: F401
from .bench import bench  # noqa: F401
from .sim import sim  # noqa: F401
from .replay import replay  # noqa: F401
from .verify import verify  # noqa: F401

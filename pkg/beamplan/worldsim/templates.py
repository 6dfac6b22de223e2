from typing import Callable, Tuple

import numpy

from ..errors import Errors, DomainError
from ..util import make_rng, registry
from .world import World2D, free_cells_with_clearance, points_of


WorldTemplate = Callable[[int], World2D]

# Points keep this distance from walls so the robot can reach them.
POINT_CLEARANCE = 0.4


def _carve(truth: numpy.ndarray, resolution: float, x0: float, x1: float, y0: float, y1: float):
    rows = slice(int(round(y0 / resolution)), int(round(y1 / resolution)))
    cols = slice(int(round(x0 / resolution)), int(round(x1 / resolution)))
    truth[rows, cols] = False


def _fill(truth: numpy.ndarray, resolution: float, x0: float, x1: float, y0: float, y1: float):
    rows = slice(int(round(y0 / resolution)), int(round(y1 / resolution)))
    cols = slice(int(round(x0 / resolution)), int(round(x1 / resolution)))
    truth[rows, cols] = True


def _scatter_points(
    truth: numpy.ndarray, resolution: float, n_points: int, rng: numpy.random.Generator
):
    cells = free_cells_with_clearance(truth, resolution, POINT_CLEARANCE)
    if n_points > len(cells):
        raise DomainError(Errors.E075.format(problem=f"no room for {n_points} points"))
    chosen = cells[rng.choice(len(cells), size=n_points, replace=False)]
    positions = (chosen[:, ::-1] + 0.5) * resolution
    return points_of(positions, rng.uniform(0.0, 10.0, size=n_points))


@registry.worlds("rooms.v1")
def make_rooms_world(
    width: float = 12.0,
    height: float = 8.0,
    rooms_x: int = 3,
    rooms_y: int = 2,
    wall: float = 0.2,
    door_width: float = 1.2,
    n_interior_walls: int = 2,
    n_points: int = 30,
    resolution: float = 0.1,
) -> WorldTemplate:
    """Rectangular rooms on a regular grid, one door in every wall between
    neighbouring rooms, and a few short free-standing walls inside the rooms
    other than the start room. The robot starts in the middle of the
    lower-left room.
    """
    room_w = width / rooms_x
    room_h = height / rooms_y
    margin = wall + door_width / 2 + 0.3
    if min(room_w, room_h) < 2 * margin:
        raise DomainError(Errors.E075.format(problem="rooms are too small for their doors"))

    def build(seed: int) -> World2D:
        rng = make_rng(seed)
        nx, ny = int(round(width / resolution)), int(round(height / resolution))
        truth = numpy.zeros((ny, nx), dtype=bool)
        _fill(truth, resolution, 0.0, width, 0.0, wall)
        _fill(truth, resolution, 0.0, width, height - wall, height)
        _fill(truth, resolution, 0.0, wall, 0.0, height)
        _fill(truth, resolution, width - wall, width, 0.0, height)
        half_door = door_width / 2
        for i in range(1, rooms_x):
            x = i * room_w
            _fill(truth, resolution, x - wall / 2, x + wall / 2, 0.0, height)
            for j in range(rooms_y):
                y = rng.uniform(j * room_h + margin, (j + 1) * room_h - margin)
                _carve(truth, resolution, x - wall, x + wall, y - half_door, y + half_door)
        for j in range(1, rooms_y):
            y = j * room_h
            _fill(truth, resolution, 0.0, width, y - wall / 2, y + wall / 2)
            for i in range(rooms_x):
                x = rng.uniform(i * room_w + margin, (i + 1) * room_w - margin)
                _carve(truth, resolution, x - half_door, x + half_door, y - wall, y + wall)
        n_rooms = rooms_x * rooms_y
        for _ in range(n_interior_walls if n_rooms > 1 else 0):
            room = int(rng.integers(1, n_rooms))
            cx = (room % rooms_x + 0.5 + rng.uniform(-0.1, 0.1)) * room_w
            cy = (room // rooms_x + 0.5 + rng.uniform(-0.1, 0.1)) * room_h
            if rng.random() < 0.5:
                half = rng.uniform(0.15, 0.3) * room_w / 2
                _fill(truth, resolution, cx - half, cx + half, cy - wall / 2, cy + wall / 2)
            else:
                half = rng.uniform(0.15, 0.3) * room_h / 2
                _fill(truth, resolution, cx - wall / 2, cx + wall / 2, cy - half, cy + half)
        start = (room_w / 2, room_h / 2, 0.0)
        return World2D(truth, resolution, _scatter_points(truth, resolution, n_points, rng), start)

    return build


def l_corridor_layout(
    room_size: float, corridor_width: float, corridor_length: float, wall: float
) -> Tuple[Tuple[float, float, float, float], ...]:
    """The free rectangles (x0, x1, y0, y1) of two rooms joined by a
    corridor with one right-angle bend: room A, the horizontal leg, the
    vertical leg and room B.
    """
    r, w, c, l = room_size, wall, corridor_width, corridor_length
    room_a = (w, r, w, r)
    horizontal = (r, r + l, r / 2 - c / 2, r / 2 + c / 2)
    vertical = (r + l - c, r + l, r / 2 - c / 2, r / 2 + c / 2 + l)
    center = r + l - c / 2
    room_b = (center - r / 2, center + r / 2, vertical[3], vertical[3] + r)
    return room_a, horizontal, vertical, room_b


@registry.worlds("l_corridor.v1")
def make_l_corridor_world(
    room_size: float = 4.0,
    corridor_width: float = 1.2,
    corridor_length: float = 3.0,
    wall: float = 0.2,
    n_points: int = 20,
    resolution: float = 0.1,
) -> WorldTemplate:
    """Two rooms joined by an L-shaped corridor, so that no straight line
    connects them. The robot starts in the middle of room A, facing the
    corridor.
    """
    rects = l_corridor_layout(room_size, corridor_width, corridor_length, wall)
    width = max(x1 for _, x1, _, _ in rects) + wall
    height = max(y1 for _, _, _, y1 in rects) + wall

    def build(seed: int) -> World2D:
        rng = make_rng(seed)
        nx, ny = int(round(width / resolution)), int(round(height / resolution))
        truth = numpy.ones((ny, nx), dtype=bool)
        for rect in rects:
            _carve(truth, resolution, *rect)
        start = (room_size / 2, room_size / 2, 0.0)
        return World2D(truth, resolution, _scatter_points(truth, resolution, n_points, rng), start)

    return build

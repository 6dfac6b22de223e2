from typing import List, Optional, Tuple

import numpy
from scipy.spatial import cKDTree

from .params import Point


class SpatialIndex:
    """Nearest-neighbour index over 2D points with cheap insertion. Points
    added since the last rebuild sit in a small buffer that is searched by
    brute force; the k-d tree is rebuilt once the buffer grows past
    `rebuild_every`. Removed points are skipped by every query.
    """

    def __init__(self, rebuild_every: int = 64):
        self.rebuild_every = rebuild_every
        self._points: List[Point] = []
        self._active: List[bool] = []
        self._tree: Optional[cKDTree] = None
        self._tree_ids = numpy.zeros(0, dtype="int64")
        self._buffer: List[int] = []

    def __len__(self) -> int:
        return sum(self._active)

    def add(self, point: Point) -> int:
        key = len(self._points)
        self._points.append((float(point[0]), float(point[1])))
        self._active.append(True)
        self._buffer.append(key)
        if len(self._buffer) > self.rebuild_every:
            self._rebuild()
        return key

    def remove(self, key: int) -> None:
        self._active[key] = False
        if key in self._buffer:
            self._buffer.remove(key)

    def point(self, key: int) -> Point:
        return self._points[key]

    def keys(self) -> List[int]:
        return [k for k, active in enumerate(self._active) if active]

    def nearest(self, point: Point) -> Optional[Tuple[float, int]]:
        """Distance to and key of the closest active point, lowest key on
        ties, or None for an empty index.
        """
        candidates = self.within(point, numpy.inf) if self._tree is None else None
        if candidates is None:
            dists, keys = self._tree.query(point, k=min(8, len(self._tree_ids)))
            dists = numpy.atleast_1d(dists)
            keys = numpy.atleast_1d(keys)
            best: Optional[Tuple[float, int]] = None
            for d, i in zip(dists, keys):
                key = int(self._tree_ids[i])
                if self._active[key]:
                    best = (float(d), key)
                    break
            if best is None:
                # Too many removed points near the query; fall back to a scan.
                return self._scan(point)
            for key in self._buffer:
                d = self._dist(point, key)
                if (d, key) < best:
                    best = (d, key)
            return best
        if not candidates:
            return None
        return min((self._dist(point, key), key) for key in candidates)

    def within(self, point: Point, radius: float) -> List[int]:
        """Keys of active points within `radius` of `point`, sorted."""
        found = []
        if self._tree is not None and numpy.isfinite(radius):
            found = [int(self._tree_ids[i]) for i in self._tree.query_ball_point(point, radius)]
        elif self._tree is not None:
            found = [int(k) for k in self._tree_ids]
        found += [k for k in self._buffer if self._dist(point, k) <= radius]
        return sorted(k for k in set(found) if self._active[k])

    def _scan(self, point: Point) -> Optional[Tuple[float, int]]:
        keys = self.keys()
        if not keys:
            return None
        return min((self._dist(point, key), key) for key in keys)

    def _dist(self, point: Point, key: int) -> float:
        x, y = self._points[key]
        return float(numpy.hypot(point[0] - x, point[1] - y))

    def _rebuild(self) -> None:
        keys = numpy.asarray(self.keys(), dtype="int64")
        self._buffer = []
        if keys.size == 0:
            self._tree = None
            self._tree_ids = keys
            return
        self._tree = cKDTree(numpy.asarray(self._points)[keys])
        self._tree_ids = keys

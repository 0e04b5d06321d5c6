"""Tours, metrics, and tour-length evaluation for planar TSP instances.

Candidate solutions are permutations of the point indices, read as closed
tours. Local-search moves swap two positions of the permutation, so the
neighborhood helpers here define the transposition graph used by the
hill climbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

__all__ = [
    "ConfigurationError",
    "Instance",
    "Metric",
    "Point",
    "RunResult",
    "Tour",
    "distance",
    "fitness",
    "make_rng",
    "neighbors",
    "random_tour",
    "reverse",
    "tour_length",
    "transpose",
]


class ConfigurationError(ValueError):
    """Raised for invalid solver or experiment settings, before any work runs."""


@dataclass(frozen=True)
class Point:
    """A location in the plane."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


_METRIC_KINDS = ("euclidean", "manhattan", "wmanhattan", "wchebyshev")


@dataclass(frozen=True)
class Metric:
    """A distance function between points.

    ``wx`` and ``wy`` scale the per-axis differences for the weighted kinds
    and must be positive; the unweighted kinds ignore them.
    """

    kind: str = "euclidean"
    wx: float = 1.0
    wy: float = 1.0

    def __post_init__(self) -> None:
        if self.kind not in _METRIC_KINDS:
            raise ValueError(f"unknown metric kind {self.kind!r}, expected one of {_METRIC_KINDS}")
        for label, w in (("wx", self.wx), ("wy", self.wy)):
            if not (math.isfinite(w) and w > 0.0):
                raise ValueError(f"metric weight {label} must be positive and finite, got {w}")

    @classmethod
    def euclidean(cls) -> "Metric":
        return cls("euclidean")

    @classmethod
    def manhattan(cls) -> "Metric":
        return cls("manhattan")

    @classmethod
    def weighted_manhattan(cls, wx: float, wy: float) -> "Metric":
        return cls("wmanhattan", wx, wy)

    @classmethod
    def weighted_chebyshev(cls, wx: float, wy: float) -> "Metric":
        return cls("wchebyshev", wx, wy)

    @classmethod
    def parse(cls, text: str) -> "Metric":
        """Parse a metric string such as ``euclidean`` or ``wmanhattan:2,0.5``."""
        name, sep, args = text.partition(":")
        name = name.strip().lower()
        if name in ("euclidean", "manhattan"):
            if sep:
                raise ValueError(f"metric {name!r} takes no weights")
            return cls(name)
        if name in ("wmanhattan", "wchebyshev"):
            parts = args.split(",") if sep else []
            if len(parts) != 2:
                raise ValueError(f"metric {name!r} needs weights, e.g. {name}:1.5,2")
            try:
                wx, wy = float(parts[0]), float(parts[1])
            except ValueError:
                raise ValueError(f"could not parse metric weights from {args!r}") from None
            return cls(name, wx, wy)
        raise ValueError(f"unknown metric {text!r}")

    def distance(self, a: Point, b: Point) -> float:
        # Must mirror pairwise() operation for operation so cached tables and
        # direct evaluation agree bit for bit.
        dx = a.x - b.x
        dy = a.y - b.y
        if self.kind == "euclidean":
            return math.sqrt(dx * dx + dy * dy)
        if self.kind == "manhattan":
            return abs(dx) + abs(dy)
        if self.kind == "wmanhattan":
            return self.wx * abs(dx) + self.wy * abs(dy)
        return max(self.wx * abs(dx), self.wy * abs(dy))

    def pairwise(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Full distance table for coordinate vectors ``xs`` and ``ys``."""
        dx = xs[:, None] - xs[None, :]
        dy = ys[:, None] - ys[None, :]
        if self.kind == "euclidean":
            return np.sqrt(dx * dx + dy * dy)
        if self.kind == "manhattan":
            return np.abs(dx) + np.abs(dy)
        if self.kind == "wmanhattan":
            return self.wx * np.abs(dx) + self.wy * np.abs(dy)
        return np.maximum(self.wx * np.abs(dx), self.wy * np.abs(dy))


class Instance:
    """A named set of points with a metric.

    With ``cache_distances`` (the default) an n-by-n distance table is built
    lazily on first use and reused by every evaluation; without it each
    distance is recomputed from the coordinates.
    """

    def __init__(
        self,
        name: str,
        points: Sequence[Point],
        metric: Metric | None = None,
        cache_distances: bool = True,
    ) -> None:
        self.name = str(name)
        self.points = tuple(points)
        if not self.points:
            raise ValueError("an instance needs at least one point")
        self.metric = metric if metric is not None else Metric.euclidean()
        self.cache_distances = bool(cache_distances)
        self._table: np.ndarray | None = None
        xs = np.array([p.x for p in self.points], dtype=np.float64)
        ys = np.array([p.y for p in self.points], dtype=np.float64)
        self._xs, self._ys = xs, ys

    @property
    def n(self) -> int:
        return len(self.points)

    def distance(self, i: int, j: int) -> float:
        if self._table is not None:
            return float(self._table[i, j])
        return self.metric.distance(self.points[i], self.points[j])

    def distance_table(self) -> np.ndarray:
        """The n-by-n distance table (cached when enabled)."""
        if self._table is None:
            table = self.metric.pairwise(self._xs, self._ys)
            table.setflags(write=False)
            if not self.cache_distances:
                return table
            self._table = table
        return self._table

    def __repr__(self) -> str:
        return f"Instance({self.name!r}, n={self.n}, metric={self.metric.kind})"


class Tour:
    """A closed tour: a permutation of the point indices ``0 .. n-1``.

    The order array is validated on construction and kept read-only;
    operations that change a tour return a new one.
    """

    __slots__ = ("order",)

    def __init__(self, order: Sequence[int] | np.ndarray) -> None:
        arr = np.array(order, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("tour order must be a non-empty 1-d index sequence")
        n = arr.size
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError(f"tour order must use each index in 0..{n - 1} exactly once")
        if np.bincount(arr, minlength=n).max() != 1:
            raise ValueError(f"tour order must use each index in 0..{n - 1} exactly once")
        arr.setflags(write=False)
        self.order = arr

    def __len__(self) -> int:
        return int(self.order.size)

    def __getitem__(self, i: int) -> int:
        return int(self.order[i])

    def __iter__(self) -> Iterator[int]:
        return iter(self.tolist())

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Tour):
            return np.array_equal(self.order, other.order)
        if isinstance(other, (list, tuple, np.ndarray)):
            return np.array_equal(self.order, np.asarray(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Tour({self.tolist()})"

    def tolist(self) -> list[int]:
        return self.order.tolist()

    def key(self) -> bytes:
        """Hashable identity of the permutation."""
        return self.order.tobytes()

    def __getstate__(self) -> bytes:
        return self.key()

    def __setstate__(self, state: bytes) -> None:
        arr = np.frombuffer(state, dtype=np.int64).copy()
        arr.setflags(write=False)
        self.order = arr


def distance(metric: Metric, a: Point, b: Point) -> float:
    """Distance between two points under the given metric."""
    return metric.distance(a, b)


def tour_length(instance: Instance, tour: Tour) -> float:
    """Length of the closed tour: consecutive edges plus the wrap-around edge.

    Edge lengths are sorted ascending before accumulating, so any two tours
    over the same edge set return the identical float. In particular a tour,
    its reversal, and its rotations all evaluate bit-for-bit equal.
    """
    order = tour.order
    if order.size != instance.n:
        raise ValueError(f"tour has {order.size} entries for an instance of {instance.n} points")
    if instance.cache_distances:
        table = instance.distance_table()
        edges = table[order, np.roll(order, -1)]
        # np.cumsum is a sequential scan; np.sum pairs terms and may differ.
        return float(np.cumsum(np.sort(edges))[-1])
    points = instance.points
    metric = instance.metric
    edge_lengths = []
    for k in range(order.size):
        a = points[order[k]]
        b = points[order[(k + 1) % order.size]]
        edge_lengths.append(metric.distance(a, b))
    edge_lengths.sort()
    total = 0.0
    for value in edge_lengths:
        total += value
    return total


def fitness(instance: Instance, tour: Tour) -> float:
    """Negated tour length; larger is better."""
    return -tour_length(instance, tour)


def reverse(tour: Tour) -> Tour:
    """The same cycle walked in the opposite direction."""
    return Tour(tour.order[::-1])


def transpose(tour: Tour, i: int, j: int) -> Tour:
    """New tour with positions ``i`` and ``j`` swapped (``0 <= i < j < n``)."""
    n = len(tour)
    if not (0 <= i < j <= n - 1):
        raise ValueError(f"positions must satisfy 0 <= i < j <= {n - 1}, got ({i}, {j})")
    arr = tour.order.copy()
    arr[i], arr[j] = arr[j], arr[i]
    return Tour(arr)


def neighbors(tour: Tour) -> Iterator[Tour]:
    """All transposition neighbors, in lexicographic ``(i, j)`` position order."""
    n = len(tour)
    if n < 2:
        raise ValueError("neighborhood needs a tour over at least two points")
    return (transpose(tour, i, j) for i in range(n - 1) for j in range(i + 1, n))


def random_tour(n: int, rng: np.random.Generator) -> Tour:
    """Uniformly random tour over ``n`` points."""
    if n < 2:
        raise ValueError(f"need at least two points, got {n}")
    return Tour(rng.permutation(n))


def make_rng(seed: int) -> np.random.Generator:
    """Generator for a 64-bit seed; negative seeds wrap modulo 2**64."""
    return np.random.default_rng(int(seed) & 0xFFFFFFFFFFFFFFFF)


@dataclass
class RunResult:
    """Outcome of one solver invocation."""

    best_tour: Tour
    best_length: float
    iterations: int
    fitness_evaluations: int
    wall_time_ms: float
    runs: int = 1
    early_outs: int = 0


# Callback signature shared by the solvers' optional instrumentation hooks.
VisitHook = Callable[[Tour, float], None]

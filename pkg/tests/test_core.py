import math
import pickle

import numpy as np
import pytest

from helpers import make_instance, square_instance
from tourbench.core import (
    ConfigurationError,
    Instance,
    Metric,
    Point,
    Tour,
    distance,
    fitness,
    make_rng,
    neighbors,
    random_tour,
    reverse,
    tour_length,
    transpose,
)


def test_configuration_error_is_value_error():
    assert issubclass(ConfigurationError, ValueError)


class TestPoint:
    def test_holds_coordinates(self):
        p = Point(1.5, -2.0)
        assert p.x == 1.5
        assert p.y == -2.0

    def test_is_frozen(self):
        with pytest.raises(Exception):
            Point(0.0, 0.0).x = 1.0

    @pytest.mark.parametrize("x,y", [(math.nan, 0.0), (0.0, math.inf), (-math.inf, 1.0)])
    def test_rejects_non_finite(self, x, y):
        with pytest.raises(ValueError):
            Point(x, y)


class TestMetric:
    def test_factories(self):
        assert Metric.euclidean().kind == "euclidean"
        assert Metric.manhattan().kind == "manhattan"
        m = Metric.weighted_manhattan(2.0, 0.5)
        assert (m.kind, m.wx, m.wy) == ("wmanhattan", 2.0, 0.5)
        c = Metric.weighted_chebyshev(1.5, 3.0)
        assert (c.kind, c.wx, c.wy) == ("wchebyshev", 1.5, 3.0)

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            Metric("cosine")

    @pytest.mark.parametrize("wx,wy", [(0.0, 1.0), (1.0, -2.0), (math.nan, 1.0)])
    def test_rejects_bad_weights(self, wx, wy):
        with pytest.raises(ValueError):
            Metric("wmanhattan", wx, wy)

    def test_distance_values(self):
        a, b = Point(0.0, 0.0), Point(3.0, 4.0)
        assert Metric.euclidean().distance(a, b) == 5.0
        assert Metric.manhattan().distance(a, b) == 7.0
        assert Metric.weighted_manhattan(2.0, 0.5).distance(a, b) == 8.0
        assert Metric.weighted_chebyshev(2.0, 1.0).distance(a, b) == 6.0

    def test_distance_is_symmetric(self):
        rng = np.random.default_rng(3)
        pts = [Point(float(x), float(y)) for x, y in rng.uniform(-50, 50, size=(20, 2))]
        for m in (Metric.euclidean(), Metric.manhattan(),
                  Metric.weighted_manhattan(2.0, 0.5), Metric.weighted_chebyshev(0.3, 4.0)):
            for a, b in zip(pts[:10], pts[10:]):
                assert m.distance(a, b) == m.distance(b, a)

    def test_pairwise_matches_scalar_exactly(self):
        """Cached tables and direct evaluation must agree bit for bit."""
        rng = np.random.default_rng(7)
        coords = rng.uniform(-100, 100, size=(12, 2))
        pts = [Point(float(x), float(y)) for x, y in coords]
        xs = np.array([p.x for p in pts])
        ys = np.array([p.y for p in pts])
        for m in (Metric.euclidean(), Metric.manhattan(),
                  Metric.weighted_manhattan(2.0, 0.5), Metric.weighted_chebyshev(0.3, 4.0)):
            table = m.pairwise(xs, ys)
            for i in range(12):
                for j in range(12):
                    assert table[i, j] == m.distance(pts[i], pts[j])

    def test_parse(self):
        assert Metric.parse("euclidean") == Metric.euclidean()
        assert Metric.parse("MANHATTAN") == Metric.manhattan()
        assert Metric.parse("wmanhattan:2,0.5") == Metric.weighted_manhattan(2.0, 0.5)
        assert Metric.parse("wchebyshev:1.5,3") == Metric.weighted_chebyshev(1.5, 3.0)

    @pytest.mark.parametrize("text", [
        "euclidean:1,2",       # unweighted kind with weights
        "wmanhattan",          # weighted kind without weights
        "wmanhattan:1",        # one weight only
        "wchebyshev:a,b",      # non-numeric weights
        "wmanhattan:0,1",      # zero weight
        "galactic",            # unknown kind
    ])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            Metric.parse(text)


class TestInstance:
    def test_basic(self):
        inst = square_instance()
        assert inst.n == 4
        assert inst.metric == Metric.euclidean()
        assert inst.distance(0, 1) == 1.0
        assert inst.distance(0, 2) == math.sqrt(2.0)

    def test_defaults_to_euclidean(self):
        inst = Instance("x", (Point(0, 0), Point(1, 0)))
        assert inst.metric.kind == "euclidean"

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            Instance("empty", ())

    def test_distance_table_cached_and_read_only(self):
        inst = square_instance()
        table = inst.distance_table()
        assert table is inst.distance_table()
        assert not table.flags.writeable
        assert np.array_equal(table, table.T)
        assert np.all(np.diag(table) == 0.0)

    def test_uncached_instance_recomputes(self):
        inst = square_instance(cache_distances=False)
        t1 = inst.distance_table()
        t2 = inst.distance_table()
        assert t1 is not t2
        assert np.array_equal(t1, t2)
        assert inst.distance(1, 3) == Metric.euclidean().distance(inst.points[1], inst.points[3])


class TestTour:
    def test_construction_and_access(self):
        t = Tour([2, 0, 1])
        assert len(t) == 3
        assert t[0] == 2
        assert list(t) == [2, 0, 1]
        assert t.tolist() == [2, 0, 1]
        assert t.order.dtype == np.int64

    @pytest.mark.parametrize("order", [[], [[0, 1]], [0, 0], [0, 2], [-1, 0], [1, 2]])
    def test_rejects_non_permutations(self, order):
        with pytest.raises(ValueError):
            Tour(order)

    def test_order_is_read_only(self):
        t = Tour([0, 1, 2])
        with pytest.raises(ValueError):
            t.order[0] = 1

    def test_equality_and_hash(self):
        a, b, c = Tour([0, 1, 2]), Tour([0, 1, 2]), Tour([0, 2, 1])
        assert a == b
        assert a != c
        assert a == [0, 1, 2]
        assert hash(a) == hash(b)
        assert a.key() == b.key()
        assert a.key() != c.key()

    def test_pickle_round_trip(self):
        t = Tour([3, 1, 0, 2])
        u = pickle.loads(pickle.dumps(t))
        assert u == t
        assert not u.order.flags.writeable


class TestTourLength:
    def test_square_perimeter(self):
        inst = square_instance()
        assert tour_length(inst, Tour([0, 1, 2, 3])) == 4.0

    def test_counts_wraparound_edge(self):
        inst = make_instance([(0, 0), (1, 0), (2, 0)])
        # edges 1 + 1 + wrap-around 2
        assert tour_length(inst, Tour([0, 1, 2])) == 4.0

    def test_matches_sorted_edge_sum(self):
        rng = np.random.default_rng(11)
        inst = make_instance(rng.uniform(0, 100, size=(9, 2)))
        t = random_tour(9, rng)
        edges = sorted(
            inst.distance(t[k], t[(k + 1) % 9]) for k in range(9)
        )
        total = 0.0
        for e in edges:
            total += e
        assert tour_length(inst, t) == total

    def test_cached_equals_uncached(self):
        rng = np.random.default_rng(13)
        coords = rng.uniform(-10, 10, size=(15, 2))
        cached = make_instance(coords)
        plain = make_instance(coords, cache_distances=False)
        for _ in range(20):
            t = random_tour(15, rng)
            assert tour_length(cached, t) == tour_length(plain, t)

    def test_reversal_and_rotation_are_exact(self):
        """Same cycle, same float, regardless of traversal."""
        rng = np.random.default_rng(17)
        inst = make_instance(rng.uniform(0, 1000, size=(20, 2)))
        for _ in range(50):
            t = random_tour(20, rng)
            L = tour_length(inst, t)
            assert tour_length(inst, reverse(t)) == L
            rotated = Tour(np.roll(t.order, 7))
            assert tour_length(inst, rotated) == L

    def test_rejects_size_mismatch(self):
        with pytest.raises(ValueError):
            tour_length(square_instance(), Tour([0, 1, 2]))

    def test_fitness_is_negated_length(self):
        inst = square_instance()
        t = Tour([0, 2, 1, 3])
        assert fitness(inst, t) == -tour_length(inst, t)


def test_distance_free_function():
    assert distance(Metric.euclidean(), Point(0, 0), Point(3, 4)) == 5.0


def test_reverse_is_involution():
    t = Tour([4, 0, 3, 1, 2])
    assert reverse(reverse(t)) == t
    assert reverse(t) == [2, 1, 3, 0, 4]


class TestTranspose:
    def test_swaps_positions(self):
        assert transpose(Tour([0, 1, 2, 3]), 1, 3) == [0, 3, 2, 1]

    @pytest.mark.parametrize("i,j", [(2, 1), (1, 1), (-1, 2), (0, 4)])
    def test_rejects_bad_positions(self, i, j):
        with pytest.raises(ValueError):
            transpose(Tour([0, 1, 2, 3]), i, j)


class TestNeighbors:
    def test_count_and_order(self):
        t = Tour([0, 1, 2, 3])
        ns = list(neighbors(t))
        assert len(ns) == 6  # n(n-1)/2
        # lexicographic (i, j) position order
        assert ns[0] == transpose(t, 0, 1)
        assert ns[1] == transpose(t, 0, 2)
        assert ns[-1] == transpose(t, 2, 3)

    def test_each_differs_in_two_positions(self):
        t = Tour([3, 0, 2, 4, 1])
        for nb in neighbors(t):
            assert int(np.sum(nb.order != t.order)) == 2


class TestRandomTour:
    def test_is_permutation(self):
        rng = np.random.default_rng(5)
        t = random_tour(30, rng)
        assert sorted(t.tolist()) == list(range(30))

    def test_deterministic_per_seed(self):
        a = random_tour(12, make_rng(99))
        b = random_tour(12, make_rng(99))
        assert a == b

    def test_rejects_tiny(self):
        with pytest.raises(ValueError):
            random_tour(1, make_rng(0))


def test_make_rng_wraps_negative_seeds():
    a = make_rng(-1).integers(1 << 62)
    b = make_rng((1 << 64) - 1).integers(1 << 62)
    assert a == b

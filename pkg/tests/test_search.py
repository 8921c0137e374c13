import itertools
import math

import pytest
from hypothesis import given, settings

from oridiam.errors import HasBridge, NotConnected, TooLarge
from oridiam.generators import complete_graph, cycle_graph, k4_subdivided, petersen_graph
from oridiam.graph import UndirectedGraph, undirected_diameter
from oridiam.orientation import Orientation, diam_profile, is_strongly_connected, oriented_diameter
from oridiam.search import SearchStats, exact_min_oriented_diameter, min_extension_bound_orientation

from conftest import bridgeless_graphs


def all_orientations(g):
    for bits in itertools.product((0, 1), repeat=g.m):
        yield Orientation.from_arcs(g, [(v, u) if b else (u, v) for (u, v), b in zip(g.edges, bits)])


def brute_min_diameter(g):
    return min(oriented_diameter(h) for h in all_orientations(g))


def brute_min_extension_bound(g, dset):
    best = math.inf
    for h in all_orientations(g):
        if is_strongly_connected(h):
            best = min(best, diam_profile(h, dset).extension_bound)
    return best


class TestOracleValues:
    def test_k4(self):
        assert brute_min_diameter(complete_graph(4)) == 3
        assert exact_min_oriented_diameter(complete_graph(4))[0] == 3

    @pytest.mark.parametrize("n", [3, 4, 5, 7, 9])
    def test_cycles(self, n):
        assert exact_min_oriented_diameter(cycle_graph(n))[0] == n - 1

    def test_petersen(self):
        assert exact_min_oriented_diameter(petersen_graph())[0] == 6

    def test_subdivided_k4(self):
        assert exact_min_oriented_diameter(k4_subdivided())[0] == 6

    def test_single_vertex(self):
        value, h = exact_min_oriented_diameter(UndirectedGraph.from_edges(1, []))
        assert value == 0 and h.arcs == ()


class TestOracleErrors:
    def test_bridge(self):
        with pytest.raises(HasBridge):
            exact_min_oriented_diameter(UndirectedGraph.from_edges(3, [(0, 1), (1, 2)]))

    def test_disconnected(self):
        with pytest.raises(NotConnected):
            exact_min_oriented_diameter(UndirectedGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]))

    def test_edge_limit(self):
        with pytest.raises(TooLarge):
            exact_min_oriented_diameter(complete_graph(8))
        with pytest.raises(TooLarge):
            exact_min_oriented_diameter(petersen_graph(), max_edges=10)


class TestOracleProperties:
    @settings(max_examples=60, deadline=None)
    @given(bridgeless_graphs(max_n=8, max_extra=3))
    def test_matches_brute_force(self, g):
        if g.m > 11:
            return
        value, h = exact_min_oriented_diameter(g)
        assert value == brute_min_diameter(g)
        assert is_strongly_connected(h)
        assert oriented_diameter(h) == value
        assert value >= undirected_diameter(g)

    @settings(max_examples=40, deadline=None)
    @given(bridgeless_graphs(max_n=7, max_extra=3))
    def test_extension_bound_matches_brute_force(self, g):
        if g.m > 10:
            return
        dset = set(range(0, g.n, 3))
        value, h = min_extension_bound_orientation(g, dset)
        assert value == brute_min_extension_bound(g, dset)
        assert diam_profile(h, dset).extension_bound == value

    @settings(max_examples=40, deadline=None)
    @given(bridgeless_graphs(max_n=10, max_extra=4))
    def test_budget_mode(self, g):
        if g.m > 16:
            return
        best, _ = exact_min_oriented_diameter(g)
        value, h = exact_min_oriented_diameter(g, budget=best + 1)
        assert value <= best + 1 and oriented_diameter(h) == value
        value, _ = exact_min_oriented_diameter(g, budget=best - 1)
        assert value == best


class TestParallel:
    def test_thread_counts_agree_bit_for_bit(self):
        for g in (petersen_graph(), k4_subdivided(), cycle_graph(6)):
            one = exact_min_oriented_diameter(g, threads=1)
            two = exact_min_oriented_diameter(g, threads=2)
            assert one[0] == two[0]
            assert one[1].arcs == two[1].arcs

    def test_stats_are_collected(self):
        stats = SearchStats()
        exact_min_oriented_diameter(petersen_graph(), stats=stats)
        assert stats.nodes > 0 and stats.leaves >= 1

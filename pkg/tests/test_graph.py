import itertools
import math

import networkx as nx
import pytest
from hypothesis import given, settings

from oridiam.errors import NotConnected, NotDominating, TooLarge
from oridiam.generators import cycle_graph, complete_graph, petersen_graph
from oridiam.graph import (UNREACHABLE, DominatedPair, SubgraphView, UndirectedGraph, bfs_distances,
                           connected_components_without, exact_dominating_set, find_bridges, find_cut_vertices,
                           greedy_dominating_set, is_bridgeless_connected, is_connected, is_dominating_set,
                           min_dominating_set, undirected_diameter)

from conftest import simple_graphs


def G(n, edges):
    return UndirectedGraph.from_edges(n, edges)


P3 = G(3, [(0, 1), (1, 2)])
C5 = cycle_graph(5)
BARBELL = G(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def star(k):
    return G(k + 1, [(0, i) for i in range(1, k + 1)])


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return h


class TestConstruction:
    def test_rejects_loops_and_parallel_edges(self):
        with pytest.raises(ValueError):
            G(2, [(0, 0)])
        with pytest.raises(ValueError):
            G(2, [(0, 1), (1, 0)])
        with pytest.raises(ValueError):
            G(2, [(0, 2)])

    def test_adjacency_sorted_and_symmetric(self):
        g = G(4, [(3, 0), (2, 0), (1, 3)])
        assert g.adj == ((2, 3), (3,), (0,), (0, 1))
        assert g.edges == ((0, 2), (0, 3), (1, 3))
        for u, v in g.edges:
            assert v in g.adj[u] and u in g.adj[v]

    def test_equality_by_structure(self):
        assert G(3, [(0, 1), (1, 2)]) == G(3, [(2, 1), (1, 0)])
        assert G(3, [(0, 1)]) != G(4, [(0, 1)])

    def test_subgraph_relabels_densely(self):
        g = cycle_graph(6)
        sub, labels = g.subgraph([1, 2, 3], [(1, 2), (2, 3)])
        assert labels == (1, 2, 3)
        assert sub.edges == ((0, 1), (1, 2))


class TestConnectivity:
    def test_examples(self):
        assert is_connected(P3)
        assert not is_connected(G(4, [(0, 1), (2, 3)]))
        assert is_connected(G(1, []))

    def test_bridges_examples(self):
        assert find_bridges(P3) == {(0, 1), (1, 2)}
        assert find_bridges(C5) == set()
        assert find_bridges(BARBELL) == {(2, 3)}
        with pytest.raises(NotConnected):
            find_bridges(G(4, [(0, 1), (2, 3)]))

    def test_cut_vertices_examples(self):
        assert find_cut_vertices(P3) == {1}
        assert find_cut_vertices(C5) == set()
        assert find_cut_vertices(BARBELL) == {2, 3}

    @settings(max_examples=300, deadline=None)
    @given(simple_graphs(max_n=6))
    def test_bridges_match_deletion_oracle(self, g):
        if not is_connected(g):
            return
        expected = {e for e in g.edges if not is_connected(g.without_edges([e]))}
        assert find_bridges(g) == expected

    @settings(max_examples=300, deadline=None)
    @given(simple_graphs(max_n=7))
    def test_cut_vertices_match_component_count(self, g):
        if not is_connected(g):
            return
        expected = {v for v in range(g.n) if len(connected_components_without(g, [v])) >= 2}
        assert find_cut_vertices(g) == expected
        assert find_cut_vertices(g) == set(nx.articulation_points(to_nx(g)))

    def test_bridgeless_connected_on_labels(self):
        assert is_bridgeless_connected([10, 20, 30], [(10, 20), (20, 30), (10, 30)])
        assert not is_bridgeless_connected([10, 20, 30], [(10, 20), (20, 30)])
        assert not is_bridgeless_connected([1, 2, 3, 4], [(1, 2), (3, 4)])


class TestDistances:
    def test_bfs_examples(self):
        assert bfs_distances(cycle_graph(6), 0) == [0, 1, 2, 3, 2, 1]
        assert bfs_distances(star(4), 0) == [0, 1, 1, 1, 1]
        assert bfs_distances(G(2, []), 0) == [0, UNREACHABLE]
        assert math.isinf(UNREACHABLE)

    def test_components_examples(self):
        assert connected_components_without(star(3), [0]) == [[1], [2], [3]]
        assert connected_components_without(C5, [0]) == [[1, 2, 3, 4]]
        p5 = G(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
        assert connected_components_without(p5, [2]) == [[0, 1], [3, 4]]

    def test_diameter_matches_networkx(self):
        for g in (petersen_graph(), cycle_graph(7), complete_graph(5), BARBELL):
            assert undirected_diameter(g) == nx.diameter(to_nx(g))


class TestDomination:
    def test_is_dominating_examples(self):
        assert is_dominating_set(star(4), {0})
        assert is_dominating_set(cycle_graph(6), {0, 3})
        assert not is_dominating_set(cycle_graph(6), {0})

    def test_min_dominating_examples(self):
        assert min_dominating_set(star(5), "exact") == {0}
        assert len(min_dominating_set(cycle_graph(6), "exact")) == 2
        assert len(min_dominating_set(petersen_graph(), "exact")) == 3

    def test_petersen_needs_three(self):
        g = petersen_graph()
        assert not any(is_dominating_set(g, s) for s in itertools.combinations(range(10), 2))
        assert any(is_dominating_set(g, s) for s in itertools.combinations(range(10), 3))

    def test_exact_limit(self):
        with pytest.raises(TooLarge):
            exact_dominating_set(cycle_graph(40))
        assert len(exact_dominating_set(cycle_graph(40), limit=40)) == 14

    def test_unknown_mode(self):
        with pytest.raises(ValueError):
            min_dominating_set(C5, "fast")

    @settings(max_examples=200, deadline=None)
    @given(simple_graphs(max_n=8))
    def test_exact_is_minimum(self, g):
        d = exact_dominating_set(g)
        assert is_dominating_set(g, d)
        smaller = itertools.combinations(range(g.n), len(d) - 1) if d else []
        assert not any(is_dominating_set(g, s) for s in smaller)
        greedy = greedy_dominating_set(g)
        assert is_dominating_set(g, greedy)
        assert len(greedy) >= len(d)


class TestDominatedPair:
    def test_rejects_non_dominating(self):
        with pytest.raises(NotDominating):
            DominatedPair(cycle_graph(6), {0})

    def test_fmap_partial_and_total(self):
        c6 = DominatedPair(cycle_graph(6), {0, 3})
        assert c6.fmap == {1: 0, 5: 0, 2: 3, 4: 3}
        assert c6.has_unique_dominators
        c4 = DominatedPair(cycle_graph(4), {0, 2})
        assert c4.fmap == {}
        assert not c4.has_unique_dominators

    def test_subgraph_view_pair(self):
        host = DominatedPair(cycle_graph(6), {0, 3})
        view = SubgraphView.build(host, [0, 1, 2, 3], [(0, 1), (1, 2), (2, 3)])
        assert view.labels == (0, 1, 2, 3)
        assert view.pair.dset == {0, 3}
        assert view.host_edges() == {(0, 1), (1, 2), (2, 3)}

import random
from collections import deque

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oridiam.errors import HasBridge, NotACycle, NotAPath, NotConnected, NotStrong
from oridiam.generators import cycle_graph, petersen_graph
from oridiam.graph import UNREACHABLE, UndirectedGraph
from oridiam.orientation import (DiameterProfile, Orientation, diam_profile, directed_distances,
                                 is_strongly_connected, oriented_diameter, reverse_all, reverse_cycle, reverse_path,
                                 robbins_orient)

from conftest import bridgeless_graphs


def directed_cycle(n):
    return Orientation.from_arcs(cycle_graph(n), [(i, (i + 1) % n) for i in range(n)])


def random_orientation(g, rng):
    return Orientation.from_arcs(g, [(u, v) if rng.random() < 0.5 else (v, u) for u, v in g.edges])


def random_strong(g, rng, tries=200):
    for _ in range(tries):
        h = random_orientation(g, rng)
        if is_strongly_connected(h):
            return h
    return robbins_orient(g)


def to_nx(h):
    d = nx.DiGraph()
    d.add_nodes_from(range(h.base.n))
    d.add_edges_from(h.arcs)
    return d


def naive_profile(h, dset):
    lengths = dict(nx.all_pairs_shortest_path_length(to_nx(h)))
    best = {0: 0, 1: 0, 2: 0}
    for u in range(h.base.n):
        for v in range(h.base.n):
            if u != v:
                i = (u not in dset) + (v not in dset)
                best[i] = max(best[i], lengths[u][v])
    return DiameterProfile(max(best.values()), best[0], best[1], best[2])


def shortest_arc_path(h, src, dst, banned=frozenset()):
    prev = {src: None}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in h.out_adj[v]:
            if (v, w) not in banned and w not in prev:
                prev[w] = v
                queue.append(w)
    if dst not in prev:
        return None
    path = []
    v = dst
    while prev[v] is not None:
        path.append((prev[v], v))
        v = prev[v]
    return path[::-1]


class TestOrientation:
    def test_from_arcs_validates(self):
        c3 = cycle_graph(3)
        with pytest.raises(ValueError):
            Orientation.from_arcs(c3, [(0, 1), (1, 2)])
        with pytest.raises(ValueError):
            Orientation.from_arcs(c3, [(0, 1), (1, 0), (1, 2), (2, 0)])
        with pytest.raises(ValueError):
            Orientation.from_arcs(c3, [(0, 1), (1, 2), (2, 0), (0, 5)])

    def test_arcs_follow_edge_order(self):
        h = Orientation.from_arcs(cycle_graph(3), [(2, 0), (0, 1), (1, 2)])
        assert h.arcs == ((0, 1), (2, 0), (1, 2))
        assert h.direction(0, 2) == (2, 0)
        assert h.has_arc(1, 2) and not h.has_arc(2, 1)


class TestStrongConnectivity:
    def test_examples(self):
        assert is_strongly_connected(directed_cycle(3))
        path = Orientation.from_arcs(UndirectedGraph.from_edges(3, [(0, 1), (1, 2)]), [(0, 1), (1, 2)])
        assert not is_strongly_connected(path)
        assert is_strongly_connected(Orientation.from_arcs(UndirectedGraph.from_edges(1, []), []))

    def test_robbins_examples(self):
        h = robbins_orient(cycle_graph(4))
        assert is_strongly_connected(h)
        assert h.arcs in (directed_cycle(4).arcs, reverse_all(directed_cycle(4)).arcs)
        with pytest.raises(HasBridge) as info:
            robbins_orient(UndirectedGraph.from_edges(3, [(0, 1), (1, 2)]))
        assert info.value.bridges == [(0, 1), (1, 2)]
        with pytest.raises(NotConnected):
            robbins_orient(UndirectedGraph.from_edges(4, [(0, 1), (2, 3)]))
        assert is_strongly_connected(robbins_orient(petersen_graph()))

    @settings(max_examples=200, deadline=None)
    @given(bridgeless_graphs(max_n=40, max_extra=10))
    def test_robbins_always_strong(self, g):
        h = robbins_orient(g)
        assert is_strongly_connected(h)
        assert nx.is_strongly_connected(to_nx(h))

    @settings(max_examples=200, deadline=None)
    @given(bridgeless_graphs(max_n=9), st.integers(0, 10**6))
    def test_matches_networkx(self, g, seed):
        h = random_orientation(g, random.Random(seed))
        assert is_strongly_connected(h) == nx.is_strongly_connected(to_nx(h))


class TestDistances:
    def test_directed_distances_examples(self):
        assert directed_distances(directed_cycle(5), 0) == [0, 1, 2, 3, 4]
        g = UndirectedGraph.from_edges(3, [(0, 1)])
        assert directed_distances(Orientation.from_arcs(g, [(0, 1)]), 0) == [0, 1, UNREACHABLE]
        assert directed_distances(Orientation.from_arcs(UndirectedGraph.from_edges(1, []), []), 0) == [0]

    def test_profile_directed_triangle(self):
        p = diam_profile(directed_cycle(3), {0})
        assert (p.diam, p.diam0, p.diam1, p.diam2) == (2, 0, 2, 2)

    def test_profile_directed_pentagon(self):
        p = diam_profile(directed_cycle(5), {0, 2})
        assert (p.diam, p.diam0, p.diam1, p.diam2) == (4, 3, 4, 4)
        assert p == naive_profile(directed_cycle(5), {0, 2})

    def test_profile_two_dominator_hexagon(self):
        # two dominators joined by two 3-paths, oriented as one directed cycle
        p = diam_profile(directed_cycle(6), {0, 3})
        assert p.diam0 <= 4 and p.diam1 <= 5 and p.diam2 <= 5
        assert (p.diam0, p.diam1, p.diam2, p.extension_bound) == (3, 5, 5, 7)

    def test_profile_requires_strong(self):
        path = Orientation.from_arcs(UndirectedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]),
                                     [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(NotStrong):
            diam_profile(path, {0})
        assert oriented_diameter(path) == UNREACHABLE

    def test_extension_bound(self):
        assert DiameterProfile(5, 1, 3, 5).extension_bound == 5
        assert DiameterProfile(5, 3, 3, 5).extension_bound == 7

    @settings(max_examples=150, deadline=None)
    @given(bridgeless_graphs(max_n=10), st.integers(0, 10**6))
    def test_profile_matches_naive(self, g, seed):
        rng = random.Random(seed)
        h = random_strong(g, rng)
        dset = {v for v in range(g.n) if rng.random() < 0.4} or {0}
        assert diam_profile(h, dset) == naive_profile(h, dset)
        assert oriented_diameter(h) == nx.diameter(to_nx(h))


class TestReversal:
    def test_reverse_all_pentagon(self):
        r = reverse_all(directed_cycle(5))
        assert set(r.arcs) == {((i + 1) % 5, i) for i in range(5)}
        assert oriented_diameter(r) == 4

    def test_reverse_cycle_rejects_bad_input(self):
        h = robbins_orient(petersen_graph())
        with pytest.raises(NotACycle):
            reverse_cycle(h, [h.arcs[0]])
        with pytest.raises(NotACycle):
            reverse_cycle(h, [])

    def test_reverse_path_needs_second_path(self):
        h = directed_cycle(5)
        with pytest.raises(NotAPath):
            reverse_path(h, [(0, 1), (1, 2)])
        with pytest.raises(NotAPath):
            reverse_path(h, [(1, 0)])

    def test_reverse_requires_strong(self):
        path = Orientation.from_arcs(UndirectedGraph.from_edges(3, [(0, 1), (1, 2), (0, 2)]),
                                     [(0, 1), (1, 2), (0, 2)])
        with pytest.raises(NotStrong):
            reverse_cycle(path, [(0, 1)])

    @settings(max_examples=150, deadline=None)
    @given(bridgeless_graphs(max_n=10), st.integers(0, 10**6))
    def test_reversal_facts(self, g, seed):
        rng = random.Random(seed)
        h = random_strong(g, rng)
        r = reverse_all(h)
        assert is_strongly_connected(r)
        assert oriented_diameter(r) == oriented_diameter(h)
        assert reverse_all(r) == h
        t, hd = h.arcs[rng.randrange(g.m)]
        cycle = [(t, hd)] + shortest_arc_path(h, hd, t)
        assert is_strongly_connected(reverse_cycle(h, cycle))
        x, y = rng.sample(range(g.n), 2)
        first = shortest_arc_path(h, x, y)
        if shortest_arc_path(h, x, y, frozenset(first)) is not None:
            assert is_strongly_connected(reverse_path(h, first))

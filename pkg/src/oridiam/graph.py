"""Simple undirected graphs and the structural queries built on them.

Vertices are dense integers ``0..n-1``.  Graphs are immutable; every edit
produces a new graph, which keeps ids dense and makes traces easy to replay.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import NotConnected, NotDominating, TooLarge

UNREACHABLE = math.inf

EXACT_DOMINATION_LIMIT = 32

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True, eq=False)
class UndirectedGraph:
    n: int
    edges: tuple[Edge, ...]
    adj: tuple[tuple[int, ...], ...] = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "UndirectedGraph":
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        seen: set[Edge] = set()
        nbrs: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise ValueError(f"self-loop at {u}")
            e = edge_key(u, v)
            if e in seen:
                raise ValueError(f"parallel edge {e[0]}-{e[1]}")
            seen.add(e)
            nbrs[u].append(v)
            nbrs[v].append(u)
        return cls(n, tuple(sorted(seen)), tuple(tuple(sorted(a)) for a in nbrs))

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.edge_set

    def vertices(self) -> range:
        return range(self.n)

    def __eq__(self, other):
        if not isinstance(other, UndirectedGraph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"UndirectedGraph(n={self.n}, m={self.m})"

    def without_edges(self, removed: Iterable[tuple[int, int]]) -> "UndirectedGraph":
        drop = {edge_key(u, v) for u, v in removed}
        return UndirectedGraph.from_edges(self.n, (e for e in self.edges if e not in drop))

    def with_edges(self, added: Iterable[tuple[int, int]], n: int | None = None) -> "UndirectedGraph":
        return UndirectedGraph.from_edges(self.n if n is None else n, list(self.edges) + list(added))

    def induced(self, vertices: Iterable[int]) -> tuple["UndirectedGraph", tuple[int, ...]]:
        """Induced subgraph, relabelled densely in ascending order of the old ids."""
        keep = set(vertices)
        return self.subgraph(keep, (e for e in self.edges if e[0] in keep and e[1] in keep))

    def subgraph(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> tuple["UndirectedGraph", tuple[int, ...]]:
        labels = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(labels)}
        new_edges = []
        for u, v in edges:
            if not self.has_edge(u, v):
                raise ValueError(f"{u}-{v} is not an edge")
            new_edges.append((pos[u], pos[v]))
        return UndirectedGraph.from_edges(len(labels), new_edges), labels


def _require_connected(g: UndirectedGraph) -> None:
    if not is_connected(g):
        raise NotConnected("graph is not connected")


def is_connected(g: UndirectedGraph) -> bool:
    if g.n <= 1:
        return True
    seen = [False] * g.n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        v = stack.pop()
        for w in g.adj[v]:
            if not seen[w]:
                seen[w] = True
                count += 1
                stack.append(w)
    return count == g.n


def _lowpoint_scan(adj: Mapping[int, Iterable[int]] | tuple, root: int):
    """Iterative DFS computing discovery times, lowpoints and parents.

    Returns (order, disc, low, parent) restricted to the vertices reachable
    from ``root``.
    """
    disc = {root: 0}
    low = {root: 0}
    parent = {root: None}
    order = [root]
    stack = [(root, iter(adj[root]))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for w in it:
            if w not in disc:
                disc[w] = low[w] = len(order)
                parent[w] = v
                order.append(w)
                stack.append((w, iter(adj[w])))
                advanced = True
                break
            if w != parent[v]:
                low[v] = min(low[v], disc[w])
        if not advanced:
            stack.pop()
            p = parent[v]
            if p is not None:
                low[p] = min(low[p], low[v])
    return order, disc, low, parent


def find_bridges(g: UndirectedGraph) -> set[Edge]:
    _require_connected(g)
    if g.n <= 1:
        return set()
    order, disc, low, parent = _lowpoint_scan(g.adj, 0)
    return {edge_key(v, parent[v]) for v in order[1:] if low[v] > disc[parent[v]]}


def find_cut_vertices(g: UndirectedGraph) -> set[int]:
    _require_connected(g)
    if g.n <= 2:
        return set()
    order, disc, low, parent = _lowpoint_scan(g.adj, 0)
    cuts = set()
    root_children = 0
    for v in order[1:]:
        p = parent[v]
        if p == 0:
            root_children += 1
        elif low[v] >= disc[p]:
            cuts.add(p)
    if root_children >= 2:
        cuts.add(0)
    return cuts


def is_bridgeless_connected(vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> bool:
    """Connectivity and 2-edge-connectivity of the graph given by explicit sets.

    Works on arbitrary vertex labels so callers can test candidate subgraphs
    without relabelling.
    """
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    if len(adj) <= 1:
        return True
    root = min(adj)
    order, disc, low, parent = _lowpoint_scan(adj, root)
    if len(order) != len(adj):
        return False
    return all(low[v] <= disc[parent[v]] for v in order[1:])


def bfs_distances(g: UndirectedGraph, src: int) -> list:
    dist = [UNREACHABLE] * g.n
    dist[src] = 0
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def undirected_diameter(g: UndirectedGraph):
    best = 0
    for s in range(g.n):
        best = max(best, max(bfs_distances(g, s)))
    return best


def connected_components_without(g: UndirectedGraph, removed: Iterable[int]) -> list[list[int]]:
    gone = set(removed)
    seen = set(gone)
    comps = []
    for s in range(g.n):
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for w in g.adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_dominating_set(g: UndirectedGraph, dset: Iterable[int]) -> bool:
    d = set(dset)
    return all(v in d or any(w in d for w in g.adj[v]) for v in range(g.n))


def greedy_dominating_set(g: UndirectedGraph) -> frozenset[int]:
    undominated = set(range(g.n))
    chosen = set()
    while undominated:
        best, gain = -1, -1
        for v in range(g.n):
            if v in chosen:
                continue
            c = (v in undominated) + sum(1 for w in g.adj[v] if w in undominated)
            if c > gain:
                best, gain = v, c
        chosen.add(best)
        undominated.discard(best)
        undominated.difference_update(g.adj[best])
    return frozenset(chosen)


def exact_dominating_set(g: UndirectedGraph, limit: int = EXACT_DOMINATION_LIMIT) -> frozenset[int]:
    """Minimum dominating set by branch and bound over bitmasks.

    Branches on the undominated vertex with the fewest possible dominators;
    the lower bound divides the uncovered count by the largest closed
    neighbourhood.
    """
    n = g.n
    if n > limit:
        raise TooLarge(f"exact domination limited to {limit} vertices, got {n}")
    if n == 0:
        return frozenset()
    closed = [(1 << v) | sum(1 << w for w in g.adj[v]) for v in range(n)]
    full = (1 << n) - 1
    maxcover = max(bin(c).count("1") for c in closed)
    best = sorted(greedy_dominating_set(g))
    best_size = len(best)

    def rec(dominated: int, chosen: list[int]) -> None:
        nonlocal best, best_size
        if dominated == full:
            if len(chosen) < best_size:
                best, best_size = list(chosen), len(chosen)
            return
        missing = bin(full & ~dominated).count("1")
        if len(chosen) + -(-missing // maxcover) >= best_size:
            return
        options = None
        rest = full & ~dominated
        while rest:
            low = rest & -rest
            v = low.bit_length() - 1
            rest ^= low
            cands = [v] + [w for w in g.adj[v]]
            if options is None or len(cands) < len(options):
                options = cands
        gains = sorted(options, key=lambda c: (-bin(closed[c] & ~dominated).count("1"), c))
        for c in gains:
            chosen.append(c)
            rec(dominated | closed[c], chosen)
            chosen.pop()

    rec(0, [])
    return frozenset(best)


def min_dominating_set(g: UndirectedGraph, mode: str = "exact", limit: int = EXACT_DOMINATION_LIMIT) -> frozenset[int]:
    if mode == "exact":
        return exact_dominating_set(g, limit)
    if mode == "greedy":
        return greedy_dominating_set(g)
    raise ValueError(f"unknown domination mode {mode!r}")


@dataclass(frozen=True, eq=False)
class DominatedPair:
    """A graph with a dominating set D.

    ``fmap`` sends every vertex outside D that has exactly one neighbour in D
    to that neighbour; it is total exactly when dominators are unique.
    """

    graph: UndirectedGraph
    dset: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "dset", frozenset(self.dset))
        if any(not 0 <= v < self.graph.n for v in self.dset):
            raise ValueError("dominating set contains unknown vertices")
        if not is_dominating_set(self.graph, self.dset):
            raise NotDominating("vertex set is not dominating")

    @cached_property
    def fmap(self) -> dict[int, int]:
        out = {}
        for v in range(self.graph.n):
            if v in self.dset:
                continue
            ds = [w for w in self.graph.adj[v] if w in self.dset]
            if len(ds) == 1:
                out[v] = ds[0]
        return out

    @property
    def has_unique_dominators(self) -> bool:
        return len(self.fmap) == self.graph.n - len(self.dset)

    def dominator_edges(self) -> set[Edge]:
        return {edge_key(v, f) for v, f in self.fmap.items()}

    def __eq__(self, other):
        if not isinstance(other, DominatedPair):
            return NotImplemented
        return self.graph == other.graph and self.dset == other.dset

    def __hash__(self):
        return hash((self.graph, self.dset))

    def __repr__(self):
        return f"DominatedPair(n={self.graph.n}, m={self.graph.m}, D={sorted(self.dset)})"


@dataclass(frozen=True)
class SubgraphView:
    """A subgraph of ``host`` relabelled densely; ``labels[i]`` is the host id of vertex i."""

    host: DominatedPair
    graph: UndirectedGraph
    labels: tuple[int, ...]

    @classmethod
    def build(cls, host: DominatedPair, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> "SubgraphView":
        g, labels = host.graph.subgraph(vertices, edges)
        return cls(host, g, labels)

    @cached_property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.labels)}

    @cached_property
    def pair(self) -> DominatedPair:
        pos = self.position
        return DominatedPair(self.graph, frozenset(pos[d] for d in self.host.dset if d in pos))

    def host_edges(self) -> set[Edge]:
        lab = self.labels
        return {edge_key(lab[u], lab[v]) for u, v in self.graph.edges}

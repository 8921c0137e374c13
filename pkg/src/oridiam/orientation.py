"""Orientations of undirected graphs, diameter profiles and reversals."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

from .errors import HasBridge, NotACycle, NotAPath, NotConnected, NotStrong
from .graph import UNREACHABLE, UndirectedGraph, edge_key, find_bridges, is_connected


@dataclass(frozen=True, eq=False)
class Orientation:
    """One direction per edge; ``arcs[i]`` is the (tail, head) of ``base.edges[i]``."""

    base: UndirectedGraph
    arcs: tuple[tuple[int, int], ...]

    @classmethod
    def from_arcs(cls, base: UndirectedGraph, arcs: Iterable[tuple[int, int]]) -> "Orientation":
        by_edge: dict[tuple[int, int], tuple[int, int]] = {}
        for t, h in arcs:
            e = edge_key(t, h)
            if e not in base.edge_set:
                raise ValueError(f"arc {t}->{h} is not an edge of the base graph")
            if e in by_edge:
                raise ValueError(f"edge {e[0]}-{e[1]} directed twice")
            by_edge[e] = (t, h)
        if len(by_edge) != base.m:
            missing = [e for e in base.edges if e not in by_edge][:5]
            raise ValueError(f"edges left undirected, e.g. {missing}")
        return cls(base, tuple(by_edge[e] for e in base.edges))

    @cached_property
    def out_adj(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.base.n)]
        for t, h in self.arcs:
            out[t].append(h)
        return tuple(tuple(sorted(a)) for a in out)

    @cached_property
    def in_adj(self) -> tuple[tuple[int, ...], ...]:
        inn: list[list[int]] = [[] for _ in range(self.base.n)]
        for t, h in self.arcs:
            inn[h].append(t)
        return tuple(tuple(sorted(a)) for a in inn)

    @cached_property
    def arc_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.arcs)

    def has_arc(self, tail: int, head: int) -> bool:
        return (tail, head) in self.arc_set

    def direction(self, u: int, v: int) -> tuple[int, int]:
        return self.arcs[self.base.edge_index[edge_key(u, v)]]

    def __eq__(self, other):
        if not isinstance(other, Orientation):
            return NotImplemented
        return self.base == other.base and self.arcs == other.arcs

    def __hash__(self):
        return hash((self.base, self.arcs))

    def __repr__(self):
        return f"Orientation(n={self.base.n}, m={self.base.m})"


@dataclass(frozen=True)
class DiameterProfile:
    diam: float
    diam0: float
    diam1: float
    diam2: float

    @property
    def extension_bound(self):
        """max(diam0 + 4, diam1 + 2, diam2): what extending the orientation may reach."""
        return max(self.diam0 + 4, self.diam1 + 2, self.diam2)

    def as_dict(self) -> dict:
        return {"diam": self.diam, "diam0": self.diam0, "diam1": self.diam1, "diam2": self.diam2}


def _reach(adj, src: int) -> int:
    seen = {src}
    stack = [src]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen)


def is_strongly_connected(h: Orientation) -> bool:
    n = h.base.n
    if n <= 1:
        return True
    return _reach(h.out_adj, 0) == n and _reach(h.in_adj, 0) == n


def dfs_orientation_order(g: UndirectedGraph, root: int = 0):
    """Depth-first search from ``root`` in ascending neighbour order.

    Returns (tree arcs in discovery order, back arcs in discovery order);
    tree arcs point away from the root, back arcs from descendant to ancestor.
    """
    disc = {root: 0}
    parent = {root: None}
    tree, back = [], []
    done: set[tuple[int, int]] = set()
    stack = [(root, iter(g.adj[root]))]
    while stack:
        v, it = stack[-1]
        advanced = False
        for w in it:
            e = edge_key(v, w)
            if e in done:
                continue
            done.add(e)
            if w not in disc:
                disc[w] = len(disc)
                parent[w] = v
                tree.append((v, w))
                stack.append((w, iter(g.adj[w])))
                advanced = True
                break
            back.append((v, w))
        if not advanced:
            stack.pop()
    return tree, back


def robbins_orient(g: UndirectedGraph) -> Orientation:
    if not is_connected(g):
        raise NotConnected("graph is not connected")
    bridges = find_bridges(g)
    if bridges:
        raise HasBridge(bridges)
    if g.n <= 1:
        return Orientation(g, ())
    tree, back = dfs_orientation_order(g)
    return Orientation.from_arcs(g, tree + back)


def directed_distances(h: Orientation, src: int) -> list:
    dist = [UNREACHABLE] * h.base.n
    dist[src] = 0
    queue = deque([src])
    out = h.out_adj
    while queue:
        v = queue.popleft()
        for w in out[v]:
            if dist[w] == UNREACHABLE:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def all_pairs_distances(h: Orientation) -> list[list]:
    return [directed_distances(h, s) for s in range(h.base.n)]


def profile_from_distances(dist: Sequence[Sequence], dset: Iterable[int]) -> DiameterProfile:
    d = set(dset)
    n = len(dist)
    best = [0, 0, 0]
    for u in range(n):
        row = dist[u]
        cu = u not in d
        for v in range(n):
            if u != v:
                i = cu + (v not in d)
                if row[v] > best[i]:
                    best[i] = row[v]
    return DiameterProfile(max(best), best[0], best[1], best[2])


def diam_profile(h: Orientation, dset: Iterable[int]) -> DiameterProfile:
    if not is_strongly_connected(h):
        raise NotStrong("orientation is not strongly connected")
    return profile_from_distances(all_pairs_distances(h), dset)


def oriented_diameter(h: Orientation):
    if not is_strongly_connected(h):
        return UNREACHABLE
    return max((max(row) for row in all_pairs_distances(h)), default=0)


def reverse_all(h: Orientation) -> Orientation:
    return Orientation(h.base, tuple((b, a) for a, b in h.arcs))


def _flip(h: Orientation, arcs: Iterable[tuple[int, int]]) -> Orientation:
    flip = set(arcs)
    return Orientation(h.base, tuple((b, a) if (a, b) in flip else (a, b) for a, b in h.arcs))


def _check_trail(h: Orientation, arcs: Sequence[tuple[int, int]], error) -> None:
    if not arcs:
        raise error("empty arc sequence")
    used = set()
    for i, (t, hd) in enumerate(arcs):
        if not h.has_arc(t, hd):
            raise error(f"{t}->{hd} is not an arc of the orientation")
        e = edge_key(t, hd)
        if e in used:
            raise error(f"edge {e[0]}-{e[1]} repeated")
        used.add(e)
        if i and arcs[i - 1][1] != t:
            raise error("arcs are not consecutive")


def reverse_cycle(h: Orientation, cycle: Sequence[tuple[int, int]]) -> Orientation:
    """Reverse a directed closed trail of ``h``; strong connectivity survives."""
    if not is_strongly_connected(h):
        raise NotStrong("orientation is not strongly connected")
    cycle = [tuple(a) for a in cycle]
    _check_trail(h, cycle, NotACycle)
    if cycle[-1][1] != cycle[0][0]:
        raise NotACycle("arc sequence is not closed")
    return _flip(h, cycle)


def reverse_path(h: Orientation, path: Sequence[tuple[int, int]]) -> Orientation:
    """Reverse a directed x->y path for which an edge-disjoint x->y path also exists."""
    if not is_strongly_connected(h):
        raise NotStrong("orientation is not strongly connected")
    path = [tuple(a) for a in path]
    _check_trail(h, path, NotAPath)
    x, y = path[0][0], path[-1][1]
    if x == y:
        raise NotAPath("path is closed; use reverse_cycle")
    used = set(path)
    seen = {x}
    stack = [x]
    while stack:
        v = stack.pop()
        for w in h.out_adj[v]:
            if (v, w) not in used and w not in seen:
                seen.add(w)
                stack.append(w)
    if y not in seen:
        raise NotAPath("no second edge-disjoint directed path between the endpoints")
    return _flip(h, path)

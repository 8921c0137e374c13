"""Normalising a (graph, dominating set) pair and pulling orientations back.

The normal form asks for a connected bridgeless graph in which

* no edge joins two dominators,
* every other vertex has exactly one dominator neighbour,
* no edge can be deleted without creating a bridge or losing domination,
* every dominator carries exactly one isolated triangle (two if |D| = 1).

``to_first_standard_form`` reaches it with four kinds of local edits, all
recorded in a ``TransformTrace`` so that an orientation of the normalised
graph can be mapped back with ``pull_back_orientation``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import HasBridge, InconsistentPathDirection, NotConnected
from .graph import (
    EXACT_DOMINATION_LIMIT,
    DominatedPair,
    UndirectedGraph,
    bfs_distances,
    edge_key,
    exact_dominating_set,
    find_bridges,
    is_bridgeless_connected,
    is_connected,
)
from .orientation import Orientation


class _Work:
    """Mutable scratch graph used while replaying edits."""

    def __init__(self, n: int, edges, dset):
        self.n = n
        self.edges = set(edges)
        self.dset = set(dset)

    @classmethod
    def of(cls, pair: DominatedPair) -> "_Work":
        return cls(pair.graph.n, pair.graph.edges, pair.dset)

    def graph(self) -> UndirectedGraph:
        return UndirectedGraph.from_edges(self.n, self.edges)

    def pair(self) -> DominatedPair:
        return DominatedPair(self.graph(), frozenset(self.dset))

    def add_vertices(self, *ids: int) -> None:
        for k, v in enumerate(ids):
            if v != self.n + k:
                raise ValueError("new vertices must take the next free ids")
        self.n += len(ids)

    def remove_edge(self, u: int, v: int) -> None:
        self.edges.remove(edge_key(u, v))

    def add_edge(self, u: int, v: int) -> None:
        e = edge_key(u, v)
        if e in self.edges:
            raise ValueError(f"edge {u}-{v} already present")
        self.edges.add(e)


@dataclass(frozen=True)
class DominatorEdgeSplit:
    """Edge u-v between dominators becomes u-a-b-v with a next to u."""

    u: int
    v: int
    a: int
    b: int

    def apply(self, w: _Work) -> None:
        w.remove_edge(self.u, self.v)
        w.add_vertices(self.a, self.b)
        w.add_edge(self.u, self.a)
        w.add_edge(self.a, self.b)
        w.add_edge(self.b, self.v)


@dataclass(frozen=True)
class MultiDominatorSplit:
    """Edge vertex-dominator becomes vertex-mid-dominator."""

    vertex: int
    dominator: int
    mid: int

    def apply(self, w: _Work) -> None:
        w.remove_edge(self.vertex, self.dominator)
        w.add_vertices(self.mid)
        w.add_edge(self.vertex, self.mid)
        w.add_edge(self.mid, self.dominator)


@dataclass(frozen=True)
class EdgeDeleted:
    u: int
    v: int

    def apply(self, w: _Work) -> None:
        w.remove_edge(self.u, self.v)


@dataclass(frozen=True)
class TriangleAdded:
    dominator: int
    a: int
    b: int

    def apply(self, w: _Work) -> None:
        w.add_vertices(self.a, self.b)
        w.add_edge(self.dominator, self.a)
        w.add_edge(self.dominator, self.b)
        w.add_edge(self.a, self.b)


@dataclass(frozen=True)
class TriangleRemoved:
    """Drop the isolated triangle {u, v}; larger ids shift down by two."""

    dominator: int
    u: int
    v: int

    def relabel(self, x: int) -> int:
        return x - (x > self.u) - (x > self.v)

    def apply(self, w: _Work) -> None:
        gone = {self.u, self.v}
        kept = [e for e in w.edges if not (e[0] in gone or e[1] in gone)]
        w.edges = {edge_key(self.relabel(a), self.relabel(b)) for a, b in kept}
        w.dset = {self.relabel(d) for d in w.dset}
        w.n -= 2


TransformStep = Union[DominatorEdgeSplit, MultiDominatorSplit, EdgeDeleted, TriangleAdded, TriangleRemoved]


@dataclass(frozen=True)
class TransformTrace:
    original: DominatedPair
    steps: tuple[TransformStep, ...]

    def replay(self) -> list[DominatedPair]:
        """All intermediate pairs, starting with the original."""
        w = _Work.of(self.original)
        out = [self.original]
        for step in self.steps:
            step.apply(w)
            out.append(w.pair())
        return out

    def final(self) -> DominatedPair:
        w = _Work.of(self.original)
        for step in self.steps:
            step.apply(w)
        return w.pair()

    def __len__(self):
        return len(self.steps)


@dataclass(frozen=True)
class StandardFormPair:
    pair: DominatedPair
    triangles: dict

    @classmethod
    def of(cls, pair: DominatedPair) -> "StandardFormPair":
        return cls(pair, isolated_triangles(pair))

    @property
    def graph(self) -> UndirectedGraph:
        return self.pair.graph

    @property
    def dset(self) -> frozenset[int]:
        return self.pair.dset

    @property
    def fmap(self) -> dict[int, int]:
        return self.pair.fmap


def check_isolated_triangle(p: DominatedPair, u: int, v: int):
    """The dominator w if {u, v} is an isolated triangle at w, else None."""
    g = p.graph
    if u == v or u in p.dset or v in p.dset or not g.has_edge(u, v):
        return None
    others = (set(g.adj[u]) | set(g.adj[v])) - {u, v}
    if len(others) != 1:
        return None
    w = next(iter(others))
    if w not in p.dset or not g.has_edge(u, w) or not g.has_edge(v, w):
        return None
    return w


def isolated_triangles(p: DominatedPair) -> dict[int, list[tuple[int, int]]]:
    out: dict[int, list[tuple[int, int]]] = {d: [] for d in sorted(p.dset)}
    g = p.graph
    for u, v in g.edges:
        if g.degree(u) == 2 and g.degree(v) == 2:
            w = check_isolated_triangle(p, u, v)
            if w is not None:
                out[w].append((u, v))
    return out


def _removable(w: _Work, e) -> bool:
    u, v = e
    if u in w.dset or v in w.dset:
        return False
    rest = w.edges - {e}
    return is_bridgeless_connected(range(w.n), rest)


def to_first_standard_form(p: DominatedPair) -> tuple[StandardFormPair, TransformTrace]:
    g = p.graph
    if not is_connected(g):
        raise NotConnected("graph is not connected")
    bridges = find_bridges(g)
    if bridges:
        raise HasBridge(bridges)
    w = _Work.of(p)
    steps: list[TransformStep] = []

    def do(step) -> None:
        step.apply(w)
        steps.append(step)

    for u, v in sorted(w.edges):
        if u in w.dset and v in w.dset:
            do(DominatorEdgeSplit(u, v, w.n, w.n + 1))

    adj: dict[int, set[int]] = {x: set() for x in range(w.n)}
    for a, b in w.edges:
        adj[a].add(b)
        adj[b].add(a)
    for x in range(w.n):
        if x in w.dset:
            continue
        doms = sorted(d for d in adj[x] if d in w.dset)
        for d in doms[1:]:
            do(MultiDominatorSplit(x, d, w.n))

    changed = True
    while changed:
        changed = False
        for e in sorted(w.edges):
            if _removable(w, e):
                do(EdgeDeleted(*e))
                changed = True

    need = 2 if len(w.dset) == 1 else 1
    while True:
        tri = isolated_triangles(w.pair())
        extra = [(d, t) for d, ts in tri.items() for t in ts[need:]]
        if not extra:
            break
        d, (a, b) = extra[-1]
        do(TriangleRemoved(d, a, b))
    tri = isolated_triangles(w.pair())
    for d in sorted(w.dset):
        for _ in range(need - len(tri[d])):
            do(TriangleAdded(d, w.n, w.n + 1))

    final = w.pair()
    return StandardFormPair.of(final), TransformTrace(p, tuple(steps))


def verify_first_standard_form(s: StandardFormPair | DominatedPair, check_minimality: bool = False,
                               limit: int = EXACT_DOMINATION_LIMIT) -> list[str]:
    """Names of the violated normal-form conditions; empty when all hold.

    The size-minimality of D is only checked on request and when the exact
    solver can afford it, since callers routinely supply non-minimum sets.
    """
    pair = s.pair if isinstance(s, StandardFormPair) else s
    g, dset = pair.graph, pair.dset
    bad = []
    ok_graph = is_bridgeless_connected(range(g.n), g.edges)
    if not ok_graph:
        bad.append("bridgeless-connected")
    if check_minimality and g.n <= limit and len(exact_dominating_set(g, limit)) != len(dset):
        bad.append("minimum-size")
    if any(u in dset and v in dset for u, v in g.edges):
        bad.append("no-dominator-edges")
    if not pair.has_unique_dominators:
        bad.append("unique-dominator")
    if ok_graph:
        for e in g.edges:
            rest = g.edge_set - {e}
            if is_bridgeless_connected(range(g.n), rest) and _dominates(g.n, rest, dset):
                bad.append("edge-minimal")
                break
    need = 2 if len(dset) == 1 else 1
    if any(len(ts) != need for ts in isolated_triangles(pair).values()):
        bad.append("triangle-count")
    for d in sorted(dset):
        dist = bfs_distances(g, d)
        if any(dist[e] < 3 for e in dset if e != d):
            bad.append("dominator-distance")
            break
    return bad


def _dominates(n: int, edges, dset) -> bool:
    covered = set(dset)
    for u, v in edges:
        if u in dset:
            covered.add(v)
        if v in dset:
            covered.add(u)
    return len(covered) == n


def pull_back_orientation(trace: TransformTrace, h: Orientation) -> Orientation:
    """Map an orientation of the normalised graph back to the original graph."""
    pairs = trace.replay()
    if pairs[-1].graph != h.base:
        raise ValueError("orientation does not match the end of the trace")
    arcs = {edge_key(a, b): (a, b) for a, b in h.arcs}
    for i in range(len(trace.steps) - 1, -1, -1):
        step = trace.steps[i]
        if isinstance(step, DominatorEdgeSplit):
            arcs = _contract(arcs, [step.u, step.a, step.b, step.v])
        elif isinstance(step, MultiDominatorSplit):
            arcs = _contract(arcs, [step.vertex, step.mid, step.dominator])
        elif isinstance(step, EdgeDeleted):
            arcs[edge_key(step.u, step.v)] = edge_key(step.u, step.v)
        elif isinstance(step, TriangleAdded):
            for e in (edge_key(step.dominator, step.a), edge_key(step.dominator, step.b), (step.a, step.b)):
                del arcs[e]
        elif isinstance(step, TriangleRemoved):
            arcs = _restore_triangle(arcs, step, pairs[i + 1])
        else:
            raise TypeError(f"unknown step {step!r}")
    return Orientation.from_arcs(pairs[0].graph, arcs.values())


def _contract(arcs: dict, path: list[int]) -> dict:
    pieces = [arcs.pop(edge_key(a, b)) for a, b in zip(path, path[1:])]
    forward = all(p == (a, b) for p, (a, b) in zip(pieces, zip(path, path[1:])))
    backward = all(p == (b, a) for p, (a, b) in zip(pieces, zip(path, path[1:])))
    if not (forward or backward):
        raise InconsistentPathDirection(f"replacement path {path} is not directed consistently")
    u, v = path[0], path[-1]
    arcs[edge_key(u, v)] = (u, v) if forward else (v, u)
    return arcs


def _restore_triangle(arcs: dict, step: TriangleRemoved, after: DominatedPair) -> dict:
    d_after = step.relabel(step.dominator)
    kept = isolated_triangles(after).get(d_after, [])
    # copy the rotation of a surviving triangle on the same dominator
    out_first = True
    if kept:
        a, _ = kept[0]
        out_first = arcs[edge_key(d_after, a)] == (d_after, a)
    inverse = {}
    for x in range(after.graph.n + 2):
        if x not in (step.u, step.v):
            inverse[step.relabel(x)] = x
    restored = {}
    for (a, b), (t, hd) in arcs.items():
        ea = edge_key(inverse[a], inverse[b])
        restored[ea] = (inverse[t], inverse[hd])
    d, u, v = step.dominator, step.u, step.v
    cyc = [(d, u), (u, v), (v, d)] if out_first else [(u, d), (v, u), (d, v)]
    for t, hd in cyc:
        restored[edge_key(t, hd)] = (t, hd)
    return restored

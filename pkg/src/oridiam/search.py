"""Exact minimum oriented diameter by branch and bound over edge directions.

The same engine also minimises the weighted quantity
``max d(u, v) + w(u) + w(v)`` over ordered pairs, which with weight 2 on
dominators is the extension bound of a diameter profile.

Edges are decided in depth-first order (tree edges, then back edges) and
the depth-first direction is tried first, so a strong orientation is found
at once.  A partial assignment is pruned when a vertex has all its edges
decided and they all point the same way, or when the lower bound obtained by
treating undecided edges as two-way already reaches the best value found.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import HasBridge, NotConnected, TooLarge
from .graph import UndirectedGraph, find_bridges, is_connected
from .orientation import Orientation, dfs_orientation_order, diam_profile

DEFAULT_MAX_EDGES = 26


@dataclass
class SearchStats:
    nodes: int = 0
    leaves: int = 0


class _Search:
    def __init__(self, g: UndirectedGraph, weights: Sequence[int] | None = None):
        self.g = g
        n = g.n
        self.n = n
        tree, back = dfs_orientation_order(g)
        self.order = tree + back
        self.m = len(self.order)
        self.full = (1 << n) - 1
        self.weights = list(weights) if weights is not None else [0] * n
        self.weighted = any(self.weights)
        # vertices of maximal weight, used to price newly reached vertices
        self.heavy_mask = sum(1 << v for v in range(n) if self.weights[v] > 0)
        self.heavy = max(self.weights, default=0)
        self.out = [0] * n
        self.und = [0] * n
        for u, v in self.order:
            self.und[u] |= 1 << v
            self.und[v] |= 1 << u
        self.n_und = [g.degree(v) for v in range(n)]
        self.n_out = [0] * n
        self.n_in = [0] * n
        self.assigned: list[tuple[int, int]] = []
        self.stats = SearchStats()
        self.sources = list(range(n))

    def bound(self, limit) -> float:
        """Lower bound on the objective, cut short once it reaches ``limit``."""
        full = self.full
        mixed = [o | u for o, u in zip(self.out, self.und)]
        weights, weighted = self.weights, self.weighted
        heavy_mask, heavy = self.heavy_mask, self.heavy
        worst = 0
        sources = self.sources
        for idx, s in enumerate(sources):
            ws = weights[s]
            seen = 1 << s
            frontier = seen
            d = 0
            while seen != full:
                if d + 1 + ws >= limit:
                    if idx:
                        sources.insert(0, sources.pop(idx))
                    return limit
                d += 1
                nxt = 0
                f = frontier
                while f:
                    low = f & -f
                    nxt |= mixed[low.bit_length() - 1]
                    f ^= low
                nxt &= ~seen
                if not nxt:
                    if idx:
                        sources.insert(0, sources.pop(idx))
                    return math.inf
                seen |= nxt
                frontier = nxt
                val = d + ws
                if weighted and nxt & heavy_mask:
                    val += heavy
                if val > worst:
                    worst = val
                    if worst >= limit:
                        return worst
        return worst

    def assign(self, t: int, h: int) -> bool:
        bt, bh = 1 << t, 1 << h
        self.und[t] &= ~bh
        self.und[h] &= ~bt
        self.out[t] |= bh
        self.n_und[t] -= 1
        self.n_und[h] -= 1
        self.n_out[t] += 1
        self.n_in[h] += 1
        self.assigned.append((t, h))
        ok = not (self.n_und[t] == 0 and self.n_in[t] == 0) and not (self.n_und[h] == 0 and self.n_out[h] == 0)
        return ok

    def unassign(self) -> None:
        t, h = self.assigned.pop()
        bt, bh = 1 << t, 1 << h
        self.und[t] |= bh
        self.und[h] |= bt
        self.out[t] &= ~bh
        self.n_und[t] += 1
        self.n_und[h] += 1
        self.n_out[t] -= 1
        self.n_in[h] -= 1


class _Runner:
    """Depth-first branch and bound sharing an incumbent with other workers."""

    def __init__(self, search: _Search, best, stop, shared=None):
        self.s = search
        self.best = best
        self.best_arcs = None
        self.stop = stop
        self.shared = shared

    def _limit(self):
        # Another worker's value only prunes strictly worse branches, so every
        # worker still finds its own first optimal leaf and the combined
        # answer does not depend on timing.
        if self.shared is None:
            return self.best
        return min(self.best, self.shared.value + 1)

    def run(self, depth: int) -> None:
        s = self.s
        s.stats.nodes += 1
        if self.best <= self.stop:
            return
        limit = self._limit()
        lb = s.bound(limit)
        if lb >= limit:
            return
        if depth == s.m:
            s.stats.leaves += 1
            self.best = lb
            self.best_arcs = list(s.assigned)
            if self.shared is not None:
                with self.shared.get_lock():
                    if lb < self.shared.value:
                        self.shared.value = lb
            return
        u, v = s.order[depth]
        options = ((u, v),) if depth == 0 else ((u, v), (v, u))
        for t, h in options:
            if s.assign(t, h):
                self.run(depth + 1)
            s.unassign()
            if self.best <= self.stop:
                return


def _check_input(g: UndirectedGraph, max_edges: int) -> None:
    if not is_connected(g):
        raise NotConnected("graph is not connected")
    bridges = find_bridges(g)
    if bridges:
        raise HasBridge(bridges)
    if g.m > max_edges:
        raise TooLarge(f"exact search limited to {max_edges} edges, got {g.m}")


def _initial(search: _Search, cap):
    # any strong orientation gives an upper bound; the depth-first one is free
    s = search
    for t, h in s.order:
        s.assign(t, h)
    value = s.bound(math.inf)
    arcs = list(s.assigned)
    for _ in range(s.m):
        s.unassign()
    return value, arcs


def _solve(g: UndirectedGraph, weights, budget, threads: int, stats_out=None):
    if g.n <= 1:
        return 0, Orientation(g, ())
    search = _Search(g, weights)
    value, arcs = _initial(search, math.inf)
    stop = -1 if budget is None else budget
    if value <= stop:
        return value, Orientation.from_arcs(g, arcs)
    if threads > 1 and search.m > 2:
        value, arcs = _solve_parallel(g, weights, value, arcs, stop, threads)
        return value, Orientation.from_arcs(g, arcs)
    runner = _Runner(search, value, stop)
    runner.run(0)
    if stats_out is not None:
        stats_out.nodes, stats_out.leaves = search.stats.nodes, search.stats.leaves
    if runner.best_arcs is not None:
        value, arcs = runner.best, runner.best_arcs
    return value, Orientation.from_arcs(g, arcs)


_SHARED = None


def _init_worker(shared) -> None:
    global _SHARED
    _SHARED = shared


def _prefix_task(args):
    g, weights, initial, stop, k, bits = args
    search = _Search(g, weights)
    for i in range(k):
        u, v = search.order[i]
        flipped = i > 0 and (bits >> (k - 1 - i)) & 1
        ok = search.assign(v, u) if flipped else search.assign(u, v)
        if not ok:
            return None, None
    # budget runs must not prune on other workers' values: the first leaf
    # under the budget in depth-first order has to stay reachable
    runner = _Runner(search, initial, stop, _SHARED if stop < 0 else None)
    runner.run(k)
    return runner.best, runner.best_arcs


def _solve_parallel(g, weights, initial, initial_arcs, stop, threads):
    """Split the search over the directions of the first few edges.

    Prefixes are explored independently; the answer is taken from the
    lowest prefix attaining the best value, which is exactly what the
    sequential search returns.
    """
    import multiprocessing as mp
    from concurrent.futures import ProcessPoolExecutor

    m = g.m
    k = 1
    while (1 << (k - 1)) < 4 * threads and k < m:
        k += 1
    tasks = [(g, weights, initial, stop, k, bits) for bits in range(1 << (k - 1))]
    ctx = mp.get_context("fork")
    shared = ctx.Value("d", float(initial))
    with ProcessPoolExecutor(max_workers=threads, mp_context=ctx,
                             initializer=_init_worker, initargs=(shared,)) as pool:
        results = list(pool.map(_prefix_task, tasks))
    if stop >= 0:
        for best, arcs in results:
            if arcs is not None and best <= stop:
                return best, arcs
    value, arcs = initial, initial_arcs
    for best, found in results:
        if found is not None and best < value:
            value, arcs = best, found
    return value, arcs


def exact_min_oriented_diameter(g: UndirectedGraph, budget: int | None = None, *,
                                max_edges: int = DEFAULT_MAX_EDGES, threads: int = 1,
                                stats: SearchStats | None = None):
    """Minimum diameter over strong orientations of ``g`` and a witness.

    With ``budget`` the search stops at the first orientation whose diameter
    is at most ``budget``; if none exists the true minimum is returned.
    """
    _check_input(g, max_edges)
    return _solve(g, None, budget, threads, stats)


def min_extension_bound_orientation(g: UndirectedGraph, dset: Iterable[int], budget: int | None = None, *,
                                    max_edges: int = DEFAULT_MAX_EDGES, threads: int = 1):
    """Orientation minimising max(diam0 + 4, diam1 + 2, diam2) relative to ``dset``."""
    _check_input(g, max_edges)
    d = set(dset)
    weights = [2 if v in d else 0 for v in range(g.n)]
    _, h = _solve(g, weights, budget, threads)
    return diam_profile(h, d).extension_bound, h

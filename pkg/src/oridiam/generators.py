"""Named graphs, the extremal chain family and seeded random corpora.

Vertex numbering of the extremal family ``gen_family(k)``:

* ``0, 1``: the isolated triangle on the first dominator,
* ``2``: the first dominator,
* for every connector ``i = 1..k-1`` five ids ``C, D, E, F, X`` where ``X`` is
  the next dominator,
* the last two ids: the isolated triangle on the last dominator.

Named graphs: ``petersen`` has outer cycle 0-4, spokes ``i -- i+5`` and inner
pentagram ``5+i -- 5+(i+2)%5``; ``k4_subdivided`` is K4 on 0..3 with the
edges at vertex 0 subdivided by 4, 5, 6; ``cycle(n)`` and ``complete(n)`` are
numbered in the obvious way.
"""
from __future__ import annotations

import random
import re

from .errors import UnknownName
from .graph import UndirectedGraph, edge_key


def gen_family(gamma: int) -> tuple[UndirectedGraph, frozenset[int]]:
    if gamma < 1:
        raise ValueError("gamma must be at least 1")
    edges = []
    x = 2
    edges += [(0, 1), (0, x), (1, x)]
    dominators = [x]
    nxt = 3
    for _ in range(gamma - 1):
        c, d, e, f, y = range(nxt, nxt + 5)
        nxt += 5
        edges += [(x, c), (c, e), (e, d), (d, x), (e, f), (f, y), (y, e)]
        dominators.append(y)
        x = y
    g, h = nxt, nxt + 1
    edges += [(g, h), (g, x), (h, x)]
    return UndirectedGraph.from_edges(nxt + 2, edges), frozenset(dominators)


def cycle_graph(n: int) -> UndirectedGraph:
    if n < 3:
        raise ValueError("a cycle needs at least 3 vertices")
    return UndirectedGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> UndirectedGraph:
    if n < 1:
        raise ValueError("complete graph needs at least one vertex")
    return UndirectedGraph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def petersen_graph() -> UndirectedGraph:
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))
        edges.append((i, i + 5))
        edges.append((5 + i, 5 + (i + 2) % 5))
    return UndirectedGraph.from_edges(10, edges)


def k4_subdivided() -> UndirectedGraph:
    edges = [(1, 2), (1, 3), (2, 3), (0, 4), (4, 1), (0, 5), (5, 2), (0, 6), (6, 3)]
    return UndirectedGraph.from_edges(7, edges)


_SIZED = re.compile(r"^(cycle|complete)\s*(?:\(\s*(\d+)\s*\)|[:_]?(\d+))$")


def gen_named(name: str) -> UndirectedGraph:
    key = name.strip().lower()
    if key == "petersen":
        return petersen_graph()
    if key in ("k4_subdivided", "k4-subdivided"):
        return k4_subdivided()
    match = _SIZED.match(key)
    if match:
        n = int(match.group(2) or match.group(3))
        try:
            return cycle_graph(n) if match.group(1) == "cycle" else complete_graph(n)
        except ValueError as exc:
            raise UnknownName(str(exc)) from None
    raise UnknownName(f"unknown graph name {name!r}")


def random_bridgeless_graph(n: int, rng: random.Random, extra_edges: int = 0) -> UndirectedGraph:
    """Connected bridgeless graph on ``n >= 3`` vertices built from ears.

    Starts from a cycle and attaches open ears (paths between two distinct
    existing vertices) or closed ears (cycles through one vertex) until all
    vertices are used, then adds ``extra_edges`` random chords.
    """
    if n < 3:
        raise ValueError("need at least 3 vertices")
    first = rng.randint(3, max(3, min(n, 8)))
    edges = {edge_key(i, (i + 1) % first) for i in range(first)}
    used = first
    while used < n:
        left = n - used
        length = rng.randint(1, min(left, 6))
        a = rng.randrange(used)
        if length == 1 or rng.random() < 0.7:
            b = rng.randrange(used - 1)
            b = b if b < a else b + 1
        else:
            b = a
        path = [a] + list(range(used, used + length)) + [b]
        used += length
        for u, v in zip(path, path[1:]):
            edges.add(edge_key(u, v))
    tries = 0
    target = len(edges) + extra_edges
    max_edges = n * (n - 1) // 2
    while len(edges) < min(target, max_edges) and tries < 50 * (extra_edges + 1):
        tries += 1
        u, v = rng.sample(range(n), 2)
        edges.add(edge_key(u, v))
    perm = list(range(n))
    rng.shuffle(perm)
    return UndirectedGraph.from_edges(n, [(perm[u], perm[v]) for u, v in sorted(edges)])


def random_corpus(count: int, seed: int, max_n: int = 40, min_n: int = 3) -> list[UndirectedGraph]:
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(min_n, max_n)
        extra = rng.randint(0, max(0, n // 3))
        out.append(random_bridgeless_graph(n, rng, extra))
    return out

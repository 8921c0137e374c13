"""Dominating tree, bridge fixing, minimal subgraphs and orientation extension.

A tree through all dominators is grown greedily; every path that still
contains a bridge is then fixed by adding at most three short detours.  The
result is a bridgeless subgraph on at most ``5|D| - 4`` vertices.  An
orientation of any bridgeless subgraph that contains D can be extended to the
whole graph without exceeding ``max(diam0 + 4, diam1 + 2, diam2)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import HostHasBridge, NotConnected, NotDominating, NotStrong, NotSubgraph
from .graph import (
    DominatedPair,
    SubgraphView,
    connected_components_without,
    edge_key,
    is_bridgeless_connected,
    is_connected,
)
from .orientation import Orientation, diam_profile, directed_distances, is_strongly_connected


@dataclass(frozen=True)
class DominatingTree:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    order: tuple[int, ...]
    # dominator -> the path added for it, from the dominator into the tree
    paths: dict = field(hash=False, compare=False)

    def assoc(self, x: int) -> tuple[tuple[int, int], ...]:
        p = self.paths[x]
        return tuple(edge_key(a, b) for a, b in zip(p, p[1:]))


def _multi_bfs(adj, sources: Iterable[int], skip: tuple[int, int] | None = None) -> dict[int, int]:
    dist = {s: 0 for s in sources}
    queue = deque(sorted(dist))
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist and (skip is None or edge_key(v, w) != skip):
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def build_dominating_tree(host: DominatedPair) -> DominatingTree:
    g = host.graph
    if not is_connected(g):
        raise NotConnected("host graph is not connected")
    dset = sorted(host.dset)
    if not dset:
        raise ValueError("empty dominating set")
    first = dset[0]
    verts = {first}
    edges: set[tuple[int, int]] = set()
    order = [first]
    paths = {first: (first,)}
    remaining = set(dset[1:])
    while remaining:
        dist = _multi_bfs(g.adj, verts)
        x = min(remaining, key=lambda d: (dist[d], d))
        path = [x]
        while dist[path[-1]] > 0:
            cur = path[-1]
            path.append(min(w for w in g.adj[cur] if dist.get(w) == dist[cur] - 1))
        for a, b in zip(path, path[1:]):
            edges.add(edge_key(a, b))
        verts.update(path)
        order.append(x)
        paths[x] = tuple(path)
        remaining.discard(x)
        remaining -= verts
    return DominatingTree(frozenset(verts), frozenset(edges), tuple(order), paths)


@dataclass(frozen=True)
class BridgelessCore:
    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]
    # dominator -> paths added to fix it; an empty tuple means it was already fixed
    fixed_proof: dict = field(hash=False, compare=False)
    repairs: tuple = ()
    path_anomalies: tuple = ()

    def view(self, host: DominatedPair) -> SubgraphView:
        return SubgraphView.build(host, self.vertices, self.edges)


def _bridges_of(vertices, edges) -> set[tuple[int, int]]:
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    from .graph import _lowpoint_scan

    root = min(adj)
    order, disc, low, parent = _lowpoint_scan(adj, root)
    return {edge_key(v, parent[v]) for v in order[1:] if low[v] > disc[parent[v]]}


def _shortest_paths(adj, part: dict[int, int], sources: set[int], targets: set[int], skip):
    """All shortest paths (as vertex tuples) from a source part to a target part."""
    src = [v for v, i in part.items() if i in sources]
    dist = _multi_bfs(adj, src, skip)
    ends = [v for v, i in part.items() if i in targets and v in dist]
    if not ends:
        return []
    length = min(dist[v] for v in ends)
    out = []

    def back(path):
        cur = path[-1]
        if dist[cur] == 0:
            out.append(tuple(reversed(path)))
            return
        for w in adj[cur]:
            if dist.get(w) == dist[cur] - 1 and edge_key(w, cur) != skip:
                back(path + [w])

    for v in sorted(ends):
        if dist[v] == length:
            back([v])
    return out


def _pick(paths, part, dset, key_index):
    def key(p):
        both_d = p[0] in dset and p[-1] in dset
        return (key_index(part[p[0]], part[p[-1]]), not both_d, p)

    return min(paths, key=key)


def fix_to_bridgeless(host: DominatedPair, t: DominatingTree) -> BridgelessCore:
    g = host.graph
    dset = host.dset
    verts = set(t.vertices)
    edges = set(t.edges)
    proof: dict[int, tuple] = {t.order[0]: ()}
    anomalies = []
    for x in t.order[1:]:
        assoc = t.assoc(x)
        bridges = _bridges_of(verts, edges)
        if not any(e in bridges for e in assoc):
            proof[x] = ()
            continue
        path = t.paths[x]
        # subtrees of the final tree once the associated edges are removed
        rest = t.edges - set(assoc)
        part: dict[int, int] = {}
        adj_t: dict[int, list[int]] = {v: [] for v in t.vertices}
        for a, b in rest:
            adj_t[a].append(b)
            adj_t[b].append(a)
        for idx, start in enumerate(path, 1):
            for v in _multi_bfs(adj_t, [start]):
                part[v] = idx
        k = len(path)
        chosen = []

        def find(sources, targets, skip, key_index):
            cands = _shortest_paths(g.adj, part, sources, targets, skip)
            if not cands:
                raise HostHasBridge([skip])
            p = _pick(cands, part, dset, key_index)
            if len(p) - 1 > 3 or (len(p) - 1 == 3 and not (p[0] in dset and p[-1] in dset)):
                anomalies.append((x, p))
            return p

        if k == 4:
            e, e2, e3 = assoc
            p = find({1}, {2, 3, 4}, e, lambda a, b: -b)
            chosen.append(p)
            land = part[p[-1]]
            if land != 4:
                q = find({4}, {1, 2, 3}, e3, lambda a, b: b)
                chosen.append(q)
                if not (land == 3 or (land == 2 and part[q[-1]] == 2)):
                    chosen.append(find({3, 4}, {1, 2}, e2, lambda a, b: 0))
        elif k == 3:
            e, e2 = assoc
            p = find({1}, {2, 3}, e, lambda a, b: -b)
            chosen.append(p)
            if part[p[-1]] != 3:
                chosen.append(find({3}, {1, 2}, e2, lambda a, b: b))
        else:
            chosen.append(find({1}, {2}, assoc[0], lambda a, b: 0))
        chosen = _cheapest_fix(verts, edges, assoc, chosen, )
        for p in chosen:
            verts.update(p)
            edges.update(edge_key(a, b) for a, b in zip(p, p[1:]))
        proof[x] = tuple(chosen)

    repairs = []
    while True:
        bridges = sorted(_bridges_of(verts, edges)) if len(verts) > 1 else []
        if not bridges:
            break
        b = bridges[0]
        side = {v: 1 for v in _side(verts, edges, b)}
        part = {v: side.get(v, 2) for v in verts}
        cands = _shortest_paths(g.adj, part, {1}, {2}, b)
        if not cands:
            raise HostHasBridge([b])
        p = min(cands)
        verts.update(p)
        edges.update(edge_key(a, c) for a, c in zip(p, p[1:]))
        repairs.append(p)
    return BridgelessCore(frozenset(verts), frozenset(edges), proof, tuple(repairs), tuple(anomalies))


def _cheapest_fix(verts, edges, assoc, rule_paths, ):
    """Smallest subfamily of the selected paths that already fixes every associated edge.

    The case rule always yields a fixing family; a sub-family that adds fewer
    new vertices is preferred, ties going to the family the rule would pick.
    """
    from itertools import combinations

    best = tuple(rule_paths)
    best_cost = _new_vertices(verts, best)
    for r in range(1, len(rule_paths)):
        for fam in combinations(rule_paths, r):
            cost = _new_vertices(verts, fam)
            if cost >= best_cost:
                continue
            tv = set(verts)
            te = set(edges)
            for p in fam:
                tv.update(p)
                te.update(edge_key(a, b) for a, b in zip(p, p[1:]))
            if not any(e in _bridges_of(tv, te) for e in assoc):
                best, best_cost = fam, cost
    return best


def _new_vertices(verts, paths) -> int:
    return len({v for p in paths for v in p} - set(verts))


def _side(verts, edges, bridge):
    adj: dict[int, list[int]] = {v: [] for v in verts}
    for a, b in edges:
        if edge_key(a, b) != bridge:
            adj[a].append(b)
            adj[b].append(a)
    return _multi_bfs(adj, [bridge[0]])


def _minimal_ok(verts, edges, dset, fmap) -> bool:
    if not dset <= verts:
        return False
    for v in verts:
        if v not in dset and edge_key(v, fmap[v]) not in edges:
            return False
    return is_bridgeless_connected(verts, edges)


def minimize_subgraph(host: DominatedPair, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> SubgraphView:
    """Greedy edge then vertex deletion keeping D, the dominator edges and bridgelessness.

    Removing a vertex also removes non-dominators that are left with at most
    one neighbour, so pendant triangles disappear in one move.
    """
    dset = set(host.dset)
    fmap = host.fmap
    verts = set(vertices)
    edges = {edge_key(a, b) for a, b in edges}
    for v in sorted(verts):
        if v not in dset:
            if v not in fmap:
                raise NotDominating(f"vertex {v} has no unique dominator")
            edges.add(edge_key(v, fmap[v]))
    if not _minimal_ok(verts, edges, dset, fmap):
        raise ValueError("starting subgraph is not bridgeless with all dominator edges")
    fedges = {edge_key(v, fmap[v]) for v in verts if v not in dset}
    changed = True
    while changed:
        changed = False
        for e in sorted(edges):
            if e in fedges:
                continue
            trial = edges - {e}
            if _minimal_ok(verts, trial, dset, fmap):
                edges = trial
                changed = True
        for v in sorted(verts):
            if v in dset or v not in verts:
                continue
            gone = {v}
            tv = verts - gone
            te = {e for e in edges if v not in e}
            while True:
                deg = {u: 0 for u in tv}
                for a, b in te:
                    deg[a] += 1
                    deg[b] += 1
                loose = {u for u in tv if u not in dset and deg[u] <= 1}
                if not loose:
                    break
                tv -= loose
                te = {e for e in te if e[0] not in loose and e[1] not in loose}
            if _minimal_ok(tv, te, dset, fmap):
                verts, edges = tv, te
                fedges = {edge_key(u, fmap[u]) for u in verts if u not in dset}
                changed = True
    return SubgraphView.build(host, verts, edges)


def extract_minimal_subgraph(host, core: BridgelessCore) -> SubgraphView:
    pair = getattr(host, "pair", host)
    return minimize_subgraph(pair, core.vertices, core.edges)


def extend_orientation(host: DominatedPair, sub: SubgraphView, h: Orientation, check: bool = True) -> Orientation:
    """Orient the rest of ``host`` around an oriented subgraph containing D."""
    g = host.graph
    dset = host.dset
    if h.base != sub.graph:
        raise NotSubgraph("orientation is not on the subgraph")
    labels = sub.labels
    in_sub = set(labels)
    for u, v in sub.graph.edges:
        if not g.has_edge(labels[u], labels[v]):
            raise NotSubgraph(f"{labels[u]}-{labels[v]} is not a host edge")
    if not dset <= in_sub:
        raise NotDominating("subgraph must contain every dominator")
    if not is_strongly_connected(h):
        raise NotStrong("orientation of the subgraph is not strongly connected")
    arcs = {}
    for a, b in h.arcs:
        arcs[edge_key(labels[a], labels[b])] = (labels[a], labels[b])
    for comp in connected_components_without(g, in_sub):
        if len(comp) == 1:
            _orient_singleton(g, dset, host.fmap, comp[0], arcs)
        else:
            _orient_component(g, comp, in_sub, arcs)
    for e in g.edges:
        if e not in arcs:
            # edges inside V(sub) that the subgraph itself left out
            arcs[e] = e
    out = Orientation.from_arcs(g, arcs.values())
    if check:
        _check_extension(host, sub, h, out)
    return out


def _orient_singleton(g, dset, fmap, x, arcs) -> None:
    nbrs = list(g.adj[x])
    doms = [w for w in nbrs if w in dset]
    done = set()
    if len(doms) >= 2:
        arcs[edge_key(x, doms[0])] = (x, doms[0])
        arcs[edge_key(x, doms[1])] = (doms[1], x)
        done.update(doms[:2])
    else:
        u = doms[0]
        v = min(w for w in nbrs if w not in dset)
        fv = fmap.get(v)
        if fv is None:
            fv = min(w for w in g.adj[v] if w in dset)
        if arcs.get(edge_key(fv, v)) == (fv, v):
            arcs[edge_key(v, x)] = (v, x)
            arcs[edge_key(x, u)] = (x, u)
        else:
            arcs[edge_key(u, x)] = (u, x)
            arcs[edge_key(x, v)] = (x, v)
        done.update((u, v))
    out = True
    for w in nbrs:
        if w in done:
            continue
        arcs[edge_key(x, w)] = (x, w) if out else (w, x)
        out = not out


def _orient_component(g, comp, in_sub, arcs) -> None:
    members = set(comp)
    root = comp[0]
    depth = {root: 0}
    queue = deque([root])
    tree = set()
    while queue:
        v = queue.popleft()
        for w in g.adj[v]:
            if w in members and w not in depth:
                depth[w] = depth[v] + 1
                tree.add(edge_key(v, w))
                queue.append(w)
    for a, b in tree:
        odd = a if depth[a] % 2 else b
        other = b if odd == a else a
        arcs[edge_key(a, b)] = (odd, other)
    for x in comp:
        for w in g.adj[x]:
            e = edge_key(x, w)
            if w in in_sub:
                arcs[e] = (w, x) if depth[x] % 2 else (x, w)
            elif e not in arcs:
                arcs[e] = e


def _check_extension(host, sub, h, out) -> None:
    dset = host.dset
    if not is_strongly_connected(out):
        raise AssertionError("extended orientation is not strongly connected")
    before = diam_profile(h, sub.pair.dset)
    after = diam_profile(out, dset)
    if after.diam > before.extension_bound or after.extension_bound > before.extension_bound:
        raise AssertionError("extension exceeded max(diam0 + 4, diam1 + 2, diam2)")
    in_sub = set(sub.labels)
    for x in range(host.graph.n):
        if x in in_sub:
            continue
        if min(directed_distances(out, d)[x] for d in dset) > 2:
            raise AssertionError(f"vertex {x} is not reached from D within two steps")
        if min(directed_distances(out, x)[d] for d in dset) > 2:
            raise AssertionError(f"vertex {x} does not reach D within two steps")

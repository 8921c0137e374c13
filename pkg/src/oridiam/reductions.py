"""Rewrites that shrink a minimal subgraph, and lifting orientations back.

Every rewrite takes a pair (G, D) that is a minimal subgraph of a pair in
first standard form and produces one or more smaller pairs.  An orientation
of each smaller pair is lifted to an orientation of G, and the lift checks
numerically the distance inequalities that the rewrite promises.

Kinds, in detection order:

* ``DominatorCutSplit``: a dominator x whose removal disconnects G.  Parts
  are G[C_i + x] with D_i = {x} + (C_i & D).
* ``NonDominatorCutSplit``: a non-dominator cut vertex x with at least three
  components, or two components where the one holding f(x) has two or more
  dominators.  The part holding f(x) is kept as it is; every other part gets a
  triangle x-y_i-z_i with z_i a new dominator.
* ``PendantTriangleCut``: a non-dominator cut vertex x whose small side is a
  triangle {f(x), w} and which has two non-dominator neighbours y1, y2 with the
  same dominator z.  The small side is cut off and the edge x-z added.
* ``DoubleTwoPath``: dominators x, y joined by two paths x-l-r-y whose inner
  vertices have degree two.  The paths go and y is merged into x.
* ``ThetaPair``: dominators x, y, z with paths of lengths 4, 3 from x to y and
  4, 3 from y to z that carry all edges of their inner vertices and of y.  The
  inner vertices and y go and z is merged into x.
* ``TwoPlusThreePath``: dominators x, y joined by paths of lengths 4 and 3
  that carry all edges of their inner vertices.  The inner vertices go and y
  is merged into x.
* ``DominatorCycle``: a cycle v_0 ... v_{3k-1} with every third vertex a
  dominator.  The dominators collapse into v_0 and every other cycle vertex
  gets a triangle on v_0.
* ``SpecialCycle``: a cycle through at least two dominators whose
  non-dominators either sit next to their dominator on the cycle or carry a
  pendant triangle.  Collapsed like ``DominatorCycle``; the pendant triangles
  are removed.

Rewrites may merge vertex labels where the path patterns allow it: two path
vertices may coincide as long as the paths stay edge-disjoint.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ConventionViolated, LiftBoundError, NotStrong, ReductionStalled, StaleStep
from .graph import (DominatedPair, SubgraphView, UndirectedGraph, connected_components_without, edge_key,
                    find_cut_vertices, is_bridgeless_connected)
from .orientation import DiameterProfile, Orientation, diam_profile, is_strongly_connected, reverse_all, robbins_orient
from .search import min_extension_bound_orientation
from .spanning import build_dominating_tree, extend_orientation, extract_minimal_subgraph, fix_to_bridgeless
from .standard_form import StandardFormPair, TransformTrace, pull_back_orientation, to_first_standard_form

# leaves with at most this many edges may be oriented by the exact search
LEAF_SEARCH_EDGES = 20
# node budget for the cycle searches
CYCLE_SEARCH_BUDGET = 50_000


class ReductionKind(str, enum.Enum):
    DOMINATOR_CUT_SPLIT = "DominatorCutSplit"
    NON_DOMINATOR_CUT_SPLIT = "NonDominatorCutSplit"
    PENDANT_TRIANGLE_CUT = "PendantTriangleCut"
    DOUBLE_TWO_PATH = "DoubleTwoPath"
    THETA_PAIR = "ThetaPair"
    TWO_PLUS_THREE_PATH = "TwoPlusThreePath"
    DOMINATOR_CYCLE = "DominatorCycle"
    SPECIAL_CYCLE = "SpecialCycle"


@dataclass(frozen=True)
class ReductionStep:
    kind: ReductionKind
    witnesses: dict = field(hash=False)

    def __getitem__(self, name):
        return self.witnesses[name]


@dataclass(frozen=True)
class ReducedPart:
    """One pair produced by a rewrite.

    ``vertex_map`` sends every surviving or merged vertex of the rewritten
    pair to its id here; ``edge_map`` does the same for edges.  Edges and
    vertices of the part with no preimage are listed in ``added_edges`` and
    ``added_vertices``.
    """

    pair: DominatedPair
    vertex_map: dict
    edge_map: dict
    added_vertices: tuple[int, ...]
    added_edges: frozenset


@dataclass(frozen=True)
class AppliedReduction:
    """A rewrite together with its edit script.

    ``removed_vertices`` are deleted outright, ``identifications`` send a
    merged vertex to the vertex it was merged into, ``removed_edges`` are the
    edges no part keeps, and ``removed_dominators`` are dominators that no part
    keeps under their own name.
    """

    step: ReductionStep
    pre: DominatedPair
    parts: tuple[ReducedPart, ...]
    removed_vertices: frozenset
    identifications: dict
    removed_edges: frozenset
    removed_dominators: frozenset


@dataclass(frozen=True)
class BoundCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def ok(self) -> bool:
        return self.lhs <= self.rhs


@dataclass(frozen=True)
class Lifted:
    orientation: Orientation
    profile: DiameterProfile
    checks: tuple[BoundCheck, ...]


# ---------------------------------------------------------------- parts


class _PartBuilder:
    def __init__(self, pre: DominatedPair, keep: Iterable[int], merge: dict | None = None,
                 skip: Iterable[tuple[int, int]] = ()):
        self.pre = pre
        self.ids = {v: i for i, v in enumerate(sorted(keep))}
        self.vmap = dict(self.ids)
        for v, target in (merge or {}).items():
            self.vmap[v] = self.ids[target]
        self.n = len(self.ids)
        self.edges: set = set()
        self.edge_map: dict = {}
        self.added: set = set()
        self.new: list[int] = []
        skipped = {edge_key(a, b) for a, b in skip}
        for e in pre.graph.edges:
            a, b = e
            if e in skipped or a not in self.vmap or b not in self.vmap:
                continue
            pe = edge_key(self.vmap[a], self.vmap[b])
            if pe[0] == pe[1] or pe in self.edges:
                raise StaleStep("rewrite would create a loop or a parallel edge")
            self.edges.add(pe)
            self.edge_map[e] = pe

    def new_vertex(self) -> int:
        self.new.append(self.n)
        self.n += 1
        return self.n - 1

    def add_edge(self, a: int, b: int) -> None:
        e = edge_key(a, b)
        if a == b or e in self.edges:
            raise StaleStep("rewrite would create a loop or a parallel edge")
        self.edges.add(e)
        self.added.add(e)

    def build(self, pre_dominators: Iterable[int], new_dominators: Iterable[int] = ()) -> ReducedPart:
        g = UndirectedGraph.from_edges(self.n, self.edges)
        if not is_bridgeless_connected(range(g.n), g.edges):
            raise StaleStep("rewritten graph is not bridgeless and connected")
        dset = {self.ids[d] for d in pre_dominators} | set(new_dominators)
        try:
            pair = DominatedPair(g, frozenset(dset))
        except Exception as exc:
            raise StaleStep(f"rewritten pair is not dominated: {exc}") from None
        return ReducedPart(pair, dict(self.vmap), dict(self.edge_map), tuple(self.new), frozenset(self.added))


def _finish(step: ReductionStep, pre: DominatedPair, parts: Sequence[ReducedPart], merge: dict | None = None):
    merge = dict(merge or {})
    present = set()
    kept_edges = set()
    for part in parts:
        present |= set(part.vertex_map)
        kept_edges |= set(part.edge_map)
    removed = frozenset(v for v in range(pre.graph.n) if v not in present)
    kept_dominators = set()
    for part in parts:
        for v, pv in part.vertex_map.items():
            if v not in merge and pv in part.pair.dset:
                kept_dominators.add(v)
    return AppliedReduction(
        step=step, pre=pre, parts=tuple(parts),
        removed_vertices=removed, identifications=merge,
        removed_edges=frozenset(e for e in pre.graph.edges if e not in kept_edges),
        removed_dominators=frozenset(pre.dset - kept_dominators),
    )


def restore(applied: AppliedReduction) -> DominatedPair:
    """Undo a rewrite from its parts and its edit script alone."""
    edges = set(applied.removed_edges)
    dset = set(applied.removed_dominators)
    n = applied.pre.graph.n
    for part in applied.parts:
        inverse_edges = {pe: e for e, pe in part.edge_map.items()}
        for pe in part.pair.graph.edges:
            if pe in part.added_edges:
                continue
            edges.add(inverse_edges[pe])
        for v, pv in part.vertex_map.items():
            if v not in applied.identifications and pv in part.pair.dset:
                dset.add(v)
    return DominatedPair(UndirectedGraph.from_edges(n, edges), frozenset(dset))


# ---------------------------------------------------------------- matchers


def _components(g: UndirectedGraph, x: int) -> list[list[int]]:
    return connected_components_without(g, [x])


def _cut_components(pair: DominatedPair, x: int):
    comps = _components(pair.graph, x)
    if len(comps) < 2:
        return None
    return comps


def _match_dominator_cut(pair, x):
    if x not in pair.dset:
        return None
    comps = _cut_components(pair, x)
    if comps is None or any(not (set(c) & pair.dset) for c in comps):
        return None
    return {"x": x, "components": tuple(tuple(c) for c in comps)}


def _match_non_dominator_cut(pair, x):
    if x in pair.dset:
        return None
    comps = _cut_components(pair, x)
    if comps is None:
        return None
    fx = pair.fmap[x]
    first = next(c for c in comps if fx in c)
    rest = [c for c in comps if c is not first]
    if len(comps) == 2 and len(set(first) & pair.dset) < 2:
        return None
    return {"x": x, "components": tuple(tuple(c) for c in [first] + rest)}


def _pendant_triangle(pair: DominatedPair, v: int):
    """(z, w) when v is a non-dominator hanging the triangle v-z-w with z = f(v)."""
    if v in pair.dset:
        return None
    adj = pair.graph.adj
    z = pair.fmap[v]
    if len(adj[z]) != 2:
        return None
    w = next(u for u in adj[z] if u != v)
    if w in pair.dset or set(adj[w]) != {v, z}:
        return None
    return z, w


def _match_pendant_triangle_cut(pair, x, y1, y2):
    if x in pair.dset:
        return None
    comps = _cut_components(pair, x)
    if comps is None or len(comps) != 2:
        return None
    tri = _pendant_triangle(pair, x)
    if tri is None:
        return None
    fx, w = tri
    adj, f = pair.graph.adj, pair.fmap
    if y1 == y2 or y1 not in adj[x] or y2 not in adj[x]:
        return None
    if y1 in pair.dset or y2 in pair.dset or f[y1] != f[y2]:
        return None
    z = f[y1]
    if z == fx:
        return None
    return {"x": x, "w": w, "fx": fx, "y1": y1, "y2": y2, "z": z}


def _match_double_two_path(pair, x, y, l1, r1, l2, r2):
    adj, dset = pair.graph.adj, pair.dset
    if x == y or x not in dset or y not in dset or len({l1, r1, l2, r2}) != 4:
        return None
    for l, r in ((l1, r1), (l2, r2)):
        if l in dset or r in dset:
            return None
        if set(adj[l]) != {x, r} or set(adj[r]) != {l, y}:
            return None
    return {"x": x, "y": y, "l1": l1, "r1": r1, "l2": l2, "r2": r2}


def _path_edges(path):
    return [edge_key(a, b) for a, b in zip(path, path[1:])]


def _paths_ok(pair, paths, ends, inner, extra_closed=()):
    """Paths are simple, edge-disjoint, and carry every edge at ``inner``."""
    dset = pair.dset
    if set(inner) & dset or set(inner) & set(ends):
        return False
    edges = []
    for p in paths:
        if len(set(p)) != len(p):
            return False
        edges += _path_edges(p)
    if len(set(edges)) != len(edges):
        return False
    if not all(pair.graph.has_edge(*e) for e in edges):
        return False
    es = set(edges)
    for v in set(inner) | set(extra_closed):
        for w in pair.graph.adj[v]:
            if edge_key(v, w) not in es:
                return False
    return True


def _match_theta(pair, P1, P2, P3, P4):
    x, y, z = P1[0], P1[-1], P2[-1]
    dset = pair.dset
    if len({x, y, z}) != 3 or not {x, y, z} <= dset:
        return None
    if len(P1) != 5 or len(P2) != 5 or len(P3) != 4 or len(P4) != 4:
        return None
    if P3[0] != x or P3[-1] != y or P2[0] != y or P4[0] != y or P4[-1] != z:
        return None
    inner = set(P1[1:-1]) | set(P2[1:-1]) | set(P3[1:-1]) | set(P4[1:-1])
    if not _paths_ok(pair, (P1, P2, P3, P4), (x, y, z), inner, extra_closed=(y,)):
        return None
    return {"x": x, "y": y, "z": z, "P1": tuple(P1), "P2": tuple(P2), "P3": tuple(P3), "P4": tuple(P4)}


def _match_two_plus_three(pair, P1, P2):
    x, y = P1[0], P1[-1]
    dset = pair.dset
    if x == y or x not in dset or y not in dset or len(P1) != 5 or len(P2) != 4:
        return None
    if P2[0] != x or P2[-1] != y:
        return None
    inner = set(P1[1:-1]) | set(P2[1:-1])
    if not _paths_ok(pair, (P1, P2), (x, y), inner):
        return None
    return {"x": x, "y": y, "P1": tuple(P1), "P2": tuple(P2)}


def _cycle_ok(pair, cycle):
    g = pair.graph
    if len(set(cycle)) != len(cycle) or len(cycle) < 3:
        return False
    return all(g.has_edge(a, b) for a, b in zip(cycle, cycle[1:] + cycle[:1]))


def _match_dominator_cycle(pair, cycle):
    cycle = list(cycle)
    if len(cycle) % 3 or len(cycle) < 6 or not _cycle_ok(pair, cycle):
        return None
    for j, v in enumerate(cycle):
        if (v in pair.dset) != (j % 3 == 0):
            return None
    return {"cycle": tuple(cycle), "k": len(cycle) // 3}


def _special_roles(pair, cycle):
    """Pendant triangles of a special cycle, or None when the cycle is not special."""
    dset, f = pair.dset, pair.fmap
    n = len(cycle)
    on_cycle = set(cycle)
    pendants = []
    for j, v in enumerate(cycle):
        if v in dset:
            continue
        if f[v] in (cycle[j - 1], cycle[(j + 1) % n]):
            continue
        tri = _pendant_triangle(pair, v)
        if tri is None or set(tri) & on_cycle:
            return None
        pendants.append((v,) + tri)
    return pendants


def _match_special_cycle(pair, cycle):
    cycle = list(cycle)
    if len(cycle) < 6 or cycle[0] not in pair.dset or not _cycle_ok(pair, cycle):
        return None
    k = sum(1 for v in cycle if v in pair.dset)
    if k < 2:
        return None
    pendants = _special_roles(pair, cycle)
    if not pendants:
        return None
    return {"cycle": tuple(cycle), "k": k, "y": len(pendants), "pendants": tuple(pendants)}


def _matches(pair: DominatedPair, step: ReductionStep):
    w = step.witnesses
    kind = step.kind
    if kind is ReductionKind.DOMINATOR_CUT_SPLIT:
        found = _match_dominator_cut(pair, w["x"])
    elif kind is ReductionKind.NON_DOMINATOR_CUT_SPLIT:
        found = _match_non_dominator_cut(pair, w["x"])
    elif kind is ReductionKind.PENDANT_TRIANGLE_CUT:
        found = _match_pendant_triangle_cut(pair, w["x"], w["y1"], w["y2"])
    elif kind is ReductionKind.DOUBLE_TWO_PATH:
        found = _match_double_two_path(pair, w["x"], w["y"], w["l1"], w["r1"], w["l2"], w["r2"])
    elif kind is ReductionKind.THETA_PAIR:
        found = _match_theta(pair, w["P1"], w["P2"], w["P3"], w["P4"])
    elif kind is ReductionKind.TWO_PLUS_THREE_PATH:
        found = _match_two_plus_three(pair, w["P1"], w["P2"])
    elif kind is ReductionKind.DOMINATOR_CYCLE:
        found = _match_dominator_cycle(pair, w["cycle"])
    elif kind is ReductionKind.SPECIAL_CYCLE:
        found = _match_special_cycle(pair, w["cycle"])
    else:
        raise TypeError(f"unknown reduction kind {kind!r}")
    if found is None:
        return False
    return all(found[key] == w[key] for key in found)


# ---------------------------------------------------------------- candidates


def _cands_dominator_cut(pair, cuts):
    for x in sorted(cuts):
        w = _match_dominator_cut(pair, x)
        if w:
            yield w


def _cands_non_dominator_cut(pair, cuts):
    for x in sorted(cuts):
        w = _match_non_dominator_cut(pair, x)
        if w:
            yield w


def _cands_pendant_triangle_cut(pair, cuts):
    adj = pair.graph.adj
    for x in sorted(cuts):
        if x in pair.dset:
            continue
        for y1, y2 in itertools.combinations(sorted(adj[x]), 2):
            w = _match_pendant_triangle_cut(pair, x, y1, y2)
            if w:
                yield w


def _three_paths(pair, x):
    """Pairs (l, r, y) with x-l-r-y, l and r of degree two, y another dominator."""
    adj, dset = pair.graph.adj, pair.dset
    for l in adj[x]:
        if l in dset or len(adj[l]) != 2:
            continue
        r = adj[l][0] if adj[l][1] == x else adj[l][1]
        if r in dset or len(adj[r]) != 2:
            continue
        y = adj[r][0] if adj[r][1] == l else adj[r][1]
        if y in dset and y != x:
            yield l, r, y


def _cands_double_two_path(pair, cuts):
    for x in sorted(pair.dset):
        by_end: dict[int, list] = {}
        for l, r, y in _three_paths(pair, x):
            if y > x:
                by_end.setdefault(y, []).append((l, r))
        for y in sorted(by_end):
            paths = sorted(by_end[y])
            for (l1, r1), (l2, r2) in itertools.combinations(paths, 2):
                w = _match_double_two_path(pair, x, y, l1, r1, l2, r2)
                if w:
                    yield w


def _walks(pair, start, length, end_ok):
    """Simple paths with ``length`` edges from ``start`` whose last vertex passes ``end_ok``."""
    adj = pair.graph.adj

    def rec(path):
        if len(path) == length + 1:
            if end_ok(path[-1]):
                yield tuple(path)
            return
        for w in adj[path[-1]]:
            if w in path:
                continue
            if len(path) < length and w in pair.dset:
                continue
            path.append(w)
            yield from rec(path)
            path.pop()

    yield from rec([start])


def _cands_theta(pair, cuts):
    adj, dset = pair.graph.adj, pair.dset
    for y in sorted(dset):
        if len(adj[y]) != 4:
            continue
        into = {}
        # paths ending at y, keyed by their other end
        for length in (3, 4):
            for p in _walks(pair, y, length, lambda v: v in dset and v != y):
                into.setdefault((length, p[-1]), []).append(tuple(reversed(p)))
        ends = sorted({e for _, e in into})
        for x, z in itertools.permutations(ends, 2):
            for P1, P3 in itertools.product(into.get((4, x), []), into.get((3, x), [])):
                for P2r, P4r in itertools.product(into.get((4, z), []), into.get((3, z), [])):
                    P2, P4 = tuple(reversed(P2r)), tuple(reversed(P4r))
                    w = _match_theta(pair, P1, P2, P3, P4)
                    if w:
                        yield w


def _cands_two_plus_three(pair, cuts):
    dset = pair.dset
    for x in sorted(dset):
        longs: dict[int, list] = {}
        shorts: dict[int, list] = {}
        for p in _walks(pair, x, 4, lambda v: v in dset and v != x):
            longs.setdefault(p[-1], []).append(p)
        for p in _walks(pair, x, 3, lambda v: v in dset and v != x):
            shorts.setdefault(p[-1], []).append(p)
        for y in sorted(set(longs) & set(shorts)):
            for P1, P2 in itertools.product(longs[y], shorts[y]):
                w = _match_two_plus_three(pair, P1, P2)
                if w:
                    yield w


def _cands_dominator_cycle(pair, cuts):
    adj, dset = pair.graph.adj, pair.dset
    budget = [CYCLE_SEARCH_BUDGET]

    def rec(path, on):
        budget[0] -= 1
        if budget[0] < 0:
            return
        d = path[-1]
        for a in adj[d]:
            if a in dset or a in on:
                continue
            for b in adj[a]:
                if b in dset or b in on or b == d:
                    continue
                for e in adj[b]:
                    if e not in dset or e == d:
                        continue
                    if e == path[0] and len(path) >= 4:
                        w = _match_dominator_cycle(pair, path + [a, b])
                        if w:
                            yield w
                    elif e not in on and e > path[0]:
                        path += [a, b, e]
                        on.update((a, b, e))
                        yield from rec(path, on)
                        del path[-3:]
                        on.difference_update((a, b, e))

    for v0 in sorted(dset):
        yield from rec([v0], {v0})


def _cands_special_cycle(pair, cuts):
    adj, dset, f = pair.graph.adj, pair.dset, pair.fmap
    hanging = set()
    for v in range(pair.graph.n):
        tri = _pendant_triangle(pair, v)
        if tri:
            hanging.update(tri)
    budget = [CYCLE_SEARCH_BUDGET]

    def fits(path, j, nxt):
        # the non-dominator path[j] needs its dominator next to it or a pendant triangle
        v = path[j]
        if v in dset:
            return True
        return f[v] in (path[j - 1], nxt) or _pendant_triangle(pair, v) is not None

    def rec(path, on):
        budget[0] -= 1
        if budget[0] < 0:
            return
        last = path[-1]
        for w in adj[last]:
            if w == path[0] and len(path) >= 6:
                if len(path) > 1 and fits(path, len(path) - 1, w):
                    w_ = _match_special_cycle(pair, path)
                    if w_:
                        yield w_
                continue
            if w in on or w in hanging or (w in dset and w < path[0]):
                continue
            if len(path) > 1 and not fits(path, len(path) - 1, w):
                continue
            path.append(w)
            on.add(w)
            yield from rec(path, on)
            path.pop()
            on.discard(w)

    for v0 in sorted(dset):
        yield from rec([v0], {v0})


_DETECTORS = (
    (ReductionKind.DOMINATOR_CUT_SPLIT, _cands_dominator_cut),
    (ReductionKind.NON_DOMINATOR_CUT_SPLIT, _cands_non_dominator_cut),
    (ReductionKind.PENDANT_TRIANGLE_CUT, _cands_pendant_triangle_cut),
    (ReductionKind.DOUBLE_TWO_PATH, _cands_double_two_path),
    (ReductionKind.THETA_PAIR, _cands_theta),
    (ReductionKind.TWO_PLUS_THREE_PATH, _cands_two_plus_three),
    (ReductionKind.DOMINATOR_CYCLE, _cands_dominator_cycle),
    (ReductionKind.SPECIAL_CYCLE, _cands_special_cycle),
)


def detect_reduction(pair, kinds: Iterable[ReductionKind] | None = None) -> ReductionStep | None:
    """First applicable rewrite in the fixed kind order, or None.

    Never fires when |D| < 3.  A candidate whose rewritten graph would not be
    bridgeless, connected and dominated is skipped.
    """
    pair = getattr(pair, "pair", pair)
    if len(pair.dset) < 3 or not pair.has_unique_dominators:
        return None
    wanted = set(kinds) if kinds is not None else None
    cuts = find_cut_vertices(pair.graph)
    for kind, cands in _DETECTORS:
        if wanted is not None and kind not in wanted:
            continue
        for w in cands(pair, cuts):
            step = ReductionStep(kind, w)
            try:
                _build(pair, step)
            except StaleStep:
                continue
            return step
    return None


# ---------------------------------------------------------------- rewriting


def apply_reduction(pair, step: ReductionStep) -> AppliedReduction:
    pair = getattr(pair, "pair", pair)
    if not pair.has_unique_dominators or not _matches(pair, step):
        raise StaleStep(f"{step.kind.value} pattern is not present")
    return _build(pair, step)


def _build(pair: DominatedPair, step: ReductionStep) -> AppliedReduction:
    w = step.witnesses
    kind = step.kind
    dset = pair.dset
    if kind is ReductionKind.DOMINATOR_CUT_SPLIT:
        x = w["x"]
        parts = []
        for comp in w["components"]:
            keep = set(comp) | {x}
            parts.append(_PartBuilder(pair, keep).build((keep & dset)))
        return _finish(step, pair, parts)

    if kind is ReductionKind.NON_DOMINATOR_CUT_SPLIT:
        x = w["x"]
        comps = w["components"]
        keep = set(comps[0]) | {x}
        parts = [_PartBuilder(pair, keep).build(keep & dset)]
        for comp in comps[1:]:
            keep = set(comp) | {x}
            b = _PartBuilder(pair, keep)
            y, z = b.new_vertex(), b.new_vertex()
            px = b.ids[x]
            b.add_edge(px, y)
            b.add_edge(y, z)
            b.add_edge(z, px)
            parts.append(b.build(keep & dset, (z,)))
        return _finish(step, pair, parts)

    if kind is ReductionKind.PENDANT_TRIANGLE_CUT:
        x, fx, wv, z = w["x"], w["fx"], w["w"], w["z"]
        keep = set(range(pair.graph.n)) - {fx, wv}
        b = _PartBuilder(pair, keep)
        b.add_edge(b.ids[x], b.ids[z])
        return _finish(step, pair, [b.build(keep & dset)])

    if kind is ReductionKind.DOUBLE_TWO_PATH:
        x, y = w["x"], w["y"]
        gone = {w["l1"], w["r1"], w["l2"], w["r2"], y}
        keep = set(range(pair.graph.n)) - gone
        b = _PartBuilder(pair, keep, {y: x})
        return _finish(step, pair, [b.build(keep & dset)], {y: x})

    if kind is ReductionKind.THETA_PAIR:
        x, y, z = w["x"], w["y"], w["z"]
        inner = set()
        for name in ("P1", "P2", "P3", "P4"):
            inner |= set(w[name][1:-1])
        keep = set(range(pair.graph.n)) - inner - {y, z}
        b = _PartBuilder(pair, keep, {z: x})
        return _finish(step, pair, [b.build(keep & dset)], {z: x})

    if kind is ReductionKind.TWO_PLUS_THREE_PATH:
        x, y = w["x"], w["y"]
        inner = set(w["P1"][1:-1]) | set(w["P2"][1:-1])
        keep = set(range(pair.graph.n)) - inner - {y}
        b = _PartBuilder(pair, keep, {y: x})
        return _finish(step, pair, [b.build(keep & dset)], {y: x})

    if kind in (ReductionKind.DOMINATOR_CYCLE, ReductionKind.SPECIAL_CYCLE):
        cycle = list(w["cycle"])
        v0 = cycle[0]
        merged = {v: v0 for v in cycle[1:] if v in dset}
        pendant_vs = set()
        for _, z, wv in w.get("pendants", ()):
            pendant_vs |= {z, wv}
        keep = set(range(pair.graph.n)) - set(merged) - pendant_vs
        cyc_edges = _path_edges(cycle + [v0])
        b = _PartBuilder(pair, keep, merged, skip=cyc_edges)
        p0 = b.ids[v0]
        for v in cycle[1:]:
            if v in dset:
                continue
            u = b.new_vertex()
            pv = b.ids[v]
            b.add_edge(p0, pv)
            b.add_edge(p0, u)
            b.add_edge(u, pv)
        return _finish(step, pair, [b.build(keep & dset)], merged)

    raise TypeError(f"unknown reduction kind {kind!r}")


# ---------------------------------------------------------------- lifting


def _directed_path(path):
    return [(a, b) for a, b in zip(path, path[1:])]


def _special_arcs(applied: AppliedReduction) -> list[tuple[int, int]]:
    w = applied.step.witnesses
    kind = applied.step.kind
    if kind is ReductionKind.PENDANT_TRIANGLE_CUT:
        x, wv, fx, y1, y2, z = w["x"], w["w"], w["fx"], w["y1"], w["y2"], w["z"]
        return [(x, wv), (wv, fx), (fx, x), (x, y1), (y1, z), (z, y2), (y2, x)]
    if kind is ReductionKind.DOUBLE_TWO_PATH:
        x, y = w["x"], w["y"]
        return _directed_path([x, w["l1"], w["r1"], y]) + _directed_path([y, w["r2"], w["l2"], x])
    if kind is ReductionKind.THETA_PAIR:
        # x -> y -> z along the long paths' pairing, back along the short ones
        P1, P2, P3, P4 = w["P1"], w["P2"], w["P3"], w["P4"]
        return (_directed_path(P1) + _directed_path(list(reversed(P3)))
                + _directed_path(list(reversed(P2))) + _directed_path(P4))
    if kind is ReductionKind.TWO_PLUS_THREE_PATH:
        return _directed_path(w["P1"]) + _directed_path(list(reversed(w["P2"])))
    if kind in (ReductionKind.DOMINATOR_CYCLE, ReductionKind.SPECIAL_CYCLE):
        cycle = list(w["cycle"])
        arcs = _directed_path(cycle + [cycle[0]])
        for v, z, wv in w.get("pendants", ()):
            arcs += [(v, z), (z, wv), (wv, v)]
        return arcs
    return []


def _normalise(applied: AppliedReduction, hs: list[Orientation]) -> list[Orientation]:
    """Bring each part orientation into the arc convention the lift relies on."""
    w = applied.step.witnesses
    kind = applied.step.kind
    out = []
    for i, (part, h) in enumerate(zip(applied.parts, hs)):
        required = []
        if kind is ReductionKind.NON_DOMINATOR_CUT_SPLIT:
            x = part.vertex_map[w["x"]]
            if i == 0:
                required = [(part.vertex_map[applied.pre.fmap[w["x"]]], x)]
            else:
                y, z = part.added_vertices
                required = [(x, y), (y, z), (z, x)]
        elif kind is ReductionKind.PENDANT_TRIANGLE_CUT:
            required = [(part.vertex_map[w["z"]], part.vertex_map[w["y1"]])]
        if all(h.has_arc(*a) for a in required):
            out.append(h)
            continue
        flipped = reverse_all(h)
        if all(flipped.has_arc(*a) for a in required):
            out.append(flipped)
            continue
        raise ConventionViolated(f"{kind.value}: part {i} has neither the required arcs nor their reversal")
    return out


def _bound_checks(applied: AppliedReduction, pre: DiameterProfile, posts: list[DiameterProfile]):
    kind = applied.step.kind
    w = applied.step.witnesses
    checks = []

    def check(name, lhs, terms):
        checks.append(BoundCheck(name, lhs, max(terms)))

    if kind is ReductionKind.DOMINATOR_CUT_SPLIT:
        idx = range(len(posts))
        pairs = [(i, j) for i in idx for j in idx if i != j]
        q = posts
        check("diam2", pre.diam2, [q[i].diam2 for i in idx] + [q[i].diam1 + q[j].diam1 for i, j in pairs])
        check("diam1", pre.diam1, [q[i].diam1 for i in idx] + [q[i].diam1 + q[j].diam0 for i, j in pairs])
        check("diam0", pre.diam0, [q[i].diam0 for i in idx] + [q[i].diam0 + q[j].diam0 for i, j in pairs])
    elif kind is ReductionKind.NON_DOMINATOR_CUT_SPLIT:
        a = posts[0]
        rest = posts[1:]
        pairs = [(p, q) for i, p in enumerate(rest) for j, q in enumerate(rest) if i != j]
        check("diam2", pre.diam2,
              [a.diam2] + [p.diam2 for p in rest] + [p.diam1 + q.diam1 - 3 for p, q in pairs]
              + [a.diam1 + p.diam1 for p in rest] + [a.diam2 + p.diam1 - 2 for p in rest])
        check("diam1", pre.diam1,
              [a.diam1] + [p.diam1 for p in rest] + [p.diam0 + q.diam1 - 3 for p, q in pairs]
              + [a.diam0 + p.diam1 for p in rest] + [a.diam1 + p.diam0 for p in rest]
              + [a.diam2 + p.diam0 - 2 for p in rest] + [a.diam1 + p.diam1 - 2 for p in rest])
        check("diam0", pre.diam0,
              [a.diam0] + [p.diam0 for p in rest] + [p.diam0 + q.diam0 - 3 for p, q in pairs]
              + [a.diam0 + p.diam0 for p in rest] + [a.diam1 + p.diam0 - 2 for p in rest])
    elif kind in (ReductionKind.PENDANT_TRIANGLE_CUT, ReductionKind.TWO_PLUS_THREE_PATH):
        check("extension_bound", pre.extension_bound, [posts[0].extension_bound + 4])
    elif kind is ReductionKind.DOUBLE_TWO_PATH:
        q = posts[0]
        check("diam2", pre.diam2, [q.diam2 + 3, q.diam1 + 5, 5])
        check("diam1", pre.diam1, [q.diam1 + 3, q.diam0 + 5, 5])
        check("diam0", pre.diam0, [q.diam0 + 3])
    elif kind is ReductionKind.THETA_PAIR:
        q = posts[0]
        check("diam2", pre.diam2, [q.diam2 + 7, q.diam1 + 9, 9])
        check("diam1", pre.diam1, [q.diam1 + 7, q.diam0 + 9, 9])
        check("diam0", pre.diam0, [q.diam0 + 7])
    elif kind is ReductionKind.DOMINATOR_CYCLE:
        q, k = posts[0], w["k"]
        check("diam2", pre.diam2, [q.diam2 + 3 * k - 2, q.diam1 + 3 * k - 1, 3 * k - 1])
        check("diam1", pre.diam1, [q.diam1 + 3 * k - 2, q.diam0 + 3 * k - 1, 3 * k - 1])
        check("diam0", pre.diam0, [q.diam0 + 3 * k - 2, 3 * k - 3])
    elif kind is ReductionKind.SPECIAL_CYCLE:
        q, s = posts[0], 3 * w["k"] + w["y"]
        check("diam2", pre.diam2, [q.diam2 + s - 2, q.diam1 + s, s + 3])
        check("diam1", pre.diam1, [q.diam1 + s, q.diam0 + s, s + 3])
        check("diam0", pre.diam0, [q.diam0 + s, s + 3])
    return checks


def lift_orientation(applied: AppliedReduction, orientations: Sequence[Orientation], check: bool = True) -> Lifted:
    """Orientation of the rewritten pair built from one orientation per part."""
    if len(orientations) != len(applied.parts):
        raise ValueError("need exactly one orientation per part")
    for part, h in zip(applied.parts, orientations):
        if h.base != part.pair.graph:
            raise ValueError("orientation does not belong to its part")
        if not is_strongly_connected(h):
            raise NotStrong("part orientation is not strongly connected")
    hs = _normalise(applied, list(orientations))
    arcs = {}
    for part, h in zip(applied.parts, hs):
        for e, pe in part.edge_map.items():
            t, _ = h.direction(*pe)
            a, b = e
            arcs[e] = (a, b) if part.vertex_map[a] == t else (b, a)
    for t, hd in _special_arcs(applied):
        arcs[edge_key(t, hd)] = (t, hd)
    out = Orientation.from_arcs(applied.pre.graph, arcs.values())
    profile = diam_profile(out, applied.pre.dset)
    posts = [diam_profile(h, part.pair.dset) for part, h in zip(applied.parts, hs)]
    checks = tuple(_bound_checks(applied, profile, posts))
    if check:
        bad = [c for c in checks if not c.ok]
        if bad:
            text = ", ".join(f"{c.name} {c.lhs} > {c.rhs}" for c in bad)
            raise LiftBoundError(f"{applied.step.kind.value}: {text}")
    return Lifted(out, profile, checks)


# ---------------------------------------------------------------- structure facts


def same_dominator_edges_without_cut(pair: DominatedPair) -> list[tuple[int, int]]:
    """Edges between two non-dominators with the same dominator where neither end is a cut vertex."""
    cuts = find_cut_vertices(pair.graph)
    f = pair.fmap
    out = []
    for a, b in pair.graph.edges:
        if a in pair.dset or b in pair.dset:
            continue
        if f[a] == f[b] and a not in cuts and b not in cuts:
            out.append((a, b))
    return out


def shared_dominator_wedges_without_cut(pair: DominatedPair) -> list[tuple[int, int, int]]:
    """Wedges y1-x-y2 of non-dominators with f(y1) = f(y2) != f(x) and no cut vertex among them."""
    cuts = find_cut_vertices(pair.graph)
    f, dset, adj = pair.fmap, pair.dset, pair.graph.adj
    out = []
    for x in range(pair.graph.n):
        if x in dset:
            continue
        ys = [y for y in adj[x] if y not in dset and f[y] != f[x]]
        for y1, y2 in itertools.combinations(sorted(ys), 2):
            if f[y1] == f[y2] and not ({x, y1, y2} & cuts):
                out.append((x, y1, y2))
    return out


# ---------------------------------------------------------------- driver


@dataclass
class ReductionNode:
    """A pair, its normal form, the minimal subgraph, and the rewrite applied there."""

    pair: DominatedPair
    form: StandardFormPair
    form_trace: TransformTrace
    core: SubgraphView
    applied: AppliedReduction | None = None
    children: list = field(default_factory=list)

    @property
    def is_leaf(self) -> bool:
        return self.applied is None

    @property
    def size_ok(self) -> bool:
        d = len(self.core.pair.dset)
        return self.core.graph.n <= 4 * (d - 1) + 1


@dataclass
class ReductionTrace:
    root: ReductionNode

    def nodes(self) -> list[ReductionNode]:
        out, stack = [], [self.root]
        while stack:
            node = stack.pop()
            out.append(node)
            stack.extend(reversed(node.children))
        return out

    @property
    def steps(self) -> list[ReductionStep]:
        return [n.applied.step for n in self.nodes() if n.applied is not None]

    @property
    def original(self) -> StandardFormPair:
        return self.root.form

    @property
    def leaves(self) -> list[ReductionNode]:
        return [n for n in self.nodes() if n.is_leaf]

    @property
    def final(self) -> list[DominatedPair]:
        return [n.core.pair for n in self.leaves]

    @property
    def size_ok(self) -> bool:
        return all(n.size_ok for n in self.leaves)

    def __len__(self):
        return len(self.steps)


def minimal_core(pair: DominatedPair):
    """Normal form of ``pair`` and a minimal subgraph of it."""
    form, trace = to_first_standard_form(pair)
    tree = build_dominating_tree(form.pair)
    core = fix_to_bridgeless(form.pair, tree)
    return form, trace, extract_minimal_subgraph(form.pair, core)


def _node(pair: DominatedPair, reduce: bool = True) -> ReductionNode:
    form, trace, core = minimal_core(pair)
    node = ReductionNode(pair, form, trace, core)
    if not reduce:
        return node
    step = detect_reduction(core.pair)
    if step is not None:
        node.applied = apply_reduction(core.pair, step)
        node.children = [_node(part.pair) for part in node.applied.parts]
    return node


def reduce_to_fixpoint(s) -> ReductionTrace:
    """Rewrite until no kind applies to any minimal subgraph.

    Every rewrite lowers |D| in each part it produces, so this terminates.
    """
    pair = getattr(s, "pair", s)
    return ReductionTrace(_node(pair))


def _orient_leaf(node: ReductionNode) -> Orientation:
    sub = node.core.pair
    if node.size_ok:
        return robbins_orient(sub.graph)
    bound = 4 * len(sub.dset)
    if sub.graph.m <= LEAF_SEARCH_EDGES:
        value, h = min_extension_bound_orientation(sub.graph, sub.dset, budget=bound, max_edges=LEAF_SEARCH_EDGES)
        if value <= bound:
            return h
        raise ReductionStalled(f"irreducible core with |D|={len(sub.dset)} has no orientation within {bound}")
    raise ReductionStalled(f"irreducible core too large: {sub.graph.n} vertices for |D|={len(sub.dset)}")


def orient_node(node: ReductionNode, lifts: list | None = None) -> Orientation:
    """Orientation of ``node.pair`` with extension bound at most 4|D| on its core.

    Raises ReductionStalled, LiftBoundError or ConventionViolated when the
    route fails; ``lifts`` collects every successful lift.
    """
    sub = node.core.pair
    if node.is_leaf:
        h = _orient_leaf(node)
    else:
        child = [orient_node(c, lifts) for c in node.children]
        lifted = lift_orientation(node.applied, child)
        if lifts is not None:
            lifts.append(lifted)
        h = lifted.orientation
    bound = 4 * len(sub.dset)
    w = diam_profile(h, sub.dset).extension_bound
    if w > bound:
        raise ReductionStalled(f"core orientation reaches {w} > 4|D| = {bound}")
    extended = extend_orientation(node.form.pair, node.core, h)
    return pull_back_orientation(node.form_trace, extended)

"""The eight acceptance criteria, one test each, each printing a PASS/FAIL line."""
import math
import random
import time

import networkx as nx
import pytest

from oridiam.generators import gen_family, k4_subdivided, petersen_graph, random_bridgeless_graph
from oridiam.graph import DominatedPair, UndirectedGraph, exact_dominating_set, find_bridges, is_connected, undirected_diameter
from oridiam.orientation import (Orientation, diam_profile, is_strongly_connected, oriented_diameter, reverse_all,
                                 reverse_cycle, reverse_path, robbins_orient)
from oridiam.pipeline import ROUTE_REDUCED, choose_dset, orient_graph
from oridiam.reductions import orient_node, reduce_to_fixpoint
from oridiam.search import exact_min_oriented_diameter
from oridiam.spanning import build_dominating_tree, extend_orientation, extract_minimal_subgraph, fix_to_bridgeless
from oridiam.standard_form import to_first_standard_form, verify_first_standard_form

CENSUS_SEED = 2024
CENSUS_SIZE = 10_000
REVERSAL_SEED = 99
REVERSAL_COUNT = 1000


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\ncriterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok, detail
    return emit


def atlas_graphs(max_edges=None):
    """Connected bridgeless graphs from the networkx atlas (all graphs with at most 7 vertices)."""
    out = []
    for a in nx.graph_atlas_g()[1:]:
        if max_edges is not None and a.number_of_edges() > max_edges:
            continue
        g = UndirectedGraph.from_edges(a.number_of_nodes(), a.edges())
        if is_connected(g) and (g.n == 1 or not find_bridges(g)):
            out.append(g)
    return out


def census():
    """Every atlas graph with at most 12 edges, topped up with seeded random graphs on 8-12 vertices."""
    graphs = atlas_graphs(max_edges=12)
    rng = random.Random(CENSUS_SEED)
    while len(graphs) < CENSUS_SIZE:
        g = random_bridgeless_graph(rng.randint(8, 12), rng, rng.randint(0, 4))
        if g.m <= 12:
            graphs.append(g)
    return graphs


@pytest.fixture(scope="module")
def corpus_runs(corpus):
    start = time.perf_counter()
    runs = []
    instances = [(g, None) for g in corpus] + [gen_family(k) for k in range(1, 6)]
    for g, d in instances:
        h, rep = orient_graph(g, d)
        runs.append((g, h, rep))
    return runs, time.perf_counter() - start


def test_criterion_1_family_values(report):
    got = [exact_min_oriented_diameter(gen_family(k)[0])[0] for k in (1, 2, 3)]
    formula = [math.ceil((7 * k + 1) / 2) for k in (1, 2, 3)]
    report(1, got == [4, 8, 11] == formula, f"family oracle values {got}")


def test_criterion_2_petersen_and_subdivided_k4(report):
    got = [exact_min_oriented_diameter(g)[0] for g in (petersen_graph(), k4_subdivided())]
    report(2, got == [6, 6], f"petersen, subdivided K4 -> {got}")


def test_criterion_3_five_gamma_bound(corpus_runs, report):
    runs, elapsed = corpus_runs
    bad = 0
    for g, h, rep in runs:
        if not is_strongly_connected(h) or diam_profile(h, set(rep.dset)).diam > 5 * rep.gamma - 1:
            bad += 1
    report(3, bad == 0 and elapsed < 120, f"{len(runs)} instances, {bad} violations, {elapsed:.1f}s")


def test_criterion_4_four_gamma_route(corpus_runs, report):
    runs, _ = corpus_runs
    reduced = [r for r in runs if r[2].route == ROUTE_REDUCED]
    bad = sum(1 for g, h, rep in reduced if oriented_diameter(h) > 4 * rep.gamma)
    fallback = 1 - len(reduced) / len(runs)
    report(4, bad == 0, f"{len(reduced)}/{len(runs)} on the 4gamma route, {bad} violations, fallback {fallback:.1%}")


def test_criterion_5_oracle_sandwich(report):
    start = time.perf_counter()
    graphs = census()
    bad = 0
    for g in graphs:
        _, rep = orient_graph(g)
        best, _ = exact_min_oriented_diameter(g)
        gamma = len(exact_dominating_set(g))
        if not undirected_diameter(g) <= best <= rep.profile.diam <= 4 * gamma:
            bad += 1
    elapsed = time.perf_counter() - start
    report(5, bad == 0 and len(graphs) >= 10_000 and elapsed < 1800,
           f"{len(graphs)} graphs, {bad} violations, {elapsed:.1f}s")


def test_criterion_6_single_dominator(report):
    graphs = [g for g in atlas_graphs() if len(exact_dominating_set(g)) == 1]
    worst = max(exact_min_oriented_diameter(g)[0] for g in graphs)
    report(6, worst <= 4, f"{len(graphs)} graphs with domination number 1, worst oracle value {worst}")


def test_criterion_7_transformation_invariants(corpus, report):
    failures = []
    lift_checks = 0
    for i, g in enumerate(corpus):
        pair = DominatedPair(g, choose_dset(g)[0])
        form, _ = to_first_standard_form(pair)
        k = len(form.dset)
        if verify_first_standard_form(form):
            failures.append((i, "standard form"))
        core = fix_to_bridgeless(form.pair, build_dominating_tree(form.pair))
        verts, edges = core.vertices, core.edges
        if len(verts) > 1 and (find_bridges(form.graph.subgraph(verts, edges)[0]) or len(verts) > 5 * k - 4):
            failures.append((i, "bridgeless core"))
        view = extract_minimal_subgraph(form, core)
        h = robbins_orient(view.graph)
        out = extend_orientation(form.pair, view, h, check=False)
        if diam_profile(out, form.dset).diam > diam_profile(h, view.pair.dset).extension_bound:
            failures.append((i, "extension"))
        lifts = []
        orient_node(reduce_to_fixpoint(pair).root, lifts)
        for lifted in lifts:
            lift_checks += len(lifted.checks)
            if not all(c.ok for c in lifted.checks):
                failures.append((i, "lift"))
    report(7, not failures, f"{len(corpus)} instances, {lift_checks} lift inequalities, failures {failures[:5]}")


def test_criterion_8_reversal_facts(report):
    rng = random.Random(REVERSAL_SEED)
    done = bad = 0
    while done < REVERSAL_COUNT:
        g = random_bridgeless_graph(rng.randint(3, 10), rng, rng.randint(0, 4))
        h = Orientation.from_arcs(g, [(u, v) if rng.random() < 0.5 else (v, u) for u, v in g.edges])
        if not is_strongly_connected(h):
            continue
        done += 1
        if oriented_diameter(reverse_all(h)) != oriented_diameter(h):
            bad += 1
        cycle = _random_cycle(h, rng)
        if not is_strongly_connected(reverse_cycle(h, cycle)):
            bad += 1
        path = _path_with_twin(h, rng)
        if path is not None and not is_strongly_connected(reverse_path(h, path)):
            bad += 1
    report(8, bad == 0, f"{done} random strong orientations, {bad} violations")


def _bfs_path(h, src, dst, banned=frozenset()):
    prev = {src: None}
    queue = [src]
    for v in queue:
        for w in h.out_adj[v]:
            if (v, w) not in banned and w not in prev:
                prev[w] = v
                queue.append(w)
    if dst not in prev:
        return None
    arcs = []
    while prev[dst] is not None:
        arcs.append((prev[dst], dst))
        dst = prev[dst]
    return arcs[::-1]


def _random_cycle(h, rng):
    t, hd = h.arcs[rng.randrange(len(h.arcs))]
    return [(t, hd)] + _bfs_path(h, hd, t)


def _path_with_twin(h, rng):
    x, y = rng.sample(range(h.base.n), 2)
    first = _bfs_path(h, x, y)
    return first if _bfs_path(h, x, y, frozenset(first)) is not None else None

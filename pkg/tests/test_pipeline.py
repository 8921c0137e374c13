import json

import pytest

from oridiam.errors import HasBridge, NotConnected, NotDominating
from oridiam.generators import cycle_graph, gen_family, petersen_graph
from oridiam.graph import UndirectedGraph
from oridiam.orientation import diam_profile, is_strongly_connected
from oridiam.pipeline import ROUTE_FOMIN, ROUTE_ORACLE, ROUTE_REDUCED, choose_dset, orient_graph
from oridiam.search import exact_min_oriented_diameter


def check_report(g, h, report):
    assert is_strongly_connected(h)
    assert report.profile == diam_profile(h, set(report.dset))
    assert report.gamma == len(report.dset)
    if report.route == ROUTE_REDUCED:
        assert report.within_4gamma
    assert report.within_5gamma_minus_1


def test_family_two():
    g, d = gen_family(2)
    h, report = orient_graph(g, d)
    check_report(g, h, report)
    assert report.profile.diam <= 8


def test_petersen():
    g = petersen_graph()
    h, report = orient_graph(g)
    check_report(g, h, report)
    assert report.gamma == 3 and report.dset_mode == "exact"
    assert exact_min_oriented_diameter(g)[0] == 6 <= report.profile.diam <= 12


def test_hexagon_forced():
    h, report = orient_graph(cycle_graph(6), {0, 3})
    assert report.profile.diam == 5 <= 8
    assert report.dset_mode == "given"


@pytest.mark.parametrize("route,expected", [("fomin", ROUTE_FOMIN), ("oracle", ROUTE_ORACLE), ("reduced", ROUTE_REDUCED)])
def test_forced_routes(route, expected):
    g, d = gen_family(3)
    h, report = orient_graph(g, d, route=route)
    check_report(g, h, report)
    assert report.route == expected


def test_oracle_route_is_optimal():
    g, d = gen_family(2)
    _, report = orient_graph(g, d, route="oracle")
    assert report.profile.diam == 8


def test_errors():
    with pytest.raises(HasBridge):
        orient_graph(UndirectedGraph.from_edges(3, [(0, 1), (1, 2)]))
    with pytest.raises(NotConnected):
        orient_graph(UndirectedGraph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]))
    with pytest.raises(NotDominating):
        orient_graph(cycle_graph(6), {0})
    with pytest.raises(ValueError):
        orient_graph(cycle_graph(5), route="scenic")


def test_choose_dset_modes():
    g = cycle_graph(40)
    d, mode = choose_dset(g)
    assert mode == "greedy"
    d, mode = choose_dset(cycle_graph(9))
    assert mode == "exact" and len(d) == 3


def test_report_json_keys():
    _, report = orient_graph(petersen_graph())
    data = json.loads(json.dumps(report.as_dict()))
    assert set(data) == {"n", "m", "bridges", "dset", "gamma", "dset_mode", "route", "profile", "bound_4gamma",
                         "bound_5gamma_minus_1", "within_4gamma", "within_5gamma_minus_1", "trace_length",
                         "standard_form_steps", "fallback_reason", "wall_time"}
    assert data["bound_4gamma"] == 12 and data["bound_5gamma_minus_1"] == 14


def test_corpus_soundness(corpus):
    for g in corpus:
        h, report = orient_graph(g)
        check_report(g, h, report)

"""End-to-end orientation of a bridgeless graph with a diameter guarantee."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from .errors import ConventionViolated, HasBridge, LiftBoundError, NotConnected, ReductionStalled
from .graph import EXACT_DOMINATION_LIMIT, DominatedPair, UndirectedGraph, find_bridges, is_connected, min_dominating_set
from .orientation import DiameterProfile, Orientation, diam_profile, robbins_orient
from .reductions import minimal_core, orient_node, reduce_to_fixpoint
from .search import exact_min_oriented_diameter
from .spanning import extend_orientation
from .standard_form import pull_back_orientation

ROUTE_REDUCED = "reduced-4gamma"
ROUTE_FOMIN = "fomin-5gamma-1"
ROUTE_ORACLE = "oracle"
# graphs up to this many edges may fall back to the exact search in "auto" mode
ORACLE_FALLBACK_EDGES = 20


@dataclass
class OrientationReport:
    n: int
    m: int
    bridges: list
    dset: list
    gamma: int
    dset_mode: str
    route: str
    profile: DiameterProfile
    trace_length: int = 0
    standard_form_steps: int = 0
    fallback_reason: str | None = None
    wall_time: float = 0.0
    lifts: list = field(default_factory=list, repr=False)

    @property
    def bound_4gamma(self) -> int:
        return 4 * self.gamma

    @property
    def bound_5gamma_minus_1(self) -> int:
        return 5 * self.gamma - 1

    @property
    def within_4gamma(self) -> bool:
        return self.profile.diam <= self.bound_4gamma

    @property
    def within_5gamma_minus_1(self) -> bool:
        return self.profile.diam <= self.bound_5gamma_minus_1

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "bridges": [list(e) for e in self.bridges],
            "dset": list(self.dset),
            "gamma": self.gamma,
            "dset_mode": self.dset_mode,
            "route": self.route,
            "profile": self.profile.as_dict(),
            "bound_4gamma": self.bound_4gamma,
            "bound_5gamma_minus_1": self.bound_5gamma_minus_1,
            "within_4gamma": self.within_4gamma,
            "within_5gamma_minus_1": self.within_5gamma_minus_1,
            "trace_length": self.trace_length,
            "standard_form_steps": self.standard_form_steps,
            "fallback_reason": self.fallback_reason,
            "wall_time": round(self.wall_time, 6),
        }


def choose_dset(g: UndirectedGraph, mode: str = "auto", exact_limit: int = EXACT_DOMINATION_LIMIT):
    """Dominating set and the mode actually used ("exact" or "greedy")."""
    if mode == "auto":
        mode = "exact" if g.n <= exact_limit else "greedy"
    return min_dominating_set(g, mode, exact_limit), mode


def _fomin(form, trace, core) -> Orientation:
    h = robbins_orient(core.graph)
    return pull_back_orientation(trace, extend_orientation(form.pair, core, h))


def orient_graph(g: UndirectedGraph, dset=None, *, route: str = "auto", dset_mode: str = "auto",
                 exact_limit: int = EXACT_DOMINATION_LIMIT):
    """Strong orientation of ``g`` and a report.

    ``route`` is "auto" (reductions, then the exact search on small graphs,
    then the plain 5|D|-1 construction), "reduced" (reductions, falling back
    to the 5|D|-1 construction), "fomin" or "oracle".
    """
    start = time.perf_counter()
    if not is_connected(g):
        raise NotConnected("graph is not connected")
    bridges = find_bridges(g)
    if bridges:
        raise HasBridge(bridges)
    if dset is None:
        dset, used_mode = choose_dset(g, dset_mode, exact_limit)
    else:
        dset, used_mode = frozenset(dset), "given"
    pair = DominatedPair(g, dset)

    reason = None
    trace_length = 0
    sf_steps = 0
    lifts: list = []
    h = None
    taken = None
    if route == ROUTE_ORACLE:
        _, h = exact_min_oriented_diameter(g)
        taken = ROUTE_ORACLE
    elif route in ("auto", "reduced"):
        trace = reduce_to_fixpoint(pair)
        trace_length = len(trace)
        sf_steps = len(trace.root.form_trace)
        try:
            h = orient_node(trace.root, lifts)
            taken = ROUTE_REDUCED
        except (ReductionStalled, LiftBoundError, ConventionViolated) as exc:
            reason = f"{type(exc).__name__}: {exc}"
            lifts = []
            if route == "auto" and g.m <= ORACLE_FALLBACK_EDGES:
                _, h = exact_min_oriented_diameter(g, budget=4 * len(dset), max_edges=ORACLE_FALLBACK_EDGES)
                taken = ROUTE_ORACLE
            else:
                root = trace.root
                h = _fomin(root.form, root.form_trace, root.core)
                taken = ROUTE_FOMIN
    elif route == "fomin":
        form, ftrace, core = minimal_core(pair)
        sf_steps = len(ftrace)
        h = _fomin(form, ftrace, core)
        taken = ROUTE_FOMIN
    else:
        raise ValueError(f"unknown route {route!r}")

    profile = diam_profile(h, dset)
    report = OrientationReport(
        n=g.n, m=g.m, bridges=[], dset=sorted(dset), gamma=len(dset), dset_mode=used_mode, route=taken,
        profile=profile, trace_length=trace_length, standard_form_steps=sf_steps, fallback_reason=reason,
        wall_time=time.perf_counter() - start, lifts=lifts,
    )
    return h, report

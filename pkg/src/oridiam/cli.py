"""Command-line interface: ``oridiam <command> ...``.

Exit status is 0 on success, 1 when ``verify`` finds a violated bound or a
non-strong orientation, and 2 on any input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .errors import OriDiamError
from .generators import gen_family, gen_named
from .graph import is_dominating_set, min_dominating_set
from .io import format_arcs, format_dset, format_graph, parse_arcs, parse_dset, parse_graph, read_text, write_text
from .orientation import diam_profile, is_strongly_connected
from .pipeline import choose_dset, orient_graph
from .search import DEFAULT_MAX_EDGES, exact_min_oriented_diameter


class InputError(Exception):
    pass


def _emit(text: str, path: str | None, stdout) -> None:
    if path and path != "-":
        write_text(path, text)
    else:
        stdout.write(text)


def _load_graph(path: str, stdin):
    return parse_graph(read_text(path, stdin))


def _dset(spec: str, g, stdin):
    if spec.startswith("@"):
        dset = parse_dset(read_text(spec[1:], stdin))
        if any(not 0 <= v < g.n for v in dset):
            raise InputError("dominating set names a vertex outside the graph")
        if not is_dominating_set(g, dset):
            raise InputError("given vertex set does not dominate the graph")
        return dset, "given"
    if spec not in ("auto", "exact", "greedy"):
        raise InputError(f"--dset must be auto, exact, greedy or @file, not {spec!r}")
    return choose_dset(g, spec)


def _report_text(rep: dict) -> str:
    prof = rep["profile"]
    lines = [
        f"n {rep['n']} m {rep['m']}",
        f"dset {' '.join(map(str, rep['dset']))} (gamma {rep['gamma']}, {rep['dset_mode']})",
        f"route {rep['route']}",
        f"diam {prof['diam']} diam0 {prof['diam0']} diam1 {prof['diam1']} diam2 {prof['diam2']}",
        f"4gamma {rep['bound_4gamma']} {'ok' if rep['within_4gamma'] else 'exceeded'}",
        f"5gamma-1 {rep['bound_5gamma_minus_1']} {'ok' if rep['within_5gamma_minus_1'] else 'exceeded'}",
    ]
    if rep.get("fallback_reason"):
        lines.append(f"fallback {rep['fallback_reason']}")
    return "\n".join(lines) + "\n"


def cmd_orient(args, stdin, stdout, stderr) -> int:
    g = _load_graph(args.graph, stdin)
    dset, mode = _dset(args.dset, g, stdin)
    h, report = orient_graph(g, dset, route=args.route)
    report.dset_mode = mode
    rep = report.as_dict()
    _emit(format_arcs(h), args.output, stdout)
    text = json.dumps(rep, sort_keys=True) + "\n" if args.report == "json" else _report_text(rep)
    # keep stdout clean for the arcs when they go there
    (stdout if args.output and args.output != "-" else stderr).write(text)
    return 0


def cmd_mindiam(args, stdin, stdout, stderr) -> int:
    g = _load_graph(args.graph, stdin)
    value, h = exact_min_oriented_diameter(g, budget=args.budget, max_edges=args.max_edges, threads=args.threads)
    if args.output:
        write_text(args.output, format_arcs(h))
    stdout.write(f"{value}\n")
    return 0


def cmd_dominate(args, stdin, stdout, stderr) -> int:
    g = _load_graph(args.graph, stdin)
    dset = min_dominating_set(g, "exact" if args.exact else "greedy")
    stdout.write(format_dset(dset))
    return 0


def cmd_gen(args, stdin, stdout, stderr) -> int:
    if args.what == "family":
        g, dset = gen_family(args.gamma)
        if args.dset_out:
            write_text(args.dset_out, format_dset(dset))
        text = format_graph(g, f"family gamma={args.gamma}")
    else:
        g = gen_named(args.name)
        text = format_graph(g, args.name)
    _emit(text, args.output, stdout)
    return 0


def cmd_verify(args, stdin, stdout, stderr) -> int:
    g = _load_graph(args.graph, stdin)
    h = parse_arcs(read_text(args.arcs, stdin), g)
    dset, _ = _dset(args.dset, g, stdin)
    gamma = len(dset)
    if not is_strongly_connected(h):
        stdout.write("strong no\n")
        return 1
    prof = diam_profile(h, dset)
    ok4 = prof.diam <= 4 * gamma
    ok5 = prof.diam <= 5 * gamma - 1
    stdout.write(f"strong yes\ndiam {prof.diam} diam0 {prof.diam0} diam1 {prof.diam1} diam2 {prof.diam2}\n")
    stdout.write(f"gamma {gamma}\n4gamma {4 * gamma} {'ok' if ok4 else 'exceeded'}\n")
    stdout.write(f"5gamma-1 {5 * gamma - 1} {'ok' if ok5 else 'exceeded'}\n")
    if not ok5 or (args.require_4gamma and not ok4):
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oridiam", description="Strong orientations with small diameter.")
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("orient", help="orient a bridgeless graph")
    o.add_argument("graph", nargs="?", default="-")
    o.add_argument("--dset", default="auto", help="auto, exact, greedy or @file")
    o.add_argument("--route", default="auto", choices=["auto", "reduced", "fomin", "oracle"])
    o.add_argument("-o", "--output")
    o.add_argument("--report", default="text", choices=["text", "json"])
    o.set_defaults(func=cmd_orient)

    m = sub.add_parser("mindiam", help="exact minimum oriented diameter")
    m.add_argument("graph", nargs="?", default="-")
    m.add_argument("--budget", type=int)
    m.add_argument("--max-edges", type=int, default=DEFAULT_MAX_EDGES)
    m.add_argument("--threads", type=int, default=1)
    m.add_argument("-o", "--output")
    m.set_defaults(func=cmd_mindiam)

    d = sub.add_parser("dominate", help="dominating set as 'd' lines")
    d.add_argument("graph", nargs="?", default="-")
    d.add_argument("--exact", action="store_true")
    d.set_defaults(func=cmd_dominate)

    gen = sub.add_parser("gen", help="write a generated graph")
    gsub = gen.add_subparsers(dest="what", required=True)
    fam = gsub.add_parser("family")
    fam.add_argument("--gamma", type=int, required=True)
    fam.add_argument("--dset-out")
    fam.add_argument("-o", "--output")
    named = gsub.add_parser("named")
    named.add_argument("name")
    named.add_argument("-o", "--output")
    gen.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="check an orientation file")
    v.add_argument("graph")
    v.add_argument("arcs")
    v.add_argument("--dset", default="auto", help="auto, exact, greedy or @file")
    v.add_argument("--require-4gamma", action="store_true")
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args, stdin, stdout, stderr)
    except (OriDiamError, InputError, OSError, ValueError) as exc:
        stderr.write(f"oridiam: error: {exc}\n")
        return 2

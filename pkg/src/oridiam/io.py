"""Plain-text formats for graphs, orientations and vertex sets.

Graph file::

    c optional comment
    p <n> <m>
    e <u> <v>        (m lines, 0-based, u < v)

Orientation files use ``a <tail> <head>`` lines after the same header, and
vertex-set files use ``d <v>`` lines with no header.  Lines starting with
``c`` and blank lines are ignored; any other line type is an error.
"""
from __future__ import annotations

from typing import Iterable, TextIO

from .errors import GraphFormatError
from .graph import UndirectedGraph, edge_key
from .orientation import Orientation


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        fields = line.split()
        yield lineno, fields[0], fields[1:]


def _ints(lineno: int, args, count: int):
    if len(args) != count:
        raise GraphFormatError(f"line {lineno}: expected {count} fields, got {len(args)}")
    try:
        return [int(a) for a in args]
    except ValueError:
        raise GraphFormatError(f"line {lineno}: fields must be integers") from None


def _parse(text: str, body_tag: str):
    n = m = None
    items = []
    for lineno, tag, args in _records(text):
        if tag == "p":
            if n is not None:
                raise GraphFormatError(f"line {lineno}: second header")
            n, m = _ints(lineno, args, 2)
            if n < 0 or m < 0:
                raise GraphFormatError(f"line {lineno}: negative size")
        elif tag == body_tag:
            if n is None:
                raise GraphFormatError(f"line {lineno}: '{tag}' line before the 'p' header")
            u, v = _ints(lineno, args, 2)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphFormatError(f"line {lineno}: vertex out of range 0..{n - 1}")
            if u == v:
                raise GraphFormatError(f"line {lineno}: loop at {u}")
            items.append((u, v))
        else:
            raise GraphFormatError(f"line {lineno}: unknown line type {tag!r}")
    if n is None:
        raise GraphFormatError("missing 'p' header")
    if len(items) != m:
        raise GraphFormatError(f"header announces {m} lines, found {len(items)}")
    return n, items


def parse_graph(text: str) -> UndirectedGraph:
    n, edges = _parse(text, "e")
    if any(u > v for u, v in edges):
        raise GraphFormatError("edge lines must list the smaller endpoint first")
    if len({edge_key(u, v) for u, v in edges}) != len(edges):
        raise GraphFormatError("repeated edge")
    return UndirectedGraph.from_edges(n, edges)


def format_graph(g: UndirectedGraph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p {g.n} {g.m}")
    lines += [f"e {u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_arcs(text: str, base: UndirectedGraph) -> Orientation:
    n, arcs = _parse(text, "a")
    if n != base.n:
        raise GraphFormatError(f"orientation has {n} vertices, graph has {base.n}")
    try:
        return Orientation.from_arcs(base, arcs)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from None


def format_arcs(h: Orientation) -> str:
    lines = [f"p {h.base.n} {h.base.m}"]
    lines += [f"a {t} {hd}" for t, hd in h.arcs]
    return "\n".join(lines) + "\n"


def parse_dset(text: str) -> frozenset[int]:
    out = set()
    for lineno, tag, args in _records(text):
        if tag != "d":
            raise GraphFormatError(f"line {lineno}: unknown line type {tag!r}")
        (v,) = _ints(lineno, args, 1)
        out.add(v)
    return frozenset(out)


def format_dset(dset: Iterable[int]) -> str:
    return "".join(f"d {v}\n" for v in sorted(dset))


def read_text(path: str, stdin: TextIO) -> str:
    if path == "-":
        return stdin.read()
    with open(path, encoding="ascii") as fh:
        return fh.read()


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(text)

"""Digraph text formats: json and edgelist round-trip, dot is export-only.

json: {"n": <int>, "edges": [[u,v],...]} with edges sorted lexicographically.
edgelist: first line n, then one "u v" pair per line; '#' starts a comment.
dot: `digraph G { ... }` with bare integer node ids.
"""

from __future__ import annotations

import json

from .digraph import Digraph, build
from .errors import FormatUnsupported, ParseError

FORMATS = ("json", "edgelist", "dot")


def encode(g: Digraph, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(to_json_obj(g), separators=(",", ":"))
    if fmt == "edgelist":
        lines = [str(g.n)]
        lines.extend(f"{u} {v}" for u, v in g.edge_list())
        return "\n".join(lines) + "\n"
    if fmt == "dot":
        lines = ["digraph G {"]
        lines.extend(f"  {v};" for v in range(g.n))
        lines.extend(f"  {u} -> {v};" for u, v in g.edge_list())
        lines.append("}")
        return "\n".join(lines) + "\n"
    raise FormatUnsupported(f"unknown format {fmt!r}")


def decode(text: str, fmt: str = "json") -> Digraph:
    if fmt == "json":
        return _decode_json(text)
    if fmt == "edgelist":
        return _decode_edgelist(text)
    if fmt == "dot":
        raise FormatUnsupported("dot is export-only")
    raise FormatUnsupported(f"unknown format {fmt!r}")


def to_json_obj(g: Digraph) -> dict:
    return {"n": g.n, "edges": [[u, v] for u, v in g.edge_list()]}


def from_json_obj(obj) -> Digraph:
    if not isinstance(obj, dict):
        raise ParseError("expected a JSON object with keys 'n' and 'edges'")
    if "n" not in obj:
        raise ParseError("missing key 'n'")
    n = obj["n"]
    if not isinstance(n, int) or isinstance(n, bool):
        raise ParseError("'n' must be an integer")
    edges = obj.get("edges", [])
    if not isinstance(edges, list):
        raise ParseError("'edges' must be a list of [u,v] pairs")
    pairs = []
    for e in edges:
        if (
            not isinstance(e, list)
            or len(e) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)
        ):
            raise ParseError(f"bad edge entry {e!r}, expected [u,v]")
        pairs.append((e[0], e[1]))
    return build(n, pairs)


def _decode_json(text: str) -> Digraph:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno, column=exc.colno) from None
    return from_json_obj(obj)


def _decode_edgelist(text: str) -> Digraph:
    n = None
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        fields = line.split()
        if n is None:
            if len(fields) != 1:
                raise ParseError("first line must be the vertex count", line=lineno, column=1)
            n = _parse_int(fields[0], lineno, raw.index(fields[0]) + 1)
            continue
        if len(fields) != 2:
            raise ParseError("expected 'u v'", line=lineno, column=1)
        u = _parse_int(fields[0], lineno, raw.index(fields[0]) + 1)
        v = _parse_int(fields[1], lineno, raw.index(fields[1], raw.index(fields[0]) + len(fields[0])) + 1)
        pairs.append((u, v))
    if n is None:
        raise ParseError("empty edgelist input", line=1, column=1)
    return build(n, pairs)


def _parse_int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line=line, column=col) from None
